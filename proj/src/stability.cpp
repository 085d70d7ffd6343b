#include "shapeinv/stability.hpp"

#include <cmath>

#include "shapeinv/errors.hpp"

namespace shapeinv {

StabilityConfig make_stability_config(double r_sigma, double f, double g) {
    if (!(r_sigma > 0.0 && f > 0.0 && g > 0.0))
        throw DomainError("require r_sigma > 0, f > 0, g > 0");
    return StabilityConfig{r_sigma, f, g};
}

namespace {

void check_rho0(double rho0, const StabilityConfig& cfg) {
    if (!(rho0 > 0.0 && rho0 < cfg.r_sigma))
        throw DomainError("rho0 outside (0, r_sigma)");
}

} // namespace

Coefficients coefficients(double rho0, const StabilityConfig& cfg) {
    check_rho0(rho0, cfg);
    return {cfg.f / std::log(cfg.r_sigma / rho0), cfg.g * cfg.r_sigma};
}

double rho0_rhs(double rho0, const StabilityConfig& cfg) {
    const Coefficients c = coefficients(rho0, cfg);
    return (c.C_N - c.C_D) / rho0;
}

Determinants determinants(int k, double rho0, const StabilityConfig& cfg) {
    check_rho0(rho0, cfg);
    if (k < 1) throw DomainError("wavenumber k must be >= 1");
    const double q = cfg.r_sigma / rho0;  // > 1
    const double qk = std::pow(q, k);
    return {qk - 1.0 / qk, qk + 1.0 / qk};
}

TildeCoefficients tilde_coefficients(int k, double rho0, const StabilityConfig& cfg) {
    const Coefficients c = coefficients(rho0, cfg);
    const Determinants d = determinants(k, rho0, cfg);
    const double rsk = std::pow(cfg.r_sigma, k);
    TildeCoefficients tc;
    tc.a_D = c.C_D / (rho0 * d.det_D) / rsk;
    tc.b_D = -c.C_D / (rho0 * d.det_D) * rsk;
    tc.a_N = -c.C_N / (rho0 * d.det_N) / rsk;
    tc.b_N = -c.C_N / (rho0 * d.det_N) * rsk;
    return tc;
}

double lambda_k(int k, double rho0, const StabilityConfig& cfg) {
    const Coefficients c = coefficients(rho0, cfg);
    const Determinants d = determinants(k, rho0, cfg);
    const double rho2 = rho0 * rho0;
    return -(k / rho2) * (c.C_D * d.det_N / d.det_D + cfg.g * d.det_D / d.det_N) +
           (c.C_D - c.C_N) / rho2;
}

std::vector<ModeSample> evolve_mode(const ModeState& mode, const StabilityConfig& cfg,
                                    double dt, double T) {
    check_rho0(mode.rho0, cfg);
    if (mode.k < 1) throw DomainError("wavenumber k must be >= 1");
    if (!(dt > 0.0 && T > 0.0)) throw DomainError("require dt > 0 and T > 0");

    struct State {
        double rho0, amp;
    };
    auto rhs = [&](const State& s) -> State {
        return {rho0_rhs(s.rho0, cfg), lambda_k(mode.k, s.rho0, cfg) * s.amp};
    };
    auto in_domain = [&](const State& s) {
        return s.rho0 > 0.0 && s.rho0 < cfg.r_sigma;
    };
    auto rk4_step = [&](const State& s, double h, State& out) -> bool {
        const State k1 = rhs(s);
        const State s2{s.rho0 + 0.5 * h * k1.rho0, s.amp + 0.5 * h * k1.amp};
        if (!in_domain(s2)) return false;
        const State k2 = rhs(s2);
        const State s3{s.rho0 + 0.5 * h * k2.rho0, s.amp + 0.5 * h * k2.amp};
        if (!in_domain(s3)) return false;
        const State k3 = rhs(s3);
        const State s4{s.rho0 + h * k3.rho0, s.amp + h * k3.amp};
        if (!in_domain(s4)) return false;
        const State k4 = rhs(s4);
        out = {s.rho0 + h / 6.0 * (k1.rho0 + 2.0 * k2.rho0 + 2.0 * k3.rho0 + k4.rho0),
               s.amp + h / 6.0 * (k1.amp + 2.0 * k2.amp + 2.0 * k3.amp + k4.amp)};
        return in_domain(out);
    };

    std::vector<ModeSample> traj;
    State s{mode.rho0, mode.amplitude};
    traj.push_back({0.0, s.rho0, s.amp});
    double t = 0.0;
    while (t < T - 1e-15 * T) {
        double h = std::min(dt, T - t);
        State next = s;
        while (!rk4_step(s, h, next)) {
            h *= 0.5;
            if (h < 1e-12 * T)
                throw StepUnderflowError("step underflow near the rho0 barrier");
        }
        t += h;
        s = next;
        traj.push_back({t, s.rho0, s.amp});
    }
    return traj;
}

} // namespace shapeinv
