#include "shapeinv/radial.hpp"

#include <cmath>

#include "shapeinv/errors.hpp"

namespace shapeinv {

double RadialConfig::g() const {
    if (dimension == 2) return f / (R * std::log(R / r_star));
    return f * r_star / (R * (R - r_star));
}

RadialConfig make_radial_config(double R, double r_star, double f, int dimension) {
    if (!(0.0 < r_star && r_star < R)) throw DomainError("require 0 < r_star < R");
    if (!(f > 0.0)) throw DomainError("require f > 0");
    if (dimension != 2 && dimension != 3) throw DomainError("dimension must be 2 or 3");
    return RadialConfig{R, r_star, f, dimension};
}

namespace {

void check_rho(double rho, double r, const RadialConfig& cfg) {
    if (rho < r || rho > cfg.R) throw DomainError("rho outside [r, R]");
}

} // namespace

double exact_uD(double rho, double r, const RadialConfig& cfg) {
    check_rho(rho, r, cfg);
    if (cfg.dimension == 2) return cfg.f * std::log(rho / r) / std::log(cfg.R / r);
    return cfg.f * cfg.R / (cfg.R - r) * (1.0 - r / rho);
}

double exact_uN(double rho, double r, const RadialConfig& cfg) {
    check_rho(rho, r, cfg);
    if (cfg.dimension == 2) return cfg.f * std::log(rho / r) / std::log(cfg.R / cfg.r_star);
    return cfg.f * cfg.R * cfg.r_star / (cfg.R - cfg.r_star) * (1.0 / r - 1.0 / rho);
}

double exact_flux(double rho, const RadialConfig& cfg) {
    check_rho(rho, cfg.r_star, cfg);
    if (cfg.dimension == 2) return cfg.f / (rho * std::log(cfg.R / cfg.r_star));
    return cfg.f * cfg.R * cfg.r_star / (cfg.R - cfg.r_star) / (rho * rho);
}

double vn(double r, const RadialConfig& cfg) {
    if (r < cfg.r_star || r >= cfg.R) throw DomainError("r outside [r_star, R)");
    if (cfg.dimension == 2)
        return -cfg.f * std::log(r / cfg.r_star) /
               (r * std::log(cfg.R / r) * std::log(cfg.R / cfg.r_star));
    return -cfg.f * cfg.R * cfg.R * (r - cfg.r_star) /
           (r * r * (cfg.R - r) * (cfg.R - cfg.r_star));
}

double ivp_rhs(double /*t*/, double r, const RadialConfig& cfg) { return vn(r, cfg); }

PeanoBounds peano_bounds(const RadialConfig& cfg, double R0, double T) {
    const double K0 = cfg.f / (cfg.r_star * std::log(cfg.R / R0));
    return {K0, std::min(T, (cfg.R - cfg.r_star) / K0)};
}

std::vector<RadialState> integrate_radius(const RadialConfig& cfg, double r0, double dt,
                                          double T) {
    if (!(r0 > cfg.r_star && r0 < cfg.R)) throw DomainError("r0 outside (r_star, R)");
    if (!(dt > 0.0 && T > 0.0)) throw DomainError("require dt > 0 and T > 0");

    auto rk4_step = [&](double t, double r, double h, double& out) -> bool {
        const double k1 = vn(r, cfg);
        const double r2 = r + 0.5 * h * k1;
        if (r2 <= cfg.r_star) return false;
        const double k2 = vn(r2, cfg);
        const double r3 = r + 0.5 * h * k2;
        if (r3 <= cfg.r_star) return false;
        const double k3 = vn(r3, cfg);
        const double r4 = r + h * k3;
        if (r4 <= cfg.r_star) return false;
        const double k4 = vn(r4, cfg);
        out = r + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        (void)t;
        return out > cfg.r_star;
    };

    std::vector<RadialState> traj;
    traj.push_back({0.0, r0});
    double t = 0.0, r = r0;
    while (t < T - 1e-15 * T) {
        double h = std::min(dt, T - t);
        double r_next = r;
        while (!rk4_step(t, r, h, r_next)) {
            h *= 0.5;
            if (h < 1e-12 * T)
                throw StepUnderflowError("step underflow near the r_star barrier");
        }
        t += h;
        r = r_next;
        traj.push_back({t, r});
    }
    return traj;
}

} // namespace shapeinv
