#pragma once

#include <vector>

namespace shapeinv {

/// Parameters of the axisymmetric 2D configuration the perturbation
/// analysis linearizes about: fixed outer radius r_sigma and constant
/// positive data f (Dirichlet) and g (flux).
struct StabilityConfig {
    double r_sigma = 1.0;
    double f = 1.0;
    double g = 1.0;
};

StabilityConfig make_stability_config(double r_sigma, double f, double g);

/// One cos(k theta) perturbation mode riding on the background radius.
struct ModeState {
    int k = 1;
    double rho0 = 0.0;       // background interface radius, < r_sigma
    double amplitude = 0.0;  // R_k(t)
};

struct ModeSample {
    double t = 0.0;
    double rho0 = 0.0;
    double amplitude = 0.0;
};

struct Coefficients {
    double C_D = 0.0;  // f / log(r_sigma / rho0)
    double C_N = 0.0;  // g * r_sigma
};

Coefficients coefficients(double rho0, const StabilityConfig& cfg);

/// Background radius dynamics: (C_N - C_D) / rho0.
double rho0_rhs(double rho0, const StabilityConfig& cfg);

struct Determinants {
    double det_D = 0.0;  // (r_sigma/rho0)^k - (rho0/r_sigma)^k
    double det_N = 0.0;  // (rho0/r_sigma)^k + (r_sigma/rho0)^k
};

Determinants determinants(int k, double rho0, const StabilityConfig& cfg);

/// Solutions of the two 2x2 mode systems; kept as an independent
/// cross-check path for lambda_k.
struct TildeCoefficients {
    double a_D = 0.0;
    double b_D = 0.0;
    double a_N = 0.0;
    double b_N = 0.0;
};

TildeCoefficients tilde_coefficients(int k, double rho0, const StabilityConfig& cfg);

/// Growth rate of mode k about the background radius rho0.
double lambda_k(int k, double rho0, const StabilityConfig& cfg);

/// RK4 on the coupled system rho0' = rho0_rhs, R' = lambda_k(rho0) R.
std::vector<ModeSample> evolve_mode(const ModeState& mode, const StabilityConfig& cfg,
                                    double dt, double T);

} // namespace shapeinv
