#pragma once

#include <vector>

namespace shapeinv {

/// Concentric-circle (d=2) or concentric-sphere (d=3) configuration:
/// fixed outer radius R, true inclusion radius r_star, constant Dirichlet
/// data f > 0, and the consistent flux constant g derived from them.
struct RadialConfig {
    double R = 1.0;
    double r_star = 0.5;
    double f = 1.0;
    int dimension = 2;

    /// g = f / (R log(R/r_star)) in 2D, g = f r_star / (R (R - r_star)) in 3D.
    double g() const;
};

RadialConfig make_radial_config(double R, double r_star, double f, int dimension);

struct RadialState {
    double t = 0.0;
    double r = 0.0;
};

/// Exact state solutions on the annulus between the current radius r and R.
double exact_uD(double rho, double r, const RadialConfig& cfg);
double exact_uN(double rho, double r, const RadialConfig& cfg);

/// Exact flux d(u*)/d(rho) of the true-geometry Dirichlet state.
double exact_flux(double rho, const RadialConfig& cfg);

/// Normal velocity of a concentric interface at radius r; negative on
/// (r_star, R), zero at r_star.
double vn(double r, const RadialConfig& cfg);

/// Right-hand side of the radius IVP (autonomous; identical to vn).
double ivp_rhs(double t, double r, const RadialConfig& cfg);

struct PeanoBounds {
    double K0 = 0.0;  // speed bound on [r_star, R0]
    double T0 = 0.0;  // existence horizon min{T, (R - r_star)/K0}
};

PeanoBounds peano_bounds(const RadialConfig& cfg, double R0, double T);

/// Classical RK4 on the radius IVP. Steps that would cross the r_star
/// barrier are rejected and halved. Throws StepUnderflowError if the step
/// shrinks below 1e-12 * T.
std::vector<RadialState> integrate_radius(const RadialConfig& cfg, double r0, double dt,
                                          double T);

} // namespace shapeinv
