#pragma once

// Shared fixtures and independent closed-form oracles for the test suites.
// Oracle formulas are written out from scratch here on purpose: they must
// not call the library routines they are checking.

#include <cmath>
#include <vector>

#include "shapeinv/mesh.hpp"

namespace testhelp {

constexpr double kPi = 3.14159265358979323846;

// Annulus between a circle of radius r (inner) and radius R = 1 (outer).
inline shapeinv::Mesh benchmark_annulus(double h, double inner_radius = 0.5,
                                        double outer_radius = 1.0, int segments = 4096) {
    return shapeinv::build_annulus_mesh(outer_radius,
                                        shapeinv::make_circle(inner_radius, segments), h);
}

// Harmonic annulus solution with u = 0 at radius a and u = f0 at radius b.
inline double log_state(double rho, double a, double b, double f0) {
    return f0 * std::log(rho / a) / std::log(b / a);
}

// Interface speed of a concentric interface at radius r for outer radius R,
// true radius rstar, Dirichlet level f0 (2D): -(f0/log(R/r) - g R)/r with
// the consistent flux g = f0/(R log(R/rstar)).
inline double radial_speed_2d(double r, double R, double rstar, double f0) {
    const double a_coef = f0 / std::log(R / r);
    const double b_coef = f0 / std::log(R / rstar);
    return -(a_coef - b_coef) / r;
}

// Same quantity in 3D: u_D = f(1/r - 1/rho)/(1/r - 1/R) etc.
inline double radial_speed_3d(double r, double R, double rstar, double f0) {
    const double a_coef = f0 / (1.0 / r - 1.0 / R);
    const double b_coef = f0 / (1.0 / rstar - 1.0 / R);
    return -(a_coef - b_coef) / (r * r);
}

// Composite Simpson rule on [a, b].
template <typename F>
double simpson(F f, double a, double b, int panels) {
    const double h = (b - a) / (2 * panels);
    double sum = f(a) + f(b);
    for (int i = 1; i < 2 * panels; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// Brute-force symmetric Hausdorff distance by dense sampling of both
// polylines (closed), independent of the library's segment projections.
inline double hausdorff_bruteforce(const std::vector<shapeinv::Vec2>& a,
                                   const std::vector<shapeinv::Vec2>& b,
                                   int samples_per_edge = 50) {
    auto densify = [samples_per_edge](const std::vector<shapeinv::Vec2>& poly) {
        std::vector<shapeinv::Vec2> pts;
        const std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) {
            const shapeinv::Vec2& p = poly[i];
            const shapeinv::Vec2& q = poly[(i + 1) % n];
            for (int s = 0; s < samples_per_edge; ++s) {
                const double t = static_cast<double>(s) / samples_per_edge;
                pts.push_back(p + (q - p) * t);
            }
        }
        return pts;
    };
    const auto pa = densify(a);
    const auto pb = densify(b);
    auto one_sided = [](const std::vector<shapeinv::Vec2>& from,
                        const std::vector<shapeinv::Vec2>& to) {
        double worst = 0.0;
        for (const auto& p : from) {
            double best = 1e300;
            for (const auto& q : to) best = std::min(best, shapeinv::dist(p, q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(pa, pb), one_sided(pb, pa));
}

inline std::vector<shapeinv::Vec2> positions_of(const shapeinv::BoundaryTrace& t) {
    return t.positions;
}

inline double mean_radius(const shapeinv::BoundaryTrace& t) {
    double sum = 0.0;
    for (const auto& p : t.positions) sum += p.norm();
    return sum / t.positions.size();
}

} // namespace testhelp
