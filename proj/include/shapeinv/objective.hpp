#pragma once

#include <vector>

#include "shapeinv/fem.hpp"
#include "shapeinv/mesh.hpp"

namespace shapeinv {

/// Which kernel drives the boundary update: the full shape-gradient
/// density G = dnD^2 - dnN^2, or one of its factors G = G+ G-.
enum class KernelMode { FullG, GMinus, GPlus };

/// Energy-gap cost: integral over Omega of |grad(uD - uN)|^2, exact for P1.
double cost_domain(const Mesh& mesh, const ScalarField& uD, const ScalarField& uN);

/// Equivalent boundary form: integral over Sigma of (g - dnD)(uN - f),
/// with the Sigma-side flux recovered the same way as on Gamma.
double cost_boundary(const Mesh& mesh, const ScalarField& uD, const ScalarField& uN,
                     const BoundaryTrace& sigma_trace, const std::vector<double>& f_sigma,
                     const std::vector<double>& g_sigma);

/// Pointwise kernel values at Gamma nodes from the two recovered fluxes.
std::vector<double> kernel_on_gamma(const std::vector<double>& dnD,
                                    const std::vector<double>& dnN, KernelMode mode);

struct ConditionA1 {
    bool holds = false;
    double margin = 0.0;  // min over Gamma of dnD - dnN
};

/// Positivity of dnD - dnN on Gamma (the short-time well-posedness
/// hypothesis, monitored at runtime).
ConditionA1 check_condition_a1(const std::vector<double>& dnD,
                               const std::vector<double>& dnN);

} // namespace shapeinv
