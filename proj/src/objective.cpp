#include "shapeinv/objective.hpp"

#include <algorithm>
#include <limits>

#include "shapeinv/errors.hpp"

namespace shapeinv {

double cost_domain(const Mesh& mesh, const ScalarField& uD, const ScalarField& uN) {
    ScalarField w(uD.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = uD[i] - uN[i];
    double j = 0.0;
    for (int k = 0; k < mesh.triangle_count(); ++k) {
        const auto& t = mesh.triangles[k];
        const double area = triangle_signed_area(mesh.nodes[t[0]], mesh.nodes[t[1]],
                                                 mesh.nodes[t[2]]);
        j += area * element_gradient(mesh, w, k).norm2();
    }
    return j;
}

double cost_boundary(const Mesh& mesh, const ScalarField& uD, const ScalarField& uN,
                     const BoundaryTrace& sigma_trace, const std::vector<double>& f_sigma,
                     const std::vector<double>& g_sigma) {
    const std::vector<double> dnD = recover_normal_derivative(mesh, uD, sigma_trace);
    double j = 0.0;
    for (int i = 0; i < sigma_trace.size(); ++i) {
        const double uN_i = uN[sigma_trace.node_ids[i]];
        j += sigma_trace.weights[i] * (g_sigma[i] - dnD[i]) * (uN_i - f_sigma[i]);
    }
    return j;
}

std::vector<double> kernel_on_gamma(const std::vector<double>& dnD,
                                    const std::vector<double>& dnN, KernelMode mode) {
    if (dnD.size() != dnN.size())
        throw DomainError("kernel_on_gamma: flux vectors differ in length");
    std::vector<double> k(dnD.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
        switch (mode) {
            case KernelMode::FullG: k[i] = dnD[i] * dnD[i] - dnN[i] * dnN[i]; break;
            case KernelMode::GMinus: k[i] = dnD[i] - dnN[i]; break;
            case KernelMode::GPlus: k[i] = dnD[i] + dnN[i]; break;
        }
    }
    return k;
}

ConditionA1 check_condition_a1(const std::vector<double>& dnD,
                               const std::vector<double>& dnN) {
    if (dnD.size() != dnN.size())
        throw DomainError("check_condition_a1: flux vectors differ in length");
    double margin = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < dnD.size(); ++i) margin = std::min(margin, dnD[i] - dnN[i]);
    return {margin > 0.0, margin};
}

} // namespace shapeinv
