#include "shapeinv/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "shapeinv/errors.hpp"

namespace shapeinv {

SparseSystem::SparseSystem(int n, const std::vector<std::vector<std::pair<int, double>>>& rows)
    : rhs(n, 0.0), n_(n) {
    row_ptr_.resize(n + 1, 0);
    for (int i = 0; i < n; ++i) row_ptr_[i + 1] = row_ptr_[i] + static_cast<int>(rows[i].size());
    col_idx_.reserve(row_ptr_[n]);
    vals_.reserve(row_ptr_[n]);
    for (int i = 0; i < n; ++i) {
        for (const auto& [j, v] : rows[i]) {
            col_idx_.push_back(j);
            vals_.push_back(v);
        }
    }
}

void SparseSystem::matvec(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += vals_[k] * x[col_idx_[k]];
        y[i] = s;
    }
}

double SparseSystem::entry(int i, int j) const {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        if (col_idx_[k] == j) return vals_[k];
    return 0.0;
}

double SparseSystem::symmetry_defect() const {
    double defect = 0.0, scale = 0.0;
    for (int i = 0; i < n_; ++i) {
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            const int j = col_idx_[k];
            defect = std::max(defect, std::abs(vals_[k] - entry(j, i)));
            scale = std::max(scale, std::abs(vals_[k]));
        }
    }
    return scale > 0.0 ? defect / scale : 0.0;
}

void SparseSystem::eliminate_constraints() {
    if (constraints.empty()) return;
    std::vector<char> fixed(n_, 0);
    std::vector<double> fixed_value(n_, 0.0);
    for (const auto& c : constraints) {
        fixed[c.node] = 1;
        fixed_value[c.node] = c.value;
    }
    // move known columns to the rhs, then blank constrained rows/columns
    for (int i = 0; i < n_; ++i) {
        if (fixed[i]) continue;
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            const int j = col_idx_[k];
            if (fixed[j]) {
                rhs[i] -= vals_[k] * fixed_value[j];
                vals_[k] = 0.0;
            }
        }
    }
    for (int i = 0; i < n_; ++i) {
        if (!fixed[i]) continue;
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            vals_[k] = (col_idx_[k] == i) ? 1.0 : 0.0;
        rhs[i] = fixed_value[i];
    }
    constraints.clear();
}

SparseSystem assemble_stiffness(const Mesh& mesh) {
    const int n = mesh.node_count();
    std::vector<std::map<int, double>> acc(n);
    for (const auto& t : mesh.triangles) {
        const Vec2& a = mesh.nodes[t[0]];
        const Vec2& b = mesh.nodes[t[1]];
        const Vec2& c = mesh.nodes[t[2]];
        const double area = triangle_signed_area(a, b, c);
        const Vec2 grad[3] = {
            (c - b).perp() / (2.0 * area),
            (a - c).perp() / (2.0 * area),
            (b - a).perp() / (2.0 * area),
        };
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                acc[t[i]][t[j]] += area * grad[i].dot(grad[j]);
    }
    std::vector<std::vector<std::pair<int, double>>> rows(n);
    for (int i = 0; i < n; ++i)
        rows[i].assign(acc[i].begin(), acc[i].end());
    return SparseSystem(n, rows);
}

std::vector<double> solve_spd(SparseSystem system) {
    system.eliminate_constraints();
    const int n = system.size();
    const int max_iters = static_cast<int>(50.0 * std::sqrt(static_cast<double>(n))) + 1000;
    constexpr double rel_tol = 1e-10;

    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) {
        const double d = system.entry(i, i);
        if (d <= 0.0)
            throw SolverError("non-positive diagonal entry: matrix is not SPD", 0.0);
        diag[i] = d;
    }

    std::vector<double> x(n, 0.0), r = system.rhs, z(n), p(n), Ap(n);
    double b_norm = 0.0;
    for (double v : r) b_norm += v * v;
    b_norm = std::sqrt(b_norm);
    if (b_norm == 0.0) return x;

    for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    p = z;
    double rz = 0.0;
    for (int i = 0; i < n; ++i) rz += r[i] * z[i];

    double res = b_norm;
    for (int it = 0; it < max_iters; ++it) {
        system.matvec(p, Ap);
        double pAp = 0.0;
        for (int i = 0; i < n; ++i) pAp += p[i] * Ap[i];
        if (pAp <= 0.0)
            throw SolverError("CG breakdown: operator is not positive definite", res / b_norm);
        const double alpha = rz / pAp;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        res = 0.0;
        for (double v : r) res += v * v;
        res = std::sqrt(res);
        if (res <= rel_tol * b_norm) return x;
        for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
        double rz_new = 0.0;
        for (int i = 0; i < n; ++i) rz_new += r[i] * z[i];
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw SolverError("CG did not converge", res / b_norm);
}

ScalarField solve_laplace_dirichlet(const Mesh& mesh,
                                    const std::vector<DirichletConstraint>& constraints) {
    SparseSystem system = assemble_stiffness(mesh);
    system.constraints = constraints;
    ScalarField u;
    u.values = solve_spd(std::move(system));
    return u;
}

ScalarField solve_state_dirichlet(const Mesh& mesh, const BoundaryTrace& sigma_trace,
                                  const std::vector<double>& f_sigma) {
    std::vector<DirichletConstraint> constraints;
    for (int i = 0; i < sigma_trace.size(); ++i)
        constraints.push_back({sigma_trace.node_ids[i], f_sigma[i]});
    const BoundaryTrace gamma = extract_boundary_trace(mesh, BoundaryMarker::Gamma);
    for (int id : gamma.node_ids) constraints.push_back({id, 0.0});
    return solve_laplace_dirichlet(mesh, constraints);
}

ScalarField solve_state_mixed(const Mesh& mesh, const BoundaryTrace& sigma_trace,
                              const std::vector<double>& g_sigma) {
    SparseSystem system = assemble_stiffness(mesh);
    // natural boundary load: int_Sigma g phi ds with trapezoidal lumping
    for (int i = 0; i < sigma_trace.size(); ++i)
        system.rhs[sigma_trace.node_ids[i]] += g_sigma[i] * sigma_trace.weights[i];
    const BoundaryTrace gamma = extract_boundary_trace(mesh, BoundaryMarker::Gamma);
    for (int id : gamma.node_ids) system.constraints.push_back({id, 0.0});
    ScalarField u;
    u.values = solve_spd(std::move(system));
    return u;
}

Vec2 element_gradient(const Mesh& mesh, const ScalarField& u, int tri) {
    const auto& t = mesh.triangles[tri];
    const Vec2& a = mesh.nodes[t[0]];
    const Vec2& b = mesh.nodes[t[1]];
    const Vec2& c = mesh.nodes[t[2]];
    const double area = triangle_signed_area(a, b, c);
    return (u[t[0]] * (c - b).perp() + u[t[1]] * (a - c).perp() + u[t[2]] * (b - a).perp()) /
           (2.0 * area);
}

std::vector<double> recover_normal_derivative(const Mesh& mesh, const ScalarField& u,
                                              const BoundaryTrace& trace) {
    std::vector<std::vector<int>> node_tris(mesh.node_count());
    for (int k = 0; k < mesh.triangle_count(); ++k)
        for (int v : mesh.triangles[k]) node_tris[v].push_back(k);

    std::vector<double> dn(trace.size(), 0.0);
    for (int i = 0; i < trace.size(); ++i) {
        const int node = trace.node_ids[i];
        Vec2 g{0.0, 0.0};
        double total_area = 0.0;
        for (int k : node_tris[node]) {
            const auto& t = mesh.triangles[k];
            const double area = triangle_signed_area(mesh.nodes[t[0]], mesh.nodes[t[1]],
                                                     mesh.nodes[t[2]]);
            g += area * element_gradient(mesh, u, k);
            total_area += area;
        }
        dn[i] = (g / total_area).dot(trace.normals[i]);
    }
    return dn;
}

double h1_seminorm_squared(const Mesh& mesh, const VectorField& v) {
    ScalarField vx(v.size()), vy(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        vx[i] = v[i].x;
        vy[i] = v[i].y;
    }
    double s = 0.0;
    for (int k = 0; k < mesh.triangle_count(); ++k) {
        const auto& t = mesh.triangles[k];
        const double area = triangle_signed_area(mesh.nodes[t[0]], mesh.nodes[t[1]],
                                                 mesh.nodes[t[2]]);
        s += area * (element_gradient(mesh, vx, k).norm2() +
                     element_gradient(mesh, vy, k).norm2());
    }
    return s;
}

double h1_norm_squared(const Mesh& mesh, const VectorField& v) {
    double l2 = 0.0;
    for (const auto& t : mesh.triangles) {
        const double area = triangle_signed_area(mesh.nodes[t[0]], mesh.nodes[t[1]],
                                                 mesh.nodes[t[2]]);
        double sum_sq = 0.0, sum_cross = 0.0;
        for (int i = 0; i < 3; ++i) {
            sum_sq += v[t[i]].dot(v[t[i]]);
            sum_cross += v[t[i]].dot(v[t[(i + 1) % 3]]);
        }
        // exact P1 mass integration: int phi_i phi_j = area/12 (i != j), area/6 (i == j)
        l2 += area / 6.0 * (sum_sq + sum_cross);
    }
    return h1_seminorm_squared(mesh, v) + l2;
}

} // namespace shapeinv
