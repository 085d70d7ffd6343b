#pragma once

#include <vector>

#include "shapeinv/mesh.hpp"

namespace shapeinv {

/// Per-node scalar values over a Mesh.
struct ScalarField {
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(std::size_t n, double v = 0.0) : values(n, v) {}
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
};

/// Per-node 2-vector values over a Mesh.
struct VectorField {
    std::vector<Vec2> values;

    VectorField() = default;
    explicit VectorField(std::size_t n) : values(n) {}
    Vec2& operator[](std::size_t i) { return values[i]; }
    const Vec2& operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
};

struct DirichletConstraint {
    int node = -1;
    double value = 0.0;
};

/// Symmetric sparse system in CSR layout, with Dirichlet constraints kept
/// alongside. Constraints are imposed by symmetric row/column elimination
/// so that CG sees an SPD operator.
class SparseSystem {
  public:
    SparseSystem(int n, const std::vector<std::vector<std::pair<int, double>>>& rows);

    int size() const { return n_; }
    void matvec(const std::vector<double>& x, std::vector<double>& y) const;
    double entry(int i, int j) const;
    double symmetry_defect() const;  // max relative |A_ij - A_ji|

    std::vector<double> rhs;
    std::vector<DirichletConstraint> constraints;

    /// Folds the constraints into matrix and rhs (symmetric elimination).
    void eliminate_constraints();

  private:
    int n_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> col_idx_;
    std::vector<double> vals_;
};

/// P1 stiffness matrix of the Laplacian on the whole mesh; zero load,
/// no constraints.
SparseSystem assemble_stiffness(const Mesh& mesh);

/// Jacobi-preconditioned conjugate gradient. Relative residual 1e-10,
/// iteration cap 50*sqrt(n)+1000. Throws SolverError on non-convergence.
std::vector<double> solve_spd(SparseSystem system);

/// Harmonic field with u = f on Sigma (values aligned with sigma_trace)
/// and u = 0 on Gamma.
ScalarField solve_state_dirichlet(const Mesh& mesh, const BoundaryTrace& sigma_trace,
                                  const std::vector<double>& f_sigma);

/// Harmonic field with natural data grad(u).nu = g on Sigma (trapezoidal
/// boundary load) and u = 0 on Gamma.
ScalarField solve_state_mixed(const Mesh& mesh, const BoundaryTrace& sigma_trace,
                              const std::vector<double>& g_sigma);

/// Generic scalar Laplace solve with Dirichlet constraints only.
ScalarField solve_laplace_dirichlet(const Mesh& mesh,
                                    const std::vector<DirichletConstraint>& constraints);

/// Normal derivative of u at the trace nodes, against the trace's own
/// normals: area-weighted average of adjacent constant element gradients.
std::vector<double> recover_normal_derivative(const Mesh& mesh, const ScalarField& u,
                                              const BoundaryTrace& trace);

/// Constant gradient of the P1 interpolant on one triangle.
Vec2 element_gradient(const Mesh& mesh, const ScalarField& u, int tri);

/// Full squared H1 norm of a vector field: gradient term plus L2 term,
/// both integrated exactly for P1.
double h1_norm_squared(const Mesh& mesh, const VectorField& v);

/// Gradient (seminorm) part only.
double h1_seminorm_squared(const Mesh& mesh, const VectorField& v);

} // namespace shapeinv
