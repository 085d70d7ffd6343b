#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "shapeinv/errors.hpp"
#include "shapeinv/fem.hpp"
#include "shapeinv/mesh.hpp"

using namespace shapeinv;
using testhelp::benchmark_annulus;
using testhelp::kPi;
using testhelp::log_state;

namespace {

Mesh single_reference_triangle() {
    Mesh m;
    m.nodes = {{0, 0}, {1, 0}, {0, 1}};
    m.triangles = {{0, 1, 2}};
    m.boundary_edges = {{0, 1, BoundaryMarker::Sigma},
                        {1, 2, BoundaryMarker::Sigma},
                        {2, 0, BoundaryMarker::Sigma}};
    return m;
}

double max_error_against_log_state(double h) {
    const Mesh mesh = benchmark_annulus(h);
    const BoundaryTrace sigma = extract_boundary_trace(mesh, BoundaryMarker::Sigma);
    const ScalarField u =
        solve_state_dirichlet(mesh, sigma, std::vector<double>(sigma.size(), 1.0));
    double worst = 0.0;
    for (int i = 0; i < mesh.node_count(); ++i) {
        const double exact = log_state(mesh.nodes[i].norm(), 0.5, 1.0, 1.0);
        worst = std::max(worst, std::abs(u[i] - exact));
    }
    return worst;
}

} // namespace

TEST_SUITE_BEGIN("fem");

TEST_CASE("reference triangle stiffness matches the hand-integrated matrix") {
    const Mesh m = single_reference_triangle();
    SparseSystem sys = assemble_stiffness(m);
    const double expected[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(sys.entry(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-14));
}

TEST_CASE("stiffness matrix is symmetric with vanishing row sums") {
    const Mesh mesh = benchmark_annulus(0.1);
    SparseSystem sys = assemble_stiffness(mesh);
    CHECK(sys.symmetry_defect() <= 1e-12);
    std::vector<double> ones(mesh.node_count(), 1.0), out(mesh.node_count());
    sys.matvec(ones, out);
    for (double v : out) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("stiffness is invariant under uniform scaling of the mesh") {
    const Mesh mesh = benchmark_annulus(0.1);
    Mesh scaled = mesh;
    for (auto& p : scaled.nodes) p = p * 2.0;
    SparseSystem a = assemble_stiffness(mesh);
    SparseSystem b = assemble_stiffness(scaled);
    for (int i = 0; i < mesh.node_count(); i += 7)
        for (int j : {i, (i + 1) % mesh.node_count(), (i + 13) % mesh.node_count()})
            CHECK(a.entry(i, j) == doctest::Approx(b.entry(i, j)).epsilon(1e-12));
}

TEST_CASE("conjugate gradient reproduces a dense-solved small system") {
    // 3x3 SPD system written out by hand: A = [[4,1,0],[1,3,1],[0,1,2]], b = (1,2,3)
    std::vector<std::vector<std::pair<int, double>>> rows = {
        {{0, 4.0}, {1, 1.0}},
        {{0, 1.0}, {1, 3.0}, {2, 1.0}},
        {{1, 1.0}, {2, 2.0}}};
    SparseSystem sys(3, rows);
    sys.rhs = {1.0, 2.0, 3.0};
    const auto x = solve_spd(std::move(sys));
    // Cramer's rule: det = 4(6-1) - 1(2-0) = 18
    CHECK(x[0] == doctest::Approx((1.0 * 5 - 1.0 * (2 * 2 - 3 * 1)) / 18.0).epsilon(1e-9));
    // direct residual check instead of more by-hand algebra
    CHECK(4 * x[0] + 1 * x[1] + 0 * x[2] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(1 * x[0] + 3 * x[1] + 1 * x[2] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(0 * x[0] + 1 * x[1] + 2 * x[2] == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("identity system returns its right-hand side") {
    std::vector<std::vector<std::pair<int, double>>> rows = {
        {{0, 1.0}}, {{1, 1.0}}, {{2, 1.0}}};
    SparseSystem sys(3, rows);
    sys.rhs = {7.0, -2.0, 0.5};
    const auto x = solve_spd(std::move(sys));
    CHECK(x[0] == doctest::Approx(7.0));
    CHECK(x[1] == doctest::Approx(-2.0));
    CHECK(x[2] == doctest::Approx(0.5));
}

TEST_CASE("pure stiffness system without constraints is rejected") {
    const Mesh mesh = benchmark_annulus(0.1);
    SparseSystem sys = assemble_stiffness(mesh);
    sys.rhs.assign(mesh.node_count(), 1.0);
    CHECK_THROWS_AS(solve_spd(std::move(sys)), SolverError);
}

TEST_CASE("dirichlet state on the annulus matches the log solution") {
    CHECK(max_error_against_log_state(0.05) <= 1e-2);

    // interior spot value
    const Mesh mesh = benchmark_annulus(0.05);
    const BoundaryTrace sigma = extract_boundary_trace(mesh, BoundaryMarker::Sigma);
    const ScalarField u =
        solve_state_dirichlet(mesh, sigma, std::vector<double>(sigma.size(), 1.0));
    double best_gap = 1e300, value_at = 0.0;
    for (int i = 0; i < mesh.node_count(); ++i) {
        const double gap = std::abs(mesh.nodes[i].norm() - 0.75);
        if (gap < best_gap) {
            best_gap = gap;
            value_at = u[i];
        }
    }
    CHECK(value_at == doctest::Approx(std::log(1.5) / std::log(2.0)).epsilon(5e-3));
    // maximum principle bounds
    for (int i = 0; i < mesh.node_count(); ++i) {
        CHECK(u[i] >= -1e-8);
        CHECK(u[i] <= 1.0 + 1e-8);
    }
}

TEST_CASE("dirichlet solve converges at second order") {
    const double e1 = max_error_against_log_state(0.1);
    const double e2 = max_error_against_log_state(0.05);
    const double e3 = max_error_against_log_state(0.025);
    const double order12 = std::log2(e1 / e2);
    const double order23 = std::log2(e2 / e3);
    CHECK(order12 >= 1.7);
    CHECK(order23 >= 1.7);
}

TEST_CASE("zero dirichlet data produces the zero field") {
    const Mesh mesh = benchmark_annulus(0.1);
    const BoundaryTrace sigma = extract_boundary_trace(mesh, BoundaryMarker::Sigma);
    const ScalarField u =
        solve_state_dirichlet(mesh, sigma, std::vector<double>(sigma.size(), 0.0));
    for (int i = 0; i < mesh.node_count(); ++i) CHECK(std::abs(u[i]) <= 1e-12);
}

TEST_CASE("mixed state with the consistent flux reproduces the dirichlet level") {
    const Mesh mesh = benchmark_annulus(0.05);
    const BoundaryTrace sigma = extract_boundary_trace(mesh, BoundaryMarker::Sigma);
    const double g = 1.0 / std::log(2.0);
    const ScalarField u = solve_state_mixed(mesh, sigma, std::vector<double>(sigma.size(), g));
    for (int id : sigma.node_ids) CHECK(u[id] == doctest::Approx(1.0).epsilon(2e-2));
}

TEST_CASE("zero flux produces the zero field and unit flux stays nonnegative") {
    const Mesh mesh = benchmark_annulus(0.1);
    const BoundaryTrace sigma = extract_boundary_trace(mesh, BoundaryMarker::Sigma);
    const ScalarField u0 =
        solve_state_mixed(mesh, sigma, std::vector<double>(sigma.size(), 0.0));
    for (int i = 0; i < mesh.node_count(); ++i) CHECK(std::abs(u0[i]) <= 1e-10);
    const ScalarField u1 =
        solve_state_mixed(mesh, sigma, std::vector<double>(sigma.size(), 1.0));
    for (int i = 0; i < mesh.node_count(); ++i) CHECK(u1[i] >= -1e-8);
}

TEST_CASE("flux recovery on the inner ring matches the closed form") {
    const Mesh mesh = benchmark_annulus(0.025);
    const BoundaryTrace sigma = extract_boundary_trace(mesh, BoundaryMarker::Sigma);
    const BoundaryTrace gamma = extract_boundary_trace(mesh, BoundaryMarker::Gamma);
    const ScalarField u =
        solve_state_dirichlet(mesh, sigma, std::vector<double>(sigma.size(), 1.0));
    const auto dn = recover_normal_derivative(mesh, u, gamma);
    const double exact = 1.0 / (0.5 * std::log(2.0));  // 2.885390
    double num = 0.0, den = 0.0;
    for (int i = 0; i < gamma.size(); ++i) {
        num += (dn[i] - exact) * (dn[i] - exact) * gamma.weights[i];
        den += exact * exact * gamma.weights[i];
    }
    CHECK(std::sqrt(num / den) <= 0.05);
}

TEST_CASE("flux recovery is exact for a linear field") {
    // strip mesh: annulus is the only generator, so build a tiny strip by hand
    Mesh m;
    m.nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    m.triangles = {{0, 1, 2}, {0, 2, 3}};
    m.boundary_edges = {{1, 2, BoundaryMarker::Gamma}};
    BoundaryTrace trace;
    trace.node_ids = {1, 2};
    trace.positions = {{1, 0}, {1, 1}};
    trace.normals = {{1, 0}, {1, 0}};
    trace.weights = {0.5, 0.5};
    trace.marker = BoundaryMarker::Gamma;
    ScalarField u(4);
    for (int i = 0; i < 4; ++i) u[i] = m.nodes[i].x;
    const auto dn = recover_normal_derivative(m, u, trace);
    CHECK(dn[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dn[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero field recovers zero flux") {
    const Mesh mesh = benchmark_annulus(0.1);
    const BoundaryTrace gamma = extract_boundary_trace(mesh, BoundaryMarker::Gamma);
    const auto dn = recover_normal_derivative(mesh, ScalarField(mesh.node_count()), gamma);
    for (double v : dn) CHECK(v == 0.0);
}

TEST_CASE("gradient norm of a linear vector field integrates to the area") {
    const Mesh mesh = benchmark_annulus(0.05);
    VectorField v(mesh.node_count());
    for (int i = 0; i < mesh.node_count(); ++i) v[i] = {mesh.nodes[i].x, 0.0};
    const double area = kPi * (1.0 - 0.25);
    CHECK(h1_seminorm_squared(mesh, v) == doctest::Approx(area).epsilon(1e-2 / area));
    // quadratic homogeneity of the full norm
    VectorField w(mesh.node_count());
    for (int i = 0; i < mesh.node_count(); ++i) w[i] = v[i] * 2.0;
    CHECK(h1_norm_squared(mesh, w) ==
          doctest::Approx(4.0 * h1_norm_squared(mesh, v)).epsilon(1e-12));
    CHECK(h1_norm_squared(mesh, VectorField(mesh.node_count())) == 0.0);
}

TEST_CASE("full norm exceeds the seminorm by the mass term") {
    const Mesh mesh = benchmark_annulus(0.1);
    VectorField v(mesh.node_count());
    for (int i = 0; i < mesh.node_count(); ++i) v[i] = {1.0, 0.0};  // constant field
    CHECK(h1_seminorm_squared(mesh, v) <= 1e-12);
    // mass of a constant-one field is the polygonal area of the annulus
    double area = 0.0;
    for (const auto& t : mesh.triangles)
        area += triangle_signed_area(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]);
    CHECK(h1_norm_squared(mesh, v) == doctest::Approx(area).epsilon(1e-10));
}

TEST_SUITE_END();
