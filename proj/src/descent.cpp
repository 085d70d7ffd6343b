#include "shapeinv/descent.hpp"

#include <cmath>
#include <functional>
#include <utility>

#include "shapeinv/errors.hpp"

namespace shapeinv {

void DescentConfig::validate() const {
    if (!(c_step > 0.0)) throw DomainError("c_step must be positive");
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
        throw DomainError("backtrack_factor must be in (0, 1)");
    if (!(dt_min > 0.0)) throw DomainError("dt_min must be positive");
    if (max_iters < 0) throw DomainError("max_iters must be non-negative");
}

InversionState evaluate_state(Mesh mesh, const std::vector<double>& f_sigma,
                              const std::vector<double>& g_sigma) {
    InversionState st;
    st.mesh = std::move(mesh);
    st.sigma = extract_boundary_trace(st.mesh, BoundaryMarker::Sigma);
    st.gamma = extract_boundary_trace(st.mesh, BoundaryMarker::Gamma);
    st.uD = solve_state_dirichlet(st.mesh, st.sigma, f_sigma);
    st.uN = solve_state_mixed(st.mesh, st.sigma, g_sigma);
    st.dnD = recover_normal_derivative(st.mesh, st.uD, st.gamma);
    st.dnN = recover_normal_derivative(st.mesh, st.uN, st.gamma);
    st.J = cost_domain(st.mesh, st.uD, st.uN);
    st.a1 = check_condition_a1(st.dnD, st.dnN);
    return st;
}

VectorField solve_descent_field(const Mesh& mesh, const std::vector<double>& kernel_values,
                                const BoundaryTrace& gamma_trace) {
    const BoundaryTrace sigma = extract_boundary_trace(mesh, BoundaryMarker::Sigma);
    VectorField V(mesh.nodes.size());
    for (int comp = 0; comp < 2; ++comp) {
        SparseSystem system = assemble_stiffness(mesh);
        for (int i = 0; i < gamma_trace.size(); ++i) {
            const Vec2& nu = gamma_trace.normals[i];
            const double load = -kernel_values[i] * gamma_trace.weights[i];
            system.rhs[gamma_trace.node_ids[i]] += load * (comp == 0 ? nu.x : nu.y);
        }
        for (int id : sigma.node_ids) system.constraints.push_back({id, 0.0});
        const std::vector<double> sol = solve_spd(std::move(system));
        for (std::size_t i = 0; i < V.size(); ++i)
            (comp == 0 ? V[i].x : V[i].y) = sol[i];
    }
    return V;
}

double step_size(double J, const Mesh& mesh, const VectorField& V, const DescentConfig& cfg) {
    const double norm2 = h1_norm_squared(mesh, V);
    if (norm2 <= 1e-30) throw DegenerateFieldError("descent field has vanishing H1 norm");
    return cfg.c_step * J / norm2;
}

namespace {

// Harmonic extension of a Gamma displacement, componentwise, zero on Sigma.
VectorField extend_harmonically(const Mesh& mesh, const BoundaryTrace& gamma,
                                const BoundaryTrace& sigma,
                                const std::vector<Vec2>& gamma_displacement) {
    VectorField V(mesh.nodes.size());
    for (int comp = 0; comp < 2; ++comp) {
        std::vector<DirichletConstraint> constraints;
        for (int i = 0; i < gamma.size(); ++i)
            constraints.push_back({gamma.node_ids[i], comp == 0 ? gamma_displacement[i].x
                                                                : gamma_displacement[i].y});
        for (int id : sigma.node_ids) constraints.push_back({id, 0.0});
        const ScalarField sol = solve_laplace_dirichlet(mesh, constraints);
        for (std::size_t i = 0; i < V.size(); ++i)
            (comp == 0 ? V[i].x : V[i].y) = sol[i];
    }
    return V;
}

// Backtracking acceptance: J decreases and no triangle reverses.
StepResult backtrack_and_accept(const InversionState& cur, const VectorField& V,
                                const std::vector<double>& f_sigma,
                                const std::vector<double>& g_sigma,
                                const DescentConfig& cfg) {
    double dt = step_size(cur.J, cur.mesh, V, cfg);
    while (true) {
        if (dt < cfg.dt_min)
            throw StalledError("backtracking reduced dt below dt_min without acceptance");
        try {
            Mesh trial = deform_mesh(cur.mesh, V.values, dt);
            InversionState next = evaluate_state(std::move(trial), f_sigma, g_sigma);
            if (next.J < cur.J) return {std::move(next), dt};
        } catch (const ReversedTriangleError&) {
            // fall through to shrink dt
        }
        dt *= cfg.backtrack_factor;
    }
}

} // namespace

StepResult qssts_step(const InversionState& cur, const std::vector<double>& f_sigma,
                      const std::vector<double>& g_sigma, const DescentConfig& cfg) {
    const std::vector<double> kernel = kernel_on_gamma(cur.dnD, cur.dnN, cfg.kernel);
    bool all_zero = true;
    for (double k : kernel)
        if (k != 0.0) all_zero = false;
    if (all_zero) return {cur, 0.0};  // fixed point: uD == uN in energy
    const VectorField V = solve_descent_field(cur.mesh, kernel, cur.gamma);
    return backtrack_and_accept(cur, V, f_sigma, g_sigma, cfg);
}

StepResult boundary_variation_step(const InversionState& cur,
                                   const std::vector<double>& f_sigma,
                                   const std::vector<double>& g_sigma,
                                   const DescentConfig& cfg) {
    std::vector<Vec2> gamma_disp(cur.gamma.size());
    bool all_zero = true;
    for (int i = 0; i < cur.gamma.size(); ++i) {
        const double vn = -(cur.dnD[i] - cur.dnN[i]);
        if (vn != 0.0) all_zero = false;
        gamma_disp[i] = vn * cur.gamma.normals[i];
    }
    if (all_zero) return {cur, 0.0};
    const VectorField V = extend_harmonically(cur.mesh, cur.gamma, cur.sigma, gamma_disp);
    return backtrack_and_accept(cur, V, f_sigma, g_sigma, cfg);
}

InversionResult run_inversion(const DescentConfig& cfg, const Mesh& mesh0,
                              const std::vector<double>& f_sigma,
                              const std::vector<double>& g_sigma,
                              const std::optional<BoundaryTrace>& reference,
                              const IterationObserver& observer) {
    cfg.validate();
    InversionState state = evaluate_state(mesh0, f_sigma, g_sigma);

    InversionResult result;
    for (int k = 0; k < cfg.max_iters; ++k) {
        if (state.J <= cfg.target_cost) break;
        StepResult step;
        try {
            step = (cfg.algorithm == AlgorithmKind::DomainVariation)
                       ? qssts_step(state, f_sigma, g_sigma, cfg)
                       : boundary_variation_step(state, f_sigma, g_sigma, cfg);
        } catch (const StalledError& e) {
            result.stalled = true;
            result.stall_reason = e.what();
            break;
        }
        if (step.dt == 0.0) break;  // exact fixed point
        state = std::move(step.state);
        IterationRecord rec;
        rec.iter = k;
        rec.J = state.J;
        rec.dt = step.dt;
        rec.hausdorff = reference ? hausdorff_distance(state.gamma, *reference) : -1.0;
        rec.min_area = min_signed_area(state.mesh);
        rec.a1_margin = state.a1.margin;
        result.history.push_back(rec);
        if (observer) observer(rec, state);
    }
    result.final_gamma = state.gamma;
    return result;
}

} // namespace shapeinv
