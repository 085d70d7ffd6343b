#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "shapeinv/fem.hpp"
#include "shapeinv/mesh.hpp"
#include "shapeinv/objective.hpp"

namespace shapeinv {

enum class AlgorithmKind { BoundaryVariation, DomainVariation };

struct DescentConfig {
    AlgorithmKind algorithm = AlgorithmKind::DomainVariation;
    KernelMode kernel = KernelMode::GMinus;
    double c_step = 0.5;          // scale in dt = c J / |V|_H1^2
    int max_iters = 100;
    double dt_min = 1e-10;
    double target_cost = 0.0;
    double backtrack_factor = 0.5;

    void validate() const;
};

struct IterationRecord {
    int iter = 0;
    double J = 0.0;
    double dt = 0.0;
    double hausdorff = -1.0;  // to the reference trace; -1 when no reference
    double min_area = 0.0;
    double a1_margin = 0.0;
};

/// Everything the loop needs about the current domain: states, fluxes,
/// cost and the A1 margin, computed once per accepted (or trial) mesh.
struct InversionState {
    Mesh mesh;
    BoundaryTrace sigma;
    BoundaryTrace gamma;
    ScalarField uD;
    ScalarField uN;
    std::vector<double> dnD;  // on gamma, against the into-Omega normal
    std::vector<double> dnN;
    double J = 0.0;
    ConditionA1 a1;
};

/// Solves the states on the mesh and evaluates cost and Gamma fluxes.
/// The Cauchy data are aligned with the mesh's Sigma trace.
InversionState evaluate_state(Mesh mesh, const std::vector<double>& f_sigma,
                              const std::vector<double>& g_sigma);

/// H1 descent field: componentwise a(V, phi) = (grad V, grad phi) on the
/// space clamped to zero on Sigma, loaded with -int_Gamma G nu . phi ds
/// (lumped trace weights). The sign makes V a descent direction for the
/// into-Omega normal convention.
VectorField solve_descent_field(const Mesh& mesh, const std::vector<double>& kernel_values,
                                const BoundaryTrace& gamma_trace);

/// Backtracking initial step: c J / |V|_H1^2.
double step_size(double J, const Mesh& mesh, const VectorField& V, const DescentConfig& cfg);

/// One accepted iteration of Algorithm 2 (domain variation): H1 field from
/// the kernel, backtracking on "J decreases and no reversed triangle".
/// Returns the accepted state and the dt used.
struct StepResult {
    InversionState state;
    double dt = 0.0;
};

StepResult qssts_step(const InversionState& cur, const std::vector<double>& f_sigma,
                      const std::vector<double>& g_sigma, const DescentConfig& cfg);

/// One accepted iteration of Algorithm 1 (boundary variation): Gamma moves
/// by dt Vn nu with Vn = -(dnD - dnN); the interior follows by harmonic
/// extension (zero on Sigma). Same backtracking guard as qssts_step.
StepResult boundary_variation_step(const InversionState& cur,
                                   const std::vector<double>& f_sigma,
                                   const std::vector<double>& g_sigma,
                                   const DescentConfig& cfg);

struct InversionResult {
    std::vector<IterationRecord> history;
    BoundaryTrace final_gamma;
    bool stalled = false;
    std::string stall_reason;
};

/// Called after every accepted iterate (snapshots, logging).
using IterationObserver = std::function<void(const IterationRecord&, const InversionState&)>;

/// Outer loop: terminates on max_iters, target_cost, or a stalled step
/// (partial history is returned in that case).
InversionResult run_inversion(const DescentConfig& cfg, const Mesh& mesh0,
                              const std::vector<double>& f_sigma,
                              const std::vector<double>& g_sigma,
                              const std::optional<BoundaryTrace>& reference = std::nullopt,
                              const IterationObserver& observer = {});

} // namespace shapeinv
