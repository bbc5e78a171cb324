#pragma once

#include <functional>
#include <memory>

#include "pifem/assembly.hpp"
#include "pifem/benchmarks.hpp"
#include "pifem/projections.hpp"

namespace pifem {

/// Uniform partition of [0, t_final] into `steps` subintervals.
struct TimeGrid {
    double t_final = 1.0;
    int steps = 1;

    double tau() const { return t_final / steps; }
};

struct StepDiagnostics {
    int step = 0;
    double t = 0.0;
    double l2_norm = 0.0;
    bool has_cond = false;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double cond = 0.0;
};

struct SolutionHistory {
    std::shared_ptr<const Mesh> mesh;
    std::vector<double> times;
    std::vector<Vector> solutions;   // interior-dof coefficient vectors, step 0 included
    std::vector<StepDiagnostics> diagnostics;
    std::vector<std::shared_ptr<const InterfaceState>> states;

    // final-time data for error evaluation
    BasisTable final_bases;
    std::vector<double> final_boundary;   // all-node Dirichlet values at t_final

    const Vector& final_solution() const { return solutions.back(); }
    const InterfaceState& final_state() const { return *states.back(); }
};

struct RunOptions {
    double sigma = 0.0;          // <= 0: default_sigma(beta)
    double solver_tol = 1e-12;
    bool estimate_cond = false;
    double cond_tol = 1e-6;
    int threads = 1;
    bool strict_geometry = false;   // probe for sub-resolution edge crossings
    std::function<void(const StepDiagnostics&)> on_step;
};

/// One step's assembly bundle for (M + tau*A) u^n = C u^{n-1} + tau*F + lifts.
SystemMatrices step_matrices(const Mesh& mesh, const InterfaceState& state_old,
                             const InterfaceState& state_new, const BasisTable& bases_old,
                             const BasisTable& bases_new, const SideScalarFn* f, double t_new,
                             double sigma, const std::vector<double>* bc_new,
                             const std::vector<double>* bc_old, int threads = 1);

/// Backward Euler over the moving-interface benchmark problem: geometry,
/// space and matrices are rebuilt at every step; the initial value is the
/// elliptic projection of u(.,0); boundary dofs are pinned to the exact trace.
SolutionHistory run(const BenchmarkProblem& problem, int N, TimeGrid grid, RunOptions options = {});

/// Decay experiment: f = 0, homogeneous Dirichlet data, initial coefficients
/// given directly. The level set may still move.
SolutionHistory run_decay(const LevelSet& levelset, double beta_minus, double beta_plus, int N,
                          TimeGrid grid, const Vector& u0, RunOptions options = {});

}  // namespace pifem
