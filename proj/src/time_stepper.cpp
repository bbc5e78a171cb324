#include "pifem/time_stepper.hpp"

#include <string>
#include <utility>

#include "pifem/errors.hpp"

namespace pifem {

namespace {

struct StepContext {
    std::shared_ptr<const Mesh> mesh;
    double beta_minus, beta_plus;
    double sigma;
    RunOptions options;
};

// Shared advance loop. boundary(t) returns the all-node Dirichlet values at t
// (null for homogeneous runs); f may be null for decay runs.
SolutionHistory advance(StepContext ctx, const LevelSet& levelset, const SideScalarFn* f,
                        const std::function<std::vector<double>(double)>& boundary, TimeGrid grid,
                        Vector u0, std::shared_ptr<const InterfaceState> state0,
                        BasisTable bases0, std::vector<double> bc0) {
    const double tau = grid.tau();
    const Mesh& mesh = *ctx.mesh;

    SolutionHistory history;
    history.mesh = ctx.mesh;
    history.times.push_back(0.0);
    history.states.push_back(state0);
    {
        StepDiagnostics diag;
        diag.step = 0;
        diag.t = 0.0;
        diag.l2_norm = discrete_l2_norm(mesh, *state0, bases0,
                                        to_all_nodes(mesh, u0, bc0.empty() ? nullptr : &bc0));
        history.diagnostics.push_back(diag);
        if (ctx.options.on_step) ctx.options.on_step(diag);
    }
    history.solutions.push_back(std::move(u0));

    auto state_prev = std::move(state0);
    BasisTable bases_prev = std::move(bases0);
    std::vector<double> bc_prev = std::move(bc0);

    for (int n = 1; n <= grid.steps; ++n) {
        const double t = grid.t_final * n / grid.steps;
        std::shared_ptr<const InterfaceState> state;
        try {
            state = std::make_shared<InterfaceState>(classify(
                mesh, levelset, t, ctx.options.threads, ctx.options.strict_geometry));
        } catch (const GeometryViolation& err) {
            throw GeometryViolation("step " + std::to_string(n) + ": " + err.what());
        }
        BasisTable bases =
            build_basis_table(mesh, *state, ctx.beta_minus, ctx.beta_plus, ctx.options.threads);
        std::vector<double> bc = boundary ? boundary(t) : std::vector<double>{};

        const SystemMatrices sys = step_matrices(
            mesh, *state_prev, *state, bases_prev, bases, f, t, ctx.sigma,
            bc.empty() ? nullptr : &bc, bc_prev.empty() ? nullptr : &bc_prev,
            ctx.options.threads);

        if (sys.dof_count != static_cast<int>(history.solutions.back().size()))
            throw Error("time_stepper: dof count changed between steps");

        const SparseSym system = sys.M.plus_scaled(tau, sys.A);
        Vector rhs = sys.C * history.solutions.back() + sys.lift_C - sys.lift_M -
                     tau * sys.lift_A + tau * sys.F;

        Vector u;
        try {
            u = solve_spd(system, rhs, ctx.options.solver_tol);
        } catch (const Error& err) {
            throw Error("step " + std::to_string(n) + ": " + err.what());
        }

        StepDiagnostics diag;
        diag.step = n;
        diag.t = t;
        diag.l2_norm =
            discrete_l2_norm(mesh, *state, bases, to_all_nodes(mesh, u, bc.empty() ? nullptr : &bc));
        if (ctx.options.estimate_cond) {
            const EigenEstimates est = condition_number_estimate(system, ctx.options.cond_tol);
            diag.has_cond = true;
            diag.lambda_min = est.lambda_min;
            diag.lambda_max = est.lambda_max;
            diag.cond = est.cond;
        }
        if (ctx.options.on_step) ctx.options.on_step(diag);

        history.times.push_back(t);
        history.solutions.push_back(std::move(u));
        history.diagnostics.push_back(diag);
        history.states.push_back(state);

        state_prev = std::move(state);
        bases_prev = std::move(bases);
        bc_prev = std::move(bc);
    }

    history.final_bases = std::move(bases_prev);
    history.final_boundary = std::move(bc_prev);
    return history;
}

}  // namespace

SystemMatrices step_matrices(const Mesh& mesh, const InterfaceState& state_old,
                             const InterfaceState& state_new, const BasisTable& bases_old,
                             const BasisTable& bases_new, const SideScalarFn* f, double t_new,
                             double sigma, const std::vector<double>* bc_new,
                             const std::vector<double>* bc_old, int threads) {
    SystemMatrices sys;
    sys.dof_count = mesh.dof_count;

    AssembledBilinear a = assemble_stiffness(mesh, state_new, bases_new, sigma, bc_new, threads);
    AssembledBilinear m = assemble_mass(mesh, state_new, bases_new, bc_new, threads);
    AssembledCross c =
        assemble_cross_mass(mesh, state_old, state_new, bases_old, bases_new, bc_old, threads);

    sys.A = std::move(a.matrix);
    sys.lift_A = std::move(a.lift);
    sys.M = std::move(m.matrix);
    sys.lift_M = std::move(m.lift);
    sys.C = std::move(c.matrix);
    sys.lift_C = std::move(c.lift);
    sys.F = f ? assemble_load(mesh, state_new, bases_new, *f, t_new, threads)
              : Vector::Zero(mesh.dof_count);
    return sys;
}

SolutionHistory run(const BenchmarkProblem& problem, int N, TimeGrid grid, RunOptions options) {
    auto mesh = std::make_shared<const Mesh>(build_uniform_mesh(N));
    const double sigma =
        options.sigma > 0.0 ? options.sigma : default_sigma(problem.beta_minus, problem.beta_plus);

    auto state0 = std::make_shared<InterfaceState>(classify(
        *mesh, problem.levelset, 0.0, options.threads, options.strict_geometry));
    BasisTable bases0 =
        build_basis_table(*mesh, *state0, problem.beta_minus, problem.beta_plus, options.threads);
    std::vector<double> bc0 = boundary_trace(*mesh, problem, 0.0);

    const AnalyticSource source(problem.exact_grad_u, 0.0);
    Vector u0 = elliptic_projection(*mesh, *state0, bases0, source, sigma, &bc0,
                                    options.solver_tol, options.threads)
                    .coefficients;

    auto boundary = [mesh, &problem](double t) { return boundary_trace(*mesh, problem, t); };

    StepContext ctx{mesh, problem.beta_minus, problem.beta_plus, sigma, options};
    return advance(ctx, problem.levelset, &problem.source_f, boundary, grid, std::move(u0),
                   std::move(state0), std::move(bases0), std::move(bc0));
}

SolutionHistory run_decay(const LevelSet& levelset, double beta_minus, double beta_plus, int N,
                          TimeGrid grid, const Vector& u0, RunOptions options) {
    auto mesh = std::make_shared<const Mesh>(build_uniform_mesh(N));
    const double sigma =
        options.sigma > 0.0 ? options.sigma : default_sigma(beta_minus, beta_plus);
    if (u0.size() != mesh->dof_count)
        throw InvalidArgument("run_decay: initial vector has wrong dimension");

    auto state0 = std::make_shared<InterfaceState>(
        classify(*mesh, levelset, 0.0, options.threads, options.strict_geometry));
    BasisTable bases0 = build_basis_table(*mesh, *state0, beta_minus, beta_plus, options.threads);

    StepContext ctx{mesh, beta_minus, beta_plus, sigma, options};
    return advance(ctx, levelset, nullptr, nullptr, grid, u0, std::move(state0),
                   std::move(bases0), {});
}

}  // namespace pifem
