// Command-line driver: single solves, convergence studies, condition-number
// traces, and the randomized verification suites.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pifem/analysis.hpp"
#include "pifem/verification.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitGeometry = 3;
constexpr int kExitSolver = 4;

std::vector<int> parse_mesh_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        int n = 0;
        try {
            std::size_t used = 0;
            n = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw pifem::InvalidArgument("malformed mesh parameter: '" + item + "'");
        }
        if (n < 2) throw pifem::InvalidArgument("mesh parameter must satisfy N >= 2");
        out.push_back(n);
    }
    if (out.empty()) throw pifem::InvalidArgument("empty mesh list");
    return out;
}

// Writes to the path, or stdout for an empty path.
class OutputTarget {
  public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw pifem::InvalidArgument("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

struct CommonArgs {
    std::string problem = "line";
    std::string mesh_list = "16";
    double t_final = 1.0;
    double sigma = 0.0;   // 0 -> default
    std::string out;
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
};

void add_common(CLI::App* cmd, CommonArgs& args, bool mesh_is_list) {
    cmd->add_option("--problem", args.problem, "benchmark problem")
        ->check(CLI::IsMember({"line", "circle", "ellipse"}));
    cmd->add_option("--n", args.mesh_list,
                    mesh_is_list ? "mesh parameter(s), comma separated" : "mesh parameter");
    cmd->add_option("--t-final", args.t_final, "final time")->check(CLI::PositiveNumber);
    cmd->add_option("--sigma", args.sigma, "penalty parameter (default 100*max(beta))")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", args.out, "output CSV path (default: stdout)");
    cmd->add_option("--threads", args.threads, "worker threads")->check(CLI::PositiveNumber);
}

void emit_first_step_matrices(const pifem::BenchmarkProblem& problem, int N, double t_final,
                              double sigma, int threads, const std::string& prefix) {
    using namespace pifem;
    const Mesh mesh = build_uniform_mesh(N);
    const double tau = t_final / (N * N);
    const double sig = sigma > 0.0 ? sigma : default_sigma(problem.beta_minus, problem.beta_plus);

    const InterfaceState s0 = classify(mesh, problem.levelset, 0.0, threads);
    const InterfaceState s1 = classify(mesh, problem.levelset, tau, threads);
    const BasisTable b0 = build_basis_table(mesh, s0, problem.beta_minus, problem.beta_plus, threads);
    const BasisTable b1 = build_basis_table(mesh, s1, problem.beta_minus, problem.beta_plus, threads);
    const std::vector<double> bc0 = boundary_trace(mesh, problem, 0.0);
    const std::vector<double> bc1 = boundary_trace(mesh, problem, tau);

    const SystemMatrices sys =
        step_matrices(mesh, s0, s1, b0, b1, &problem.source_f, tau, sig, &bc1, &bc0, threads);

    auto write = [&](const std::string& suffix, auto&& fn) {
        std::ofstream os(prefix + suffix);
        fn(os);
    };
    write(".A.coo", [&](std::ostream& os) { dump_coo(sys.A.raw(), os); });
    write(".M.coo", [&](std::ostream& os) { dump_coo(sys.M.raw(), os); });
    write(".C.coo", [&](std::ostream& os) { dump_coo(sys.C, os); });
    write(".F.txt", [&](std::ostream& os) {
        for (int i = 0; i < sys.F.size(); ++i) os << format_float(sys.F[i]) << '\n';
    });
}

int run_verify(std::ostream& os) {
    using namespace pifem;
    bool ok = true;
    auto line = [&](const std::string& name, bool pass, double value) {
        os << (pass ? "PASS" : "FAIL") << "  " << name << "  (max residual " << format_float(value)
           << ")\n";
        ok &= pass;
    };

    const BasisSweepReport basis = basis_sweep(10000);
    line("basis: Kronecker delta", basis.max_kronecker <= 1e-10, basis.max_kronecker);
    line("basis: partition of unity", basis.max_partition_unity <= 1e-10,
         basis.max_partition_unity);
    line("basis: continuity at cut points", basis.max_continuity <= 1e-10, basis.max_continuity);
    line("basis: flux jump", basis.max_flux_jump <= 1e-10, basis.max_flux_jump);

    const QuadratureSweepReport quad = quadrature_sweep(200);
    line("quadrature: triangle monomial exactness", quad.max_triangle_defect <= 1e-13,
         quad.max_triangle_defect);
    line("quadrature: edge monomial exactness", quad.max_edge_defect <= 1e-13,
         quad.max_edge_defect);
    line("quadrature: weight positivity", quad.max_positivity_violation >= 0.0,
         quad.max_positivity_violation);

    const GeometrySweepReport geom = geometry_sweep(2000);
    line("geometry: cut areas partition the element", geom.max_area_defect <= 1e-12,
         geom.max_area_defect);
    line("geometry: union rule weight", geom.max_union_weight_defect <= 1e-12,
         geom.max_union_weight_defect);

    for (const std::string& name : {"line", "circle", "ellipse"}) {
        const BenchmarkProblem problem = make_problem(name);
        double value = 0.0, flux = 0.0;
        for (double t : {0.0, 0.37, 0.5, 0.81, 1.0}) {
            const JumpResiduals res = verify_jump_conditions(problem, t, 1000);
            value = std::max(value, res.max_value_jump);
            flux = std::max(flux, res.max_flux_jump);
        }
        line("benchmark " + name + ": [u] on interface", value <= 1e-10, value);
        line("benchmark " + name + ": [beta grad u . n] on interface", flux <= 1e-10, flux);
        const double f_defect = verify_source_fd(problem, 1000);
        line("benchmark " + name + ": source vs finite differences", f_defect <= 1e-6, f_defect);
    }

    os << (ok ? "verification passed\n" : "verification FAILED\n");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Immersed finite element solver for 2D parabolic moving-interface problems"};
    app.require_subcommand(1);

    CommonArgs solve_args, conv_args, cond_args;
    bool emit_cond = false, emit_matrices = false;
    std::string verify_out;

    CLI::App* solve = app.add_subcommand("solve", "run one backward Euler sweep");
    add_common(solve, solve_args, false);
    solve->add_flag("--emit-cond", emit_cond, "estimate condition numbers per step");
    solve->add_flag("--emit-matrices", emit_matrices, "dump first-step matrices in COO format");

    CLI::App* converge = app.add_subcommand("converge", "convergence study over a mesh list");
    add_common(converge, conv_args, true);

    CLI::App* cond = app.add_subcommand("cond-trace", "per-step condition numbers of M + tau*A");
    add_common(cond, cond_args, false);

    CLI::App* verify = app.add_subcommand("verify", "run the property verification suites");
    verify->add_option("--out", verify_out, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (solve->parsed()) {
            const auto Ns = parse_mesh_list(solve_args.mesh_list);
            if (Ns.size() != 1) throw pifem::InvalidArgument("solve expects a single N");
            const pifem::BenchmarkProblem problem = pifem::make_problem(solve_args.problem);
            if (emit_matrices)
                emit_first_step_matrices(problem, Ns[0], solve_args.t_final, solve_args.sigma,
                                         solve_args.threads,
                                         solve_args.out.empty() ? "pifem" : solve_args.out);

            pifem::RunOptions options;
            options.sigma = solve_args.sigma;
            options.threads = solve_args.threads;
            options.estimate_cond = emit_cond;
            const pifem::TimeGrid grid{solve_args.t_final, Ns[0] * Ns[0]};
            const pifem::SolutionHistory history = pifem::run(problem, Ns[0], grid, options);

            OutputTarget target(solve_args.out);
            pifem::write_steps_csv(target.stream(), history.diagnostics);

            const std::vector<double> uh = pifem::to_all_nodes(
                *history.mesh, history.final_solution(), &history.final_boundary);
            const pifem::ErrorNorms err =
                pifem::solution_errors(*history.mesh, history.final_state(), history.final_bases,
                                       uh, problem, solve_args.t_final, solve_args.threads);
            std::cerr << "final errors: Linf=" << pifem::format_float(err.linf)
                      << " L2=" << pifem::format_float(err.l2)
                      << " H1=" << pifem::format_float(err.h1_semi) << '\n';
        } else if (converge->parsed()) {
            const auto Ns = parse_mesh_list(conv_args.mesh_list);
            pifem::RunOptions options;
            options.sigma = conv_args.sigma;
            options.threads = conv_args.threads;
            const auto reports = pifem::convergence_study(pifem::make_problem(conv_args.problem),
                                                          Ns, conv_args.t_final, options);
            OutputTarget target(conv_args.out);
            pifem::write_convergence_csv(target.stream(), reports);
        } else if (cond->parsed()) {
            const auto Ns = parse_mesh_list(cond_args.mesh_list);
            if (Ns.size() != 1) throw pifem::InvalidArgument("cond-trace expects a single N");
            pifem::RunOptions options;
            options.sigma = cond_args.sigma;
            options.threads = cond_args.threads;
            const auto records = pifem::condition_trace(pifem::make_problem(cond_args.problem),
                                                        Ns[0], cond_args.t_final, options);
            OutputTarget target(cond_args.out);
            pifem::write_cond_csv(target.stream(), records);
        } else if (verify->parsed()) {
            OutputTarget target(verify_out);
            return run_verify(target.stream());
        }
    } catch (const pifem::GeometryViolation& e) {
        std::cerr << "geometry violation: " << e.what() << '\n';
        return kExitGeometry;
    } catch (const pifem::NotPositiveDefinite& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const pifem::MaxIterations& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const pifem::InvalidArgument& e) {
        std::cerr << "invalid arguments: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
