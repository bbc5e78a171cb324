#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pifem/time_stepper.hpp"

namespace pifem {

struct ErrorNorms {
    double linf = 0.0;
    double l2 = 0.0;
    double h1_semi = 0.0;
};

/// Errors of the discrete field against the exact solution at time t. The
/// exact side at each quadrature point is chosen by the sign of the true
/// level set, not the polyline: the sliver between them belongs to the
/// method's error, not the measurement's.
ErrorNorms solution_errors(const Mesh& mesh, const InterfaceState& state, const BasisTable& bases,
                           const std::vector<double>& uh_all_nodes,
                           const BenchmarkProblem& problem, double t, int threads = 1);

/// Broken energy norm: ||sqrt(beta) grad v||^2 + sigma/(h*tau) * sum_e ||[v]||^2
/// + h*tau/sigma * sum_e ||{beta grad v . n}||^2, the flux sum over all
/// interior edges (jumps vanish off interface edges for functions of the space).
double energy_norm(const Mesh& mesh, const InterfaceState& state, const BasisTable& bases,
                   const Vector& v, double sigma, double tau);

struct ErrorReport {
    int N = 0;
    double h = 0.0;
    double tau = 0.0;
    ErrorNorms errors;
    bool has_orders = false;       // set from the second mesh onward
    ErrorNorms orders;
};

/// Run the stepper for each N with tau = T/N^2 and report final-time errors
/// and observed orders between consecutive mesh sizes.
std::vector<ErrorReport> convergence_study(const BenchmarkProblem& problem,
                                           const std::vector<int>& Ns, double t_final,
                                           RunOptions options = {});

struct CondRecord {
    int step = 0;
    double t = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double cond = 0.0;
};

/// Condition numbers of (M + tau*A) at every step of a run.
std::vector<CondRecord> condition_trace(const BenchmarkProblem& problem, int N, double t_final,
                                        RunOptions options = {});

// CSV emission (RFC-4180-style, header row, 17 significant digits).
void write_convergence_csv(std::ostream& os, const std::vector<ErrorReport>& reports);
void write_cond_csv(std::ostream& os, const std::vector<CondRecord>& records);
void write_steps_csv(std::ostream& os, const std::vector<StepDiagnostics>& steps);

/// "%.17g" rendering used by every CSV writer.
std::string format_float(double v);

}  // namespace pifem
