#include "pifem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "pifem/errors.hpp"
#include "pifem/parallel.hpp"

namespace pifem {

namespace {

void subdivide(const std::array<Vec2, 3>& tri, std::vector<std::array<Vec2, 3>>& out) {
    const Vec2 m01 = (tri[0] + tri[1]) * 0.5;
    const Vec2 m12 = (tri[1] + tri[2]) * 0.5;
    const Vec2 m20 = (tri[2] + tri[0]) * 0.5;
    out.push_back({tri[0], m01, m20});
    out.push_back({m01, tri[1], m12});
    out.push_back({m20, m12, tri[2]});
    out.push_back({m01, m12, m20});
}

// Error-measurement rule of one element: degree-5 rules per (possibly
// subdivided) region of the polyline partition; the Side tags the basis piece.
std::vector<std::pair<QuadRule, Side>> error_rules(const Mesh& mesh, const InterfaceState& state,
                                                   int element) {
    std::vector<std::pair<QuadRule, Side>> out;
    if (const CutConfig* cut = state.cut_of(element)) {
        for (Side s : {Side::Minus, Side::Plus}) {
            const auto& poly = cut->sub_polygon(s);
            QuadRule rule;
            for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
                const std::array<Vec2, 3> tri{poly[0], poly[k], poly[k + 1]};
                if (std::abs(signed_area(tri[0], tri[1], tri[2])) < 1e-16) continue;
                std::vector<std::array<Vec2, 3>> children;
                subdivide(tri, children);
                for (const auto& child : children) rule.append(triangle_rule(child, kErrorDegree));
            }
            out.push_back({std::move(rule), s});
        }
    } else {
        out.push_back({triangle_rule(mesh.element_vertices(element), kErrorDegree),
                       state.element_side(element)});
    }
    return out;
}

}  // namespace

ErrorNorms solution_errors(const Mesh& mesh, const InterfaceState& state, const BasisTable& bases,
                           const std::vector<double>& uh, const BenchmarkProblem& problem,
                           double t, int threads) {
    std::vector<ErrorNorms> partial(mesh.element_count());
    parallel_for(mesh.element_count(), threads, [&](int e) {
        ErrorNorms local;
        for (const auto& [rule, side] : error_rules(mesh, state, e)) {
            const Vec2 grad_uh = grad_discrete(bases[e], mesh, uh, side);
            for (std::size_t q = 0; q < rule.points.size(); ++q) {
                const Vec2 x = rule.points[q];
                const double w = rule.weights[q];
                const Side exact_side = problem.side_at(x, t);
                const double diff =
                    eval_discrete(bases[e], mesh, uh, x, side) - problem.exact_u(x, exact_side, t);
                const Vec2 gdiff = grad_uh - problem.exact_grad_u(x, exact_side, t);
                local.l2 += w * diff * diff;
                local.h1_semi += w * gdiff.dot(gdiff);
                local.linf = std::max(local.linf, std::abs(diff));
            }
        }
        partial[e] = local;
    });

    ErrorNorms total;
    for (const ErrorNorms& p : partial) {
        total.l2 += p.l2;
        total.h1_semi += p.h1_semi;
        total.linf = std::max(total.linf, p.linf);
    }
    for (int n = 0; n < mesh.node_count(); ++n) {
        const double diff = uh[n] - problem.u_at(mesh.nodes[n], t);
        total.linf = std::max(total.linf, std::abs(diff));
    }
    total.l2 = std::sqrt(total.l2);
    total.h1_semi = std::sqrt(total.h1_semi);
    return total;
}

double energy_norm(const Mesh& mesh, const InterfaceState& state, const BasisTable& bases,
                   const Vector& v, double sigma, double tau) {
    if (!(sigma > 0.0) || !(tau > 0.0))
        throw InvalidArgument("energy_norm: sigma and tau must be positive");
    const std::vector<double> values = to_all_nodes(mesh, v);

    double volume = 0.0;
    for (int e = 0; e < mesh.element_count(); ++e) {
        if (const CutConfig* cut = state.cut_of(e)) {
            for (Side s : {Side::Minus, Side::Plus}) {
                const Vec2 g = grad_discrete(bases[e], mesh, values, s);
                volume +=
                    bases[e].beta(s) * g.dot(g) * std::abs(polygon_area(cut->sub_polygon(s)));
            }
        } else {
            const Side s = state.element_side(e);
            const Vec2 g = grad_discrete(bases[e], mesh, values, s);
            volume += bases[e].beta(s) * g.dot(g) * mesh.element_area(e);
        }
    }

    // jump terms vanish off interface edges; flux averages do not
    double jumps = 0.0;
    double fluxes = 0.0;
    std::vector<bool> is_interface_edge(mesh.edge_count(), false);
    for (int e : state.interface_edges) is_interface_edge[e] = true;

    for (int edge = 0; edge < mesh.edge_count(); ++edge) {
        if (mesh.is_boundary_edge(edge)) continue;
        const int t1 = mesh.edge_elements[edge][0];
        const int t2 = mesh.edge_elements[edge][1];
        const Vec2 a = mesh.nodes[mesh.edges[edge][0]];
        const Vec2 b = mesh.nodes[mesh.edges[edge][1]];
        const double len = (b - a).norm();
        Vec2 n = (b - a).perp() / len;

        std::vector<std::pair<Vec2, Vec2>> segments;
        if (const auto p = edge_cut_point(mesh, state, edge)) {
            segments.push_back({a, *p});
            segments.push_back({*p, b});
        } else {
            segments.push_back({a, b});
        }
        for (const auto& [sa, sb] : segments) {
            if ((sb - sa).norm() <= 1e-15 * len) continue;
            const QuadRule rule = edge_rule(sa, sb, kEdgeDegree);
            for (std::size_t q = 0; q < rule.points.size(); ++q) {
                const Vec2 x = rule.points[q];
                const double w = rule.weights[q];
                const Side s1 = bases[t1].side_of(x);
                const Side s2 = bases[t2].side_of(x);
                const double avg =
                    0.5 * (bases[t1].beta(s1) * grad_discrete(bases[t1], mesh, values, s1).dot(n) +
                           bases[t2].beta(s2) * grad_discrete(bases[t2], mesh, values, s2).dot(n));
                fluxes += w * avg * avg;
                if (is_interface_edge[edge]) {
                    const double jump = eval_discrete(bases[t1], mesh, values, x, s1) -
                                        eval_discrete(bases[t2], mesh, values, x, s2);
                    jumps += w * jump * jump;
                }
            }
        }
    }

    const double h = mesh.h;
    return std::sqrt(volume + sigma / (h * tau) * jumps + h * tau / sigma * fluxes);
}

std::vector<ErrorReport> convergence_study(const BenchmarkProblem& problem,
                                           const std::vector<int>& Ns, double t_final,
                                           RunOptions options) {
    if (!std::is_sorted(Ns.begin(), Ns.end()))
        throw InvalidArgument("convergence_study: mesh sizes must be ascending");

    std::vector<ErrorReport> reports;
    for (int N : Ns) {
        TimeGrid grid{t_final, N * N};
        const SolutionHistory history = run(problem, N, grid, options);
        const std::vector<double> uh =
            to_all_nodes(*history.mesh, history.final_solution(), &history.final_boundary);

        ErrorReport report;
        report.N = N;
        report.h = history.mesh->h;
        report.tau = grid.tau();
        report.errors = solution_errors(*history.mesh, history.final_state(), history.final_bases,
                                        uh, problem, t_final, options.threads);
        if (!reports.empty()) {
            const ErrorReport& prev = reports.back();
            const double rate = std::log(prev.h / report.h);
            report.has_orders = true;
            report.orders.linf = std::log(prev.errors.linf / report.errors.linf) / rate;
            report.orders.l2 = std::log(prev.errors.l2 / report.errors.l2) / rate;
            report.orders.h1_semi = std::log(prev.errors.h1_semi / report.errors.h1_semi) / rate;
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

std::vector<CondRecord> condition_trace(const BenchmarkProblem& problem, int N, double t_final,
                                        RunOptions options) {
    options.estimate_cond = true;
    TimeGrid grid{t_final, N * N};
    const SolutionHistory history = run(problem, N, grid, options);

    std::vector<CondRecord> records;
    for (const StepDiagnostics& d : history.diagnostics) {
        if (!d.has_cond) continue;
        records.push_back({d.step, d.t, d.lambda_min, d.lambda_max, d.cond});
    }
    return records;
}

std::string format_float(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_convergence_csv(std::ostream& os, const std::vector<ErrorReport>& reports) {
    os << "N,h,tau,Linf,L2,H1,order_Linf,order_L2,order_H1\n";
    for (const ErrorReport& r : reports) {
        os << r.N << ',' << format_float(r.h) << ',' << format_float(r.tau) << ','
           << format_float(r.errors.linf) << ',' << format_float(r.errors.l2) << ','
           << format_float(r.errors.h1_semi) << ',';
        if (r.has_orders)
            os << format_float(r.orders.linf) << ',' << format_float(r.orders.l2) << ','
               << format_float(r.orders.h1_semi);
        else
            os << ",,";
        os << '\n';
    }
}

void write_cond_csv(std::ostream& os, const std::vector<CondRecord>& records) {
    os << "step,t,lambda_min,lambda_max,cond\n";
    for (const CondRecord& r : records)
        os << r.step << ',' << format_float(r.t) << ',' << format_float(r.lambda_min) << ','
           << format_float(r.lambda_max) << ',' << format_float(r.cond) << '\n';
}

void write_steps_csv(std::ostream& os, const std::vector<StepDiagnostics>& steps) {
    bool any_cond = false;
    for (const StepDiagnostics& d : steps) any_cond |= d.has_cond;
    os << (any_cond ? "step,t,l2_norm,lambda_min,lambda_max,cond\n" : "step,t,l2_norm\n");
    for (const StepDiagnostics& d : steps) {
        os << d.step << ',' << format_float(d.t) << ',' << format_float(d.l2_norm);
        if (any_cond) {
            os << ',';
            if (d.has_cond)
                os << format_float(d.lambda_min) << ',' << format_float(d.lambda_max) << ','
                   << format_float(d.cond);
            else
                os << ",,";
        }
        os << '\n';
    }
}

}  // namespace pifem
