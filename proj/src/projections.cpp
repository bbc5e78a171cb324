#include "pifem/projections.hpp"

#include <algorithm>

#include "pifem/errors.hpp"
#include "pifem/parallel.hpp"

namespace pifem {

namespace {

// r_i = a_h(w, psi_i) over the target state's space. Volume integrals use the
// partition refined by both the source and target cuts so every integrand is
// polynomial per region; edge integrals split at both crossing points.
Vector projection_rhs(const Mesh& mesh, const InterfaceState& state, const BasisTable& bases,
                      const ProjectionSource& w, double sigma, int threads) {
    const int degree = w.quadrature_degree();
    std::vector<std::array<double, 3>> vol(mesh.element_count());

    parallel_for(mesh.element_count(), threads, [&](int e) {
        std::array<double, 3> local{};
        const UnionRule partition =
            union_cut_rule(mesh.element_vertices(e), w.cut(e), state.cut_of(e), degree,
                           w.fallback_side(e), state.element_side(e));
        for (const UnionRegion& region : partition.regions) {
            const Side ts = region.new_side;
            for (std::size_t q = 0; q < region.rule.points.size(); ++q) {
                const Vec2 x = region.rule.points[q];
                const Vec2 gw = w.gradient(e, ts, x);
                const double bw = region.rule.weights[q] * bases[e].beta(ts);
                for (int i = 0; i < 3; ++i)
                    local[i] += bw * gw.dot(bases[e].shapes[i].grad(ts));
            }
        }
        vol[e] = local;
    });

    Vector rhs = Vector::Zero(mesh.dof_count);
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto& tri = mesh.elements[e];
        for (int i = 0; i < 3; ++i)
            if (mesh.node_dof[tri[i]] >= 0) rhs[mesh.node_dof[tri[i]]] += vol[e][i];
    }

    // Interface-edge terms. For continuous sources only -{beta grad w . n}[psi]
    // survives; discrete sources also carry their own jumps.
    for (int edge : state.interface_edges) {
        const int t1 = mesh.edge_elements[edge][0];
        const int t2 = mesh.edge_elements[edge][1];
        const Vec2 a = mesh.nodes[mesh.edges[edge][0]];
        const Vec2 b = mesh.nodes[mesh.edges[edge][1]];
        const double len = (b - a).norm();

        Vec2 n = (b - a).perp() / len;
        const auto v1 = mesh.element_vertices(t1);
        const auto v2 = mesh.element_vertices(t2);
        if (n.dot((v2[0] + v2[1] + v2[2]) / 3.0 - (v1[0] + v1[1] + v1[2]) / 3.0) < 0.0)
            n = n * -1.0;

        // split points: target crossing and (for discrete sources) source crossings
        std::vector<double> params{0.0, 1.0};
        auto add_param = [&](const Vec2& p) {
            const double s = (p - a).dot(b - a) / ((b - a).dot(b - a));
            if (s > 1e-12 && s < 1.0 - 1e-12) params.push_back(s);
        };
        if (const auto p = edge_cut_point(mesh, state, edge)) add_param(*p);
        for (int elem : {t1, t2}) {
            if (const CutConfig* c = w.cut(elem)) {
                for (int k = 0; k < 2; ++k)
                    if (mesh.element_edges[elem][c->cut_edges[k]] == edge)
                        add_param(k == 0 ? c->point_d : c->point_e);
            }
        }
        std::sort(params.begin(), params.end());

        for (std::size_t seg = 0; seg + 1 < params.size(); ++seg) {
            const Vec2 sa = a + (b - a) * params[seg];
            const Vec2 sb = a + (b - a) * params[seg + 1];
            if ((sb - sa).norm() <= 1e-14 * len) continue;
            const QuadRule rule = edge_rule(sa, sb, kErrorDegree);
            for (std::size_t q = 0; q < rule.points.size(); ++q) {
                const Vec2 x = rule.points[q];
                const double wq = rule.weights[q];
                const Side s1 = bases[t1].side_of(x);
                const Side s2 = bases[t2].side_of(x);

                const double flux_w = 0.5 * (bases[t1].beta(s1) * w.gradient(t1, s1, x).dot(n) +
                                             bases[t2].beta(s2) * w.gradient(t2, s2, x).dot(n));
                const double jump_w = w.continuous() ? 0.0 : w.value(t1, x) - w.value(t2, x);

                auto accumulate = [&](int elem, Side s, double sign) {
                    const auto& tri = mesh.elements[elem];
                    for (int i = 0; i < 3; ++i) {
                        const int d = mesh.node_dof[tri[i]];
                        if (d < 0) continue;
                        const double val = bases[elem].shapes[i].eval(x, s);
                        const double flx =
                            0.5 * bases[elem].beta(s) * bases[elem].shapes[i].grad(s).dot(n);
                        // [psi] = psi|T1 - psi|T2: sign carries the orientation
                        rhs[d] += wq * (-flux_w * sign * val);
                        if (!w.continuous())
                            rhs[d] += wq * (-flx * jump_w + (sigma / len) * jump_w * sign * val);
                    }
                };
                accumulate(t1, s1, +1.0);
                accumulate(t2, s2, -1.0);
            }
        }
    }
    return rhs;
}

}  // namespace

ProjectionResult elliptic_projection(const Mesh& mesh, const InterfaceState& state,
                                     const BasisTable& bases, const ProjectionSource& source,
                                     double sigma, const std::vector<double>* bc, double rel_tol,
                                     int threads) {
    const AssembledBilinear A = assemble_stiffness(mesh, state, bases, sigma, bc, threads);
    Vector rhs = projection_rhs(mesh, state, bases, source, sigma, threads);
    rhs -= A.lift;

    ProjectionResult out;
    out.coefficients = solve_spd(A.matrix, rhs, rel_tol);
    const double rhs_norm = rhs.norm();
    out.residual =
        rhs_norm > 0.0 ? (A.matrix * out.coefficients - rhs).norm() / rhs_norm : 0.0;
    return out;
}

Vector discrete_laplacian(const SparseSym& mass, const SparseSym& stiffness, const Vector& w,
                          double rel_tol) {
    return solve_spd(mass, stiffness * w, rel_tol);
}

Vector discrete_laplacian(const Mesh& mesh, const InterfaceState& state, const BasisTable& bases,
                          const Vector& w, double sigma, double rel_tol) {
    const AssembledBilinear A = assemble_stiffness(mesh, state, bases, sigma);
    const AssembledBilinear M = assemble_mass(mesh, state, bases);
    return discrete_laplacian(M.matrix, A.matrix, w, rel_tol);
}

}  // namespace pifem
