#include "pifem/assembly.hpp"

#include <array>
#include <cstdio>
#include <ostream>

#include "pifem/errors.hpp"
#include "pifem/parallel.hpp"

namespace pifem {

namespace {

using Local3 = std::array<double, 9>;   // 3x3 row-major element matrix

// Scatter a 3x3 local matrix: interior x interior entries into triplets,
// interior x boundary into the lift.
void scatter_local(const Mesh& mesh, int element, const Local3& local,
                   const std::vector<double>* bc, std::vector<Triplet>& triplets, Vector& lift) {
    const auto& tri = mesh.elements[element];
    for (int i = 0; i < 3; ++i) {
        const int di = mesh.node_dof[tri[i]];
        if (di < 0) continue;
        for (int j = 0; j < 3; ++j) {
            const double v = local[3 * i + j];
            const int dj = mesh.node_dof[tri[j]];
            if (dj >= 0)
                triplets.emplace_back(di, dj, v);
            else if (bc)
                lift[di] += v * (*bc)[tri[j]];
        }
    }
}

Local3 element_stiffness(const IfeBasis& basis, const InterfaceState& state, int element,
                         const Mesh& mesh) {
    Local3 local{};
    if (const CutConfig* cut = state.cut_of(element)) {
        for (Side s : {Side::Minus, Side::Plus}) {
            const double area = std::abs(polygon_area(cut->sub_polygon(s)));
            const double b = basis.beta(s);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    local[3 * i + j] +=
                        b * area * basis.shapes[i].grad(s).dot(basis.shapes[j].grad(s));
        }
    } else {
        const Side s = state.element_side(element);
        const double factor = basis.beta(s) * mesh.element_area(element);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                local[3 * i + j] += factor * basis.shapes[i].grad(s).dot(basis.shapes[j].grad(s));
    }
    return local;
}

Local3 element_mass(const IfeBasis& basis, const InterfaceState& state, int element,
                    const Mesh& mesh) {
    Local3 local{};
    auto accumulate = [&](const QuadRule& rule, Side s) {
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            std::array<double, 3> vals;
            for (int i = 0; i < 3; ++i) vals[i] = basis.shapes[i].eval(rule.points[q], s);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    local[3 * i + j] += rule.weights[q] * vals[i] * vals[j];
        }
    };
    if (const CutConfig* cut = state.cut_of(element)) {
        for (Side s : {Side::Minus, Side::Plus}) accumulate(cut_rule(*cut, s, kVolumeDegree), s);
    } else {
        accumulate(triangle_rule(mesh.element_vertices(element), kVolumeDegree),
                   state.element_side(element));
    }
    return local;
}

// Penalty contributions of one interface edge over the 4 nodes of its two
// neighbor elements (shared nodes listed once).
struct EdgeLocal {
    std::array<int, 4> nodes{};
    int node_count = 0;
    std::array<double, 16> mat{};
};

EdgeLocal edge_penalty(const Mesh& mesh, const InterfaceState& state, const BasisTable& bases,
                       int edge, double sigma) {
    const int t1 = mesh.edge_elements[edge][0];
    const int t2 = mesh.edge_elements[edge][1];
    const Vec2 a = mesh.nodes[mesh.edges[edge][0]];
    const Vec2 b = mesh.nodes[mesh.edges[edge][1]];
    const double len = (b - a).norm();

    // Unit edge normal oriented from T1 into T2.
    Vec2 n = (b - a).perp() / len;
    const auto v2 = mesh.element_vertices(t2);
    const auto v1 = mesh.element_vertices(t1);
    const Vec2 c1 = (v1[0] + v1[1] + v1[2]) / 3.0;
    const Vec2 c2 = (v2[0] + v2[1] + v2[2]) / 3.0;
    if (n.dot(c2 - c1) < 0.0) n = n * -1.0;

    EdgeLocal out;
    std::array<int, 4>& nodes = out.nodes;
    for (int k = 0; k < 3; ++k) nodes[out.node_count++] = mesh.elements[t1][k];
    for (int k = 0; k < 3; ++k) {
        const int cand = mesh.elements[t2][k];
        bool known = false;
        for (int m = 0; m < out.node_count; ++m) known |= nodes[m] == cand;
        if (!known) nodes[out.node_count++] = cand;
    }

    auto local_index = [&](int element, int node) {
        for (int k = 0; k < 3; ++k)
            if (mesh.elements[element][k] == node) return k;
        return -1;
    };

    // The integrands are piecewise polynomial along the edge with a kink at
    // the interface crossing, so integrate each sub-segment separately.
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

            std::array<double, 4> jump{}, avg{};
            for (int m = 0; m < out.node_count; ++m) {
                const int l1 = local_index(t1, nodes[m]);
                const int l2 = local_index(t2, nodes[m]);
                if (l1 >= 0) {
                    jump[m] += bases[t1].shapes[l1].eval(x, s1);
                    avg[m] += 0.5 * bases[t1].beta(s1) * bases[t1].shapes[l1].grad(s1).dot(n);
                }
                if (l2 >= 0) {
                    jump[m] -= bases[t2].shapes[l2].eval(x, s2);
                    avg[m] += 0.5 * bases[t2].beta(s2) * bases[t2].shapes[l2].grad(s2).dot(n);
                }
            }
            for (int m = 0; m < out.node_count; ++m)
                for (int k = 0; k < out.node_count; ++k)
                    out.mat[4 * m + k] += w * (-avg[m] * jump[k] - avg[k] * jump[m] +
                                               (sigma / len) * jump[m] * jump[k]);
        }
    }
    return out;
}

}  // namespace

std::optional<Vec2> edge_cut_point(const Mesh& mesh, const InterfaceState& state, int edge) {
    for (int side = 0; side < 2; ++side) {
        const int elem = mesh.edge_elements[edge][side];
        if (elem < 0) continue;
        const CutConfig* cut = state.cut_of(elem);
        if (!cut) continue;
        for (int k = 0; k < 2; ++k) {
            if (mesh.element_edges[elem][cut->cut_edges[k]] == edge)
                return k == 0 ? cut->point_d : cut->point_e;
        }
    }
    return std::nullopt;
}

AssembledBilinear assemble_stiffness(const Mesh& mesh, const InterfaceState& state,
                                     const BasisTable& bases, double sigma,
                                     const std::vector<double>* bc, int threads) {
    if (!(sigma > 0.0)) throw InvalidArgument("assemble_stiffness: penalty must be positive");

    std::vector<Local3> volume(mesh.element_count());
    parallel_for(mesh.element_count(), threads,
                 [&](int e) { volume[e] = element_stiffness(bases[e], state, e, mesh); });

    const int n_edges = static_cast<int>(state.interface_edges.size());
    std::vector<EdgeLocal> penalties(n_edges);
    parallel_for(n_edges, threads, [&](int i) {
        penalties[i] = edge_penalty(mesh, state, bases, state.interface_edges[i], sigma);
    });

    std::vector<Triplet> triplets;
    triplets.reserve(9 * mesh.element_count() + 16 * n_edges);
    Vector lift = Vector::Zero(mesh.dof_count);
    for (int e = 0; e < mesh.element_count(); ++e)
        scatter_local(mesh, e, volume[e], bc, triplets, lift);
    for (const EdgeLocal& p : penalties) {
        for (int m = 0; m < p.node_count; ++m) {
            const int dm = mesh.node_dof[p.nodes[m]];
            if (dm < 0) continue;
            for (int k = 0; k < p.node_count; ++k) {
                const double v = p.mat[4 * m + k];
                const int dk = mesh.node_dof[p.nodes[k]];
                if (dk >= 0)
                    triplets.emplace_back(dm, dk, v);
                else if (bc)
                    lift[dm] += v * (*bc)[p.nodes[k]];
            }
        }
    }
    return {SparseSym::from_triplets(mesh.dof_count, triplets), std::move(lift)};
}

AssembledBilinear assemble_mass(const Mesh& mesh, const InterfaceState& state,
                                const BasisTable& bases, const std::vector<double>* bc,
                                int threads) {
    std::vector<Local3> locals(mesh.element_count());
    parallel_for(mesh.element_count(), threads,
                 [&](int e) { locals[e] = element_mass(bases[e], state, e, mesh); });

    std::vector<Triplet> triplets;
    triplets.reserve(9 * mesh.element_count());
    Vector lift = Vector::Zero(mesh.dof_count);
    for (int e = 0; e < mesh.element_count(); ++e)
        scatter_local(mesh, e, locals[e], bc, triplets, lift);
    return {SparseSym::from_triplets(mesh.dof_count, triplets), std::move(lift)};
}

AssembledCross assemble_cross_mass(const Mesh& mesh, const InterfaceState& state_old,
                                   const InterfaceState& state_new, const BasisTable& bases_old,
                                   const BasisTable& bases_new, const std::vector<double>* bc_old,
                                   int threads) {
    std::vector<Local3> locals(mesh.element_count());
    parallel_for(mesh.element_count(), threads, [&](int e) {
        Local3 local{};
        const UnionRule partition =
            union_cut_rule(mesh.element_vertices(e), state_old.cut_of(e), state_new.cut_of(e),
                           kVolumeDegree, state_old.element_side(e), state_new.element_side(e));
        for (const UnionRegion& region : partition.regions) {
            for (std::size_t q = 0; q < region.rule.points.size(); ++q) {
                const Vec2 x = region.rule.points[q];
                const double w = region.rule.weights[q];
                std::array<double, 3> test_vals, trial_vals;
                for (int i = 0; i < 3; ++i) {
                    test_vals[i] = bases_new[e].shapes[i].eval(x, region.new_side);
                    trial_vals[i] = bases_old[e].shapes[i].eval(x, region.old_side);
                }
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        local[3 * i + j] += w * test_vals[i] * trial_vals[j];
            }
        }
        locals[e] = local;
    });

    std::vector<Triplet> triplets;
    triplets.reserve(9 * mesh.element_count());
    Vector lift = Vector::Zero(mesh.dof_count);
    for (int e = 0; e < mesh.element_count(); ++e)
        scatter_local(mesh, e, locals[e], bc_old, triplets, lift);

    SparseMat c(mesh.dof_count, mesh.dof_count);
    c.setFromTriplets(triplets.begin(), triplets.end());
    c.makeCompressed();
    return {std::move(c), std::move(lift)};
}

Vector assemble_load(const Mesh& mesh, const InterfaceState& state, const BasisTable& bases,
                     const SideScalarFn& f, double t, int threads) {
    std::vector<std::array<double, 3>> locals(mesh.element_count());
    parallel_for(mesh.element_count(), threads, [&](int e) {
        std::array<double, 3> local{};
        auto accumulate = [&](const QuadRule& rule, Side s) {
            for (std::size_t q = 0; q < rule.points.size(); ++q) {
                const double fw = rule.weights[q] * f(rule.points[q], s, t);
                for (int i = 0; i < 3; ++i)
                    local[i] += fw * bases[e].shapes[i].eval(rule.points[q], s);
            }
        };
        if (const CutConfig* cut = state.cut_of(e)) {
            for (Side s : {Side::Minus, Side::Plus}) accumulate(cut_rule(*cut, s, kVolumeDegree), s);
        } else {
            accumulate(triangle_rule(mesh.element_vertices(e), kVolumeDegree),
                       state.element_side(e));
        }
        locals[e] = local;
    });

    Vector load = Vector::Zero(mesh.dof_count);
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto& tri = mesh.elements[e];
        for (int i = 0; i < 3; ++i) {
            const int d = mesh.node_dof[tri[i]];
            if (d >= 0) load[d] += locals[e][i];
        }
    }
    return load;
}

void dump_coo(const SparseMat& m, std::ostream& os) {
    char buf[96];
    for (int k = 0; k < m.outerSize(); ++k) {
        for (SparseMat::InnerIterator it(m, k); it; ++it) {
            std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n", static_cast<long>(it.row()),
                          static_cast<long>(it.col()), it.value());
            os << buf;
        }
    }
}

}  // namespace pifem
