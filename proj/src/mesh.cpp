#include "pifem/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>

#include "pifem/errors.hpp"

namespace pifem {

namespace {

int add_edge(std::map<std::pair<int, int>, int>& lookup, Mesh& mesh, int a, int b, int elem) {
    if (a > b) std::swap(a, b);
    auto [it, inserted] = lookup.try_emplace({a, b}, mesh.edge_count());
    if (inserted) {
        mesh.edges.push_back({a, b});
        mesh.edge_elements.push_back({elem, -1});
    } else {
        mesh.edge_elements[it->second][1] = elem;
    }
    return it->second;
}

}  // namespace

Mesh build_uniform_mesh(int N) {
    if (N < 2) throw InvalidArgument("build_uniform_mesh: need N >= 2, got " + std::to_string(N));

    Mesh mesh;
    const double step = 2.0 / N;

    mesh.nodes.reserve((N + 1) * (N + 1));
    for (int j = 0; j <= N; ++j)
        for (int i = 0; i <= N; ++i)
            mesh.nodes.push_back({-1.0 + step * i, -1.0 + step * j});

    auto node_at = [N](int i, int j) { return j * (N + 1) + i; };

    // Each square split along the bottom-left -> top-right diagonal.
    mesh.elements.reserve(2 * N * N);
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < N; ++i) {
            const int bl = node_at(i, j);
            const int br = node_at(i + 1, j);
            const int tl = node_at(i, j + 1);
            const int tr = node_at(i + 1, j + 1);
            mesh.elements.push_back({bl, br, tr});
            mesh.elements.push_back({bl, tr, tl});
        }
    }

    std::map<std::pair<int, int>, int> edge_lookup;
    mesh.element_edges.resize(mesh.element_count());
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto& t = mesh.elements[e];
        for (int k = 0; k < 3; ++k)
            mesh.element_edges[e][k] = add_edge(edge_lookup, mesh, t[k], t[(k + 1) % 3], e);
    }

    mesh.boundary_node.assign(mesh.node_count(), false);
    for (int e = 0; e < mesh.edge_count(); ++e) {
        if (mesh.is_boundary_edge(e)) {
            mesh.boundary_node[mesh.edges[e][0]] = true;
            mesh.boundary_node[mesh.edges[e][1]] = true;
        }
    }

    mesh.node_dof.assign(mesh.node_count(), -1);
    for (int n = 0; n < mesh.node_count(); ++n) {
        if (!mesh.boundary_node[n]) {
            mesh.node_dof[n] = mesh.dof_count++;
            mesh.dof_node.push_back(n);
        }
    }

    mesh.h = step * std::sqrt(2.0);
    return mesh;
}

std::vector<int> interior_edges(const Mesh& mesh) {
    std::vector<int> out;
    for (int e = 0; e < mesh.edge_count(); ++e)
        if (!mesh.is_boundary_edge(e)) out.push_back(e);
    return out;
}

void dump(const Mesh& mesh, std::ostream& os) {
    char buf[128];
    for (int n = 0; n < mesh.node_count(); ++n) {
        std::snprintf(buf, sizeof(buf), "node %d %.17g %.17g %d\n", n, mesh.nodes[n].x,
                      mesh.nodes[n].y, mesh.boundary_node[n] ? 1 : 0);
        os << buf;
    }
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto& t = mesh.elements[e];
        std::snprintf(buf, sizeof(buf), "element %d %d %d %d\n", e, t[0], t[1], t[2]);
        os << buf;
    }
    for (int e = 0; e < mesh.edge_count(); ++e) {
        std::snprintf(buf, sizeof(buf), "edge %d %d %d %d %d\n", e, mesh.edges[e][0],
                      mesh.edges[e][1], mesh.edge_elements[e][0], mesh.edge_elements[e][1]);
        os << buf;
    }
}

}  // namespace pifem
