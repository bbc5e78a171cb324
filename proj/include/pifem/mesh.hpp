#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "pifem/geometry.hpp"

namespace pifem {

/// Fixed, interface-independent triangulation of the square (-1,1)^2.
///
/// The mesh is immutable after construction and safe for concurrent reads.
/// Node numbering is lexicographic (row-major by y, then x), so degrees of
/// freedom are reproducible across runs.
struct Mesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> elements;        // node triples, counterclockwise
    std::vector<std::array<int, 2>> edges;           // node pairs, low index first
    std::vector<std::array<int, 2>> edge_elements;   // adjacent elements; second = -1 on boundary
    std::vector<std::array<int, 3>> element_edges;   // edge opposite layout: entry k is edge (v_k, v_{k+1})
    std::vector<bool> boundary_node;
    double h = 0.0;                                  // max element diameter

    // Interior-node dof numbering: node_dof[n] = -1 for boundary nodes,
    // otherwise the dof index; dof_node is the inverse list.
    std::vector<int> node_dof;
    std::vector<int> dof_node;
    int dof_count = 0;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int element_count() const { return static_cast<int>(elements.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }

    std::array<Vec2, 3> element_vertices(int e) const {
        const auto& t = elements[e];
        return {nodes[t[0]], nodes[t[1]], nodes[t[2]]};
    }

    double element_area(int e) const {
        const auto v = element_vertices(e);
        return signed_area(v[0], v[1], v[2]);
    }

    double edge_length(int e) const {
        return (nodes[edges[e][1]] - nodes[edges[e][0]]).norm();
    }

    bool is_boundary_edge(int e) const { return edge_elements[e][1] < 0; }
};

/// Partition (-1,1)^2 into NxN squares, each split along the bottom-left to
/// top-right diagonal. Throws InvalidArgument for N < 2.
Mesh build_uniform_mesh(int N);

/// Indices of all edges with two adjacent elements, ascending.
std::vector<int> interior_edges(const Mesh& mesh);

/// Plain-text node/element listing, one entity per line.
void dump(const Mesh& mesh, std::ostream& os);

}  // namespace pifem
