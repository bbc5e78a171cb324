#pragma once

#include <array>
#include <vector>

#include "pifem/level_set.hpp"
#include "pifem/mesh.hpp"

namespace pifem {

enum class ElementClass { Minus, Plus, Interface };

/// Cut geometry of one interface element.
///
/// The interface crosses the element boundary at two points D and E on
/// distinct edges; the segment DE splits the element into a triangle and a
/// quadrilateral (both stored counterclockwise).
struct CutConfig {
    std::array<int, 2> cut_edges{};      // local edge ids k in {0,1,2}, edge k = (v_k, v_{k+1})
    Vec2 point_d;                        // on cut_edges[0]
    Vec2 point_e;                        // on cut_edges[1]
    Vec2 segment_normal;                 // unit normal to DE, oriented from T- into T+
    std::vector<Vec2> sub_minus;         // vertex list of the minus sub-polygon
    std::vector<Vec2> sub_plus;
    std::array<int, 3> vertex_sign{};    // +1 / -1 per local vertex (after snapping)

    const std::vector<Vec2>& sub_polygon(Side s) const {
        return s == Side::Minus ? sub_minus : sub_plus;
    }

    /// Side of the cut segment a point lies on; points on DE count as Minus.
    Side side_of(const Vec2& p) const {
        return segment_normal.dot(p - point_d) > 0.0 ? Side::Plus : Side::Minus;
    }
};

/// Per-time classification of the mesh against the level set.
struct InterfaceState {
    double time = 0.0;
    std::vector<ElementClass> element_class;
    std::vector<int> interface_edges;    // interior edges touching an interface element, ascending
    std::vector<int> cut_index;          // per element, -1 if not an interface element
    std::vector<CutConfig> cuts;

    const CutConfig* cut_of(int element) const {
        const int i = cut_index[element];
        return i < 0 ? nullptr : &cuts[i];
    }

    /// Uniform side of a non-interface element (Minus for Interface elements,
    /// matching the convention that points on DE evaluate the minus piece).
    Side element_side(int element) const {
        return element_class[element] == ElementClass::Plus ? Side::Plus : Side::Minus;
    }

    int interface_element_count() const { return static_cast<int>(cuts.size()); }
};

/// Vertex snapping rule: level-set values within 1e-12*h of zero are pushed
/// to the plus side so intersection points never coincide with mesh nodes.
double snapped_phi(double value, double h);

/// Classify all elements at time t and compute cut geometry for interface
/// elements. Classification samples the level set at mesh nodes, so features
/// that cross an edge twice between its endpoints are below the resolution of
/// the linear reconstruction; with probe_edge_dips set, an edge-midpoint sign
/// probe detects such crossings and raises GeometryViolation (diagnostic use:
/// the curved benchmark interfaces legitimately dip through single edges on
/// coarse meshes).
InterfaceState classify(const Mesh& mesh, const LevelSet& ls, double t, int threads = 1,
                        bool probe_edge_dips = false);

/// Cut geometry for a single element whose vertices carry mixed signs.
CutConfig cut_element(const Mesh& mesh, int element, const LevelSet& ls, double t);

}  // namespace pifem
