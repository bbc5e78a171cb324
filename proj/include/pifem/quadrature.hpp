#pragma once

#include <array>
#include <vector>

#include "pifem/interface_geometry.hpp"

namespace pifem {

struct QuadRule {
    std::vector<Vec2> points;
    std::vector<double> weights;   // area weights (arc-length weights for edge rules)

    double total_weight() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }
    void append(const QuadRule& other) {
        points.insert(points.end(), other.points.begin(), other.points.end());
        weights.insert(weights.end(), other.weights.begin(), other.weights.end());
    }
};

// Default exactness degrees: products of two affine pieces in assembly are
// quadratic; error norms use degree 5 plus subdivision of cut elements.
constexpr int kVolumeDegree = 2;
constexpr int kEdgeDegree = 2;
constexpr int kErrorDegree = 5;

/// Symmetric positive-weight rule on a triangle, exact for bivariate
/// polynomials up to `degree` (1..5). Throws on degenerate triangles.
QuadRule triangle_rule(const std::array<Vec2, 3>& vertices, int degree);

/// Rule on a convex polygon via fan triangulation from its first vertex.
QuadRule polygon_rule(const std::vector<Vec2>& vertices, int degree);

/// Rule over one side of a cut element.
QuadRule cut_rule(const CutConfig& cut, Side side, int degree);

/// Gauss-Legendre rule on the segment [a,b], exact up to `degree`.
QuadRule edge_rule(const Vec2& a, const Vec2& b, int degree);

/// One region of the refinement common to two cuts of the same element:
/// a convex polygon lying on a definite side of the old and new cut segments.
struct UnionRegion {
    Side old_side;
    Side new_side;
    QuadRule rule;
};

struct UnionRule {
    std::vector<UnionRegion> regions;

    double total_weight() const {
        double s = 0.0;
        for (const auto& r : regions) s += r.rule.total_weight();
        return s;
    }
    QuadRule merged() const {
        QuadRule q;
        for (const auto& r : regions) q.append(r.rule);
        return q;
    }
};

/// Partition the element so that functions that are piecewise polynomial with
/// respect to cut_old and cut_new are simultaneously polynomial per region.
/// Absent cuts contribute the fallback side uniformly.
UnionRule union_cut_rule(const std::array<Vec2, 3>& vertices, const CutConfig* cut_old,
                         const CutConfig* cut_new, int degree,
                         Side fallback_old = Side::Minus, Side fallback_new = Side::Minus);

/// Clip a convex polygon against the half plane {x : n.(x - p) >= 0} (keep ==
/// Plus) or <= 0 (keep == Minus). Vertices within `eps` of the line belong to
/// both halves.
std::vector<Vec2> clip_polygon(const std::vector<Vec2>& poly, const Vec2& p, const Vec2& n,
                               Side keep, double eps);

}  // namespace pifem
