#include "pifem/quadrature.hpp"

#include <cmath>
#include <string>

#include "pifem/errors.hpp"

namespace pifem {

namespace {

struct BarycentricOrbit {
    double a, b, c;   // barycentric coordinates, all permutations included below
    double weight;    // fraction of the triangle area
};

// Positive-weight symmetric rules (Strang/Dunavant). The classical 4-point
// degree-3 rule has a negative centroid weight, so degree 3 maps to the
// 6-point degree-4 rule.
void rule_points(int degree, std::vector<BarycentricOrbit>& orbits) {
    switch (degree) {
        case 0:
        case 1:
            orbits.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0});
            break;
        case 2:
            orbits.push_back({2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0});
            orbits.push_back({1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0});
            orbits.push_back({1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0});
            break;
        case 3:
        case 4: {
            const double a1 = 0.108103018168070, b1 = 0.445948490915965;
            const double w1 = 0.223381589678011;
            const double a2 = 0.816847572980459, b2 = 0.091576213509771;
            const double w2 = 0.109951743655322;
            orbits.push_back({a1, b1, b1, w1});
            orbits.push_back({b1, a1, b1, w1});
            orbits.push_back({b1, b1, a1, w1});
            orbits.push_back({a2, b2, b2, w2});
            orbits.push_back({b2, a2, b2, w2});
            orbits.push_back({b2, b2, a2, w2});
            break;
        }
        case 5: {
            const double a1 = 0.059715871789770, b1 = 0.470142064105115;
            const double w1 = 0.132394152788506;
            const double a2 = 0.797426985353087, b2 = 0.101286507323456;
            const double w2 = 0.125939180544827;
            orbits.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225});
            orbits.push_back({a1, b1, b1, w1});
            orbits.push_back({b1, a1, b1, w1});
            orbits.push_back({b1, b1, a1, w1});
            orbits.push_back({a2, b2, b2, w2});
            orbits.push_back({b2, a2, b2, w2});
            orbits.push_back({b2, b2, a2, w2});
            break;
        }
        default:
            throw InvalidArgument("triangle_rule: degree must be in 1..5, got " +
                                  std::to_string(degree));
    }
}

// Abscissae for Gauss-Legendre on [-1,1].
void gauss_points(int degree, std::vector<double>& x, std::vector<double>& w) {
    const int n = degree / 2 + 1;  // n points integrate degree 2n-1
    switch (n) {
        case 1:
            x = {0.0};
            w = {2.0};
            break;
        case 2: {
            const double a = 1.0 / std::sqrt(3.0);
            x = {-a, a};
            w = {1.0, 1.0};
            break;
        }
        case 3: {
            const double a = std::sqrt(3.0 / 5.0);
            x = {-a, 0.0, a};
            w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
            break;
        }
        default: {
            const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
            const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
            const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
            const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
            x = {-b, -a, a, b};
            w = {wb, wa, wa, wb};
            break;
        }
    }
}

}  // namespace

QuadRule triangle_rule(const std::array<Vec2, 3>& v, int degree) {
    const double area = signed_area(v[0], v[1], v[2]);
    if (!(std::abs(area) > 0.0)) throw InvalidArgument("triangle_rule: degenerate triangle");

    std::vector<BarycentricOrbit> orbits;
    rule_points(degree, orbits);

    QuadRule rule;
    rule.points.reserve(orbits.size());
    rule.weights.reserve(orbits.size());
    for (const auto& o : orbits) {
        rule.points.push_back(v[0] * o.a + v[1] * o.b + v[2] * o.c);
        rule.weights.push_back(o.weight * std::abs(area));
    }
    return rule;
}

QuadRule polygon_rule(const std::vector<Vec2>& vertices, int degree) {
    QuadRule rule;
    if (vertices.size() < 3) return rule;
    const double total = std::abs(polygon_area(vertices));
    for (std::size_t k = 1; k + 1 < vertices.size(); ++k) {
        const std::array<Vec2, 3> tri{vertices[0], vertices[k], vertices[k + 1]};
        const double a = std::abs(signed_area(tri[0], tri[1], tri[2]));
        if (a <= 1e-14 * std::max(total, 1e-300)) continue;  // collinear fan sliver
        rule.append(triangle_rule(tri, degree));
    }
    return rule;
}

QuadRule cut_rule(const CutConfig& cut, Side side, int degree) {
    return polygon_rule(cut.sub_polygon(side), degree);
}

QuadRule edge_rule(const Vec2& a, const Vec2& b, int degree) {
    const double len = (b - a).norm();
    if (len <= 0.0) throw InvalidArgument("edge_rule: zero-length edge");

    std::vector<double> x, w;
    gauss_points(degree, x, w);

    QuadRule rule;
    const Vec2 mid = (a + b) * 0.5;
    const Vec2 half = (b - a) * 0.5;
    for (std::size_t i = 0; i < x.size(); ++i) {
        rule.points.push_back(mid + half * x[i]);
        rule.weights.push_back(w[i] * 0.5 * len);
    }
    return rule;
}

std::vector<Vec2> clip_polygon(const std::vector<Vec2>& poly, const Vec2& p, const Vec2& n,
                               Side keep, double eps) {
    const double sgn = keep == Side::Plus ? 1.0 : -1.0;
    std::vector<Vec2> out;
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % m];
        const double da = sgn * n.dot(a - p);
        const double db = sgn * n.dot(b - p);
        if (da >= -eps) out.push_back(a);
        // genuine crossing only; vertices within eps of the line are shared
        if ((da > eps && db < -eps) || (da < -eps && db > eps))
            out.push_back(a + (b - a) * (da / (da - db)));
    }
    return out;
}

UnionRule union_cut_rule(const std::array<Vec2, 3>& vertices, const CutConfig* cut_old,
                         const CutConfig* cut_new, int degree, Side fallback_old,
                         Side fallback_new) {
    const std::vector<Vec2> element{vertices[0], vertices[1], vertices[2]};
    const double elem_area = std::abs(polygon_area(element));
    const double eps = 1e-13 * std::sqrt(elem_area);

    UnionRule out;
    const std::array<Side, 2> sides{Side::Minus, Side::Plus};
    for (Side so : sides) {
        if (!cut_old && so != fallback_old) continue;
        std::vector<Vec2> region = cut_old
            ? clip_polygon(element, cut_old->point_d, cut_old->segment_normal, so, eps)
            : element;
        if (region.size() < 3) continue;
        for (Side sn : sides) {
            if (!cut_new && sn != fallback_new) continue;
            std::vector<Vec2> sub = cut_new
                ? clip_polygon(region, cut_new->point_d, cut_new->segment_normal, sn, eps)
                : region;
            if (sub.size() < 3) continue;
            if (std::abs(polygon_area(sub)) <= 1e-13 * elem_area) continue;
            QuadRule rule = polygon_rule(sub, degree);
            if (rule.points.empty()) continue;
            out.regions.push_back({so, sn, std::move(rule)});
        }
    }
    return out;
}

}  // namespace pifem
