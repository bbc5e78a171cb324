#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace pifem {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    // counterclockwise 90-degree rotation
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Signed area of triangle (a,b,c); positive for counterclockwise orientation.
inline double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

// Shoelace area of a simple polygon (positive if counterclockwise).
inline double polygon_area(const std::vector<Vec2>& p) {
    double s = 0.0;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = p[i];
        const Vec2& b = p[(i + 1) % n];
        s += a.x * b.y - b.x * a.y;
    }
    return 0.5 * s;
}

inline Vec2 centroid(const std::vector<Vec2>& p) {
    Vec2 c{0.0, 0.0};
    for (const Vec2& v : p) c += v;
    return c / static_cast<double>(p.size());
}

// Barycentric coordinates of P with respect to triangle (v0,v1,v2).
inline std::array<double, 3> barycentric(const std::array<Vec2, 3>& v, const Vec2& p) {
    const double area = signed_area(v[0], v[1], v[2]);
    return {signed_area(p, v[1], v[2]) / area,
            signed_area(v[0], p, v[2]) / area,
            signed_area(v[0], v[1], p) / area};
}

}  // namespace pifem
