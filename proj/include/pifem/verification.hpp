#pragma once

#include <cstdint>

#include "pifem/ife_space.hpp"
#include "pifem/quadrature.hpp"

namespace pifem {

/// Exact integral of x^p y^q over a triangle (affine map to the reference
/// triangle plus the factorial moment formula). Independent of the
/// quadrature rules it is used to check.
double triangle_monomial_integral(const std::array<Vec2, 3>& tri, int p, int q);

/// Exact integral of |x(s)|-parameterized s^k along a segment: closed-form
/// moment of the arc-length parameter, mapped to the segment.
double segment_monomial_integral(const Vec2& a, const Vec2& b, int k);

/// Synthetic cut of a triangle: apex vertex k separated from the other two,
/// with edge parameters in (0,1) measured from the apex along each cut edge.
CutConfig make_synthetic_cut(const std::array<Vec2, 3>& vertices, int apex, double param_d,
                             double param_e, int apex_sign);

struct BasisSweepReport {
    int configurations = 0;
    double max_kronecker = 0.0;        // |psi_i(A_j) - delta_ij|
    double max_partition_unity = 0.0;  // |sum_i psi_i - 1| at interior samples
    double max_continuity = 0.0;       // |psi^-(P) - psi^+(P)| at D and E
    double max_flux_jump = 0.0;        // |b- grad^- . n - b+ grad^+ . n| / max(b-, b+)

    double worst() const {
        return std::max({max_kronecker, max_partition_unity, max_continuity, max_flux_jump});
    }
};

/// Random (triangle, cut, beta in [1e-3, 1e3]) sweep of the local basis
/// construction.
BasisSweepReport basis_sweep(int configurations, std::uint64_t seed = 20240923u);

struct QuadratureSweepReport {
    double max_triangle_defect = 0.0;  // vs. monomial moments, degrees 1..5
    double max_edge_defect = 0.0;
    double max_positivity_violation = 0.0;  // most negative weight observed

    double worst() const { return std::max(max_triangle_defect, max_edge_defect); }
};

QuadratureSweepReport quadrature_sweep(int triangles, std::uint64_t seed = 77u);

struct GeometrySweepReport {
    double max_area_defect = 0.0;        // |area(T-) + area(T+) - area(T)| / area(T)
    double max_union_weight_defect = 0.0;// union rule total weight vs area(T)
    int min_union_regions = 0;
    int max_union_regions = 0;
};

GeometrySweepReport geometry_sweep(int configurations, std::uint64_t seed = 5150u);

}  // namespace pifem
