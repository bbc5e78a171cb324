#include "pifem/verification.hpp"

#include <cmath>
#include <random>

#include "pifem/errors.hpp"

namespace pifem {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// integral of u^a v^b over the reference triangle {u,v >= 0, u+v <= 1}
double reference_moment(int a, int b) {
    return factorial(a) * factorial(b) / factorial(a + b + 2);
}

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// coefficients of (c + alpha*u + beta*v)^p as a dense (i,j) table over u^i v^j
void expand_affine_power(double c, double alpha, double beta, int p,
                         std::vector<std::vector<double>>& coeff) {
    coeff.assign(p + 1, std::vector<double>(p + 1, 0.0));
    for (int i = 0; i <= p; ++i) {
        for (int j = 0; i + j <= p; ++j) {
            const int rest = p - i - j;
            coeff[i][j] = binomial(p, i) * binomial(p - i, j) * std::pow(alpha, i) *
                          std::pow(beta, j) * std::pow(c, rest);
        }
    }
}

}  // namespace

double triangle_monomial_integral(const std::array<Vec2, 3>& tri, int p, int q) {
    // x = x0 + (x1-x0)u + (x2-x0)v, likewise y; Jacobian = 2*area
    const double jac = 2.0 * std::abs(signed_area(tri[0], tri[1], tri[2]));
    std::vector<std::vector<double>> cx, cy;
    expand_affine_power(tri[0].x, tri[1].x - tri[0].x, tri[2].x - tri[0].x, p, cx);
    expand_affine_power(tri[0].y, tri[1].y - tri[0].y, tri[2].y - tri[0].y, q, cy);

    double sum = 0.0;
    for (int i = 0; i <= p; ++i)
        for (int j = 0; i + j <= p; ++j)
            for (int k = 0; k <= q; ++k)
                for (int l = 0; k + l <= q; ++l)
                    sum += cx[i][j] * cy[k][l] * reference_moment(i + k, j + l);
    return jac * sum;
}

double segment_monomial_integral(const Vec2& a, const Vec2& b, int k) {
    // integral of s^k ds over the segment, s = arc length from a
    const double len = (b - a).norm();
    return std::pow(len, k + 1) / (k + 1);
}

CutConfig make_synthetic_cut(const std::array<Vec2, 3>& vertices, int apex, double param_d,
                             double param_e, int apex_sign) {
    if (apex < 0 || apex > 2 || param_d <= 0.0 || param_d >= 1.0 || param_e <= 0.0 ||
        param_e >= 1.0)
        throw InvalidArgument("make_synthetic_cut: invalid cut parameters");

    const int n1 = (apex + 1) % 3;
    const int n2 = (apex + 2) % 3;

    CutConfig cut;
    cut.vertex_sign = {-apex_sign, -apex_sign, -apex_sign};
    cut.vertex_sign[apex] = apex_sign;
    cut.cut_edges = {apex, n2};
    cut.point_d = vertices[apex] + (vertices[n1] - vertices[apex]) * param_d;
    cut.point_e = vertices[apex] + (vertices[n2] - vertices[apex]) * param_e;

    std::vector<Vec2> tri{vertices[apex], cut.point_d, cut.point_e};
    std::vector<Vec2> quad{cut.point_d, vertices[n1], vertices[n2], cut.point_e};
    if (apex_sign < 0) {
        cut.sub_minus = std::move(tri);
        cut.sub_plus = std::move(quad);
    } else {
        cut.sub_plus = std::move(tri);
        cut.sub_minus = std::move(quad);
    }

    const Vec2 seg = cut.point_e - cut.point_d;
    Vec2 n = seg.perp() / seg.norm();
    if (n.dot(centroid(cut.sub_plus) - (cut.point_d + cut.point_e) * 0.5) < 0.0) n = n * -1.0;
    cut.segment_normal = n;
    return cut;
}

BasisSweepReport basis_sweep(int configurations, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> cut_param(0.02, 0.98);
    std::uniform_real_distribution<double> log_beta(-3.0, 3.0);
    std::uniform_real_distribution<double> log_scale(-2.0, 0.0);

    BasisSweepReport report;
    while (report.configurations < configurations) {
        std::array<Vec2, 3> v{Vec2{unit(rng), unit(rng)}, Vec2{unit(rng), unit(rng)},
                              Vec2{unit(rng), unit(rng)}};
        double area = signed_area(v[0], v[1], v[2]);
        if (area < 0.0) {
            std::swap(v[1], v[2]);
            area = -area;
        }
        if (area < 0.05) continue;   // keep the shape-regularity of the mesh family
        const double scale = std::pow(10.0, log_scale(rng));
        for (Vec2& p : v) p = p * scale;

        const int apex = static_cast<int>(unit(rng) * 3.0) % 3;
        const int apex_sign = unit(rng) < 0.5 ? -1 : 1;
        const CutConfig cut = make_synthetic_cut(v, apex, cut_param(rng), cut_param(rng), apex_sign);
        const double beta_minus = std::pow(10.0, log_beta(rng));
        const double beta_plus = std::pow(10.0, log_beta(rng));

        const IfeBasis basis = build_local_basis(v, &cut, beta_minus, beta_plus);
        ++report.configurations;

        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const Side s = cut.vertex_sign[j] < 0 ? Side::Minus : Side::Plus;
                const double val = basis.shapes[i].eval(v[j], s);
                report.max_kronecker =
                    std::max(report.max_kronecker, std::abs(val - (i == j ? 1.0 : 0.0)));
            }
            for (const Vec2& p : {cut.point_d, cut.point_e}) {
                report.max_continuity = std::max(
                    report.max_continuity, std::abs(basis.shapes[i].eval(p, Side::Minus) -
                                                    basis.shapes[i].eval(p, Side::Plus)));
            }
            const double flux_gap =
                beta_minus * basis.shapes[i].grad(Side::Minus).dot(cut.segment_normal) -
                beta_plus * basis.shapes[i].grad(Side::Plus).dot(cut.segment_normal);
            report.max_flux_jump = std::max(report.max_flux_jump,
                                            std::abs(flux_gap) / std::max(beta_minus, beta_plus));
        }

        for (int sample = 0; sample < 5; ++sample) {
            double l0 = unit(rng), l1 = unit(rng) * (1.0 - l0);
            const Vec2 p = v[0] * l0 + v[1] * l1 + v[2] * (1.0 - l0 - l1);
            const Side s = cut.side_of(p);
            double sum = 0.0;
            for (int i = 0; i < 3; ++i) sum += basis.shapes[i].eval(p, s);
            report.max_partition_unity = std::max(report.max_partition_unity, std::abs(sum - 1.0));
        }
    }
    return report;
}

QuadratureSweepReport quadrature_sweep(int triangles, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    QuadratureSweepReport report;
    int done = 0;
    while (done < triangles) {
        std::array<Vec2, 3> v{Vec2{unit(rng), unit(rng)}, Vec2{unit(rng), unit(rng)},
                              Vec2{unit(rng), unit(rng)}};
        if (std::abs(signed_area(v[0], v[1], v[2])) < 0.05) continue;
        ++done;
        for (int degree = 1; degree <= 5; ++degree) {
            const QuadRule rule = triangle_rule(v, degree);
            for (double w : rule.weights)
                report.max_positivity_violation = std::min(report.max_positivity_violation, w);
            for (int p = 0; p + 0 <= degree; ++p) {
                for (int q = 0; p + q <= degree; ++q) {
                    double approx = 0.0;
                    for (std::size_t k = 0; k < rule.points.size(); ++k)
                        approx += rule.weights[k] * std::pow(rule.points[k].x, p) *
                                  std::pow(rule.points[k].y, q);
                    const double exact = triangle_monomial_integral(v, p, q);
                    report.max_triangle_defect =
                        std::max(report.max_triangle_defect, std::abs(approx - exact));
                }
            }
        }

        const Vec2 a{unit(rng), unit(rng)};
        const Vec2 b{unit(rng), unit(rng)};
        if ((b - a).norm() < 1e-3) continue;
        for (int degree = 1; degree <= 5; ++degree) {
            const QuadRule rule = edge_rule(a, b, degree);
            const Vec2 dir = (b - a) / (b - a).norm();
            for (int k = 0; k <= degree; ++k) {
                double approx = 0.0;
                for (std::size_t m = 0; m < rule.points.size(); ++m)
                    approx += rule.weights[m] * std::pow((rule.points[m] - a).dot(dir), k);
                const double exact = segment_monomial_integral(a, b, k);
                report.max_edge_defect = std::max(report.max_edge_defect, std::abs(approx - exact));
            }
        }
    }
    return report;
}

GeometrySweepReport geometry_sweep(int configurations, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> cut_param(0.05, 0.95);

    GeometrySweepReport report;
    report.min_union_regions = 1 << 20;
    int done = 0;
    while (done < configurations) {
        std::array<Vec2, 3> v{Vec2{unit(rng), unit(rng)}, Vec2{unit(rng), unit(rng)},
                              Vec2{unit(rng), unit(rng)}};
        double area = signed_area(v[0], v[1], v[2]);
        if (area < 0.0) {
            std::swap(v[1], v[2]);
            area = -area;
        }
        if (area < 0.05) continue;
        ++done;

        const auto make_cut = [&](int apex) {
            return make_synthetic_cut(v, apex, cut_param(rng), cut_param(rng),
                                      unit(rng) < 0.5 ? -1 : 1);
        };
        const CutConfig cut_a = make_cut(static_cast<int>(unit(rng) * 3.0) % 3);
        const CutConfig cut_b = make_cut(static_cast<int>(unit(rng) * 3.0) % 3);

        const double sub_area =
            std::abs(polygon_area(cut_a.sub_minus)) + std::abs(polygon_area(cut_a.sub_plus));
        report.max_area_defect =
            std::max(report.max_area_defect, std::abs(sub_area - area) / area);

        const UnionRule rule = union_cut_rule(v, &cut_a, &cut_b, 2);
        report.max_union_weight_defect = std::max(
            report.max_union_weight_defect, std::abs(rule.total_weight() - area) / area);
        const int regions = static_cast<int>(rule.regions.size());
        report.min_union_regions = std::min(report.min_union_regions, regions);
        report.max_union_regions = std::max(report.max_union_regions, regions);
    }
    return report;
}

}  // namespace pifem
