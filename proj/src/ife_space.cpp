#include "pifem/ife_space.hpp"

#include <cmath>
#include <string>

#include "pifem/errors.hpp"
#include "pifem/parallel.hpp"
#include "pifem/quadrature.hpp"

namespace pifem {

namespace {

// Barycentric (standard P1) shape functions of a triangle.
std::array<AffineFn, 3> affine_basis(const std::array<Vec2, 3>& v) {
    const double twice_area = 2.0 * signed_area(v[0], v[1], v[2]);
    std::array<AffineFn, 3> out;
    for (int i = 0; i < 3; ++i) {
        const Vec2& a = v[(i + 1) % 3];
        const Vec2& b = v[(i + 2) % 3];
        out[i].c0 = (a.x * b.y - b.x * a.y) / twice_area;
        out[i].cx = (a.y - b.y) / twice_area;
        out[i].cy = (b.x - a.x) / twice_area;
    }
    return out;
}

}  // namespace

double IfeBasis::evaluate(int i, const Vec2& p) const {
    const auto lambda = barycentric(vertices, p);
    for (double l : lambda)
        if (l < -1e-12)
            throw OutsideElement("evaluate: point outside element " + std::to_string(element));
    return shapes[i].eval(p, side_of(p));
}

Vec2 IfeBasis::gradient(int i, const Vec2& p) const {
    const auto lambda = barycentric(vertices, p);
    for (double l : lambda)
        if (l < -1e-12)
            throw OutsideElement("gradient: point outside element " + std::to_string(element));
    return shapes[i].grad(side_of(p));
}

IfeBasis build_local_basis(const std::array<Vec2, 3>& vertices, const CutConfig* cut,
                           double beta_minus, double beta_plus, int element, Side uniform_side) {
    if (!(beta_minus > 0.0) || !(beta_plus > 0.0))
        throw InvalidArgument("build_local_basis: coefficients must be positive");

    IfeBasis basis;
    basis.element = element;
    basis.vertices = vertices;
    basis.beta_minus = beta_minus;
    basis.beta_plus = beta_plus;
    basis.cut = cut;
    basis.uniform_side = uniform_side;

    if (!cut) {
        const auto aff = affine_basis(vertices);
        for (int i = 0; i < 3; ++i) {
            basis.shapes[i].minus_piece = aff[i];
            basis.shapes[i].plus_piece = aff[i];
        }
        return basis;
    }

    // Local frame centered at the centroid and scaled by the diameter keeps
    // the constraint matrix well conditioned for any cut position.
    const Vec2 c = (vertices[0] + vertices[1] + vertices[2]) / 3.0;
    const double scale = std::max({(vertices[1] - vertices[0]).norm(),
                                   (vertices[2] - vertices[1]).norm(),
                                   (vertices[0] - vertices[2]).norm()});
    auto local = [&](const Vec2& p) { return (p - c) / scale; };

    // Unknowns per shape: (c0-, cx-, cy-, c0+, cx+, cy+) in the local frame.
    Eigen::Matrix<double, 6, 6> A = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 3> B = Eigen::Matrix<double, 6, 3>::Zero();

    for (int j = 0; j < 3; ++j) {
        const Vec2 p = local(vertices[j]);
        const int off = cut->vertex_sign[j] < 0 ? 0 : 3;
        A(j, off + 0) = 1.0;
        A(j, off + 1) = p.x;
        A(j, off + 2) = p.y;
        B(j, j) = 1.0;
    }
    const Vec2 d = local(cut->point_d);
    const Vec2 e = local(cut->point_e);
    A.row(3) << 1.0, d.x, d.y, -1.0, -d.x, -d.y;
    A.row(4) << 1.0, e.x, e.y, -1.0, -e.x, -e.y;
    const Vec2 n = cut->segment_normal;
    A.row(5) << 0.0, beta_minus * n.x, beta_minus * n.y, 0.0, -beta_plus * n.x, -beta_plus * n.y;

    // Rows are dimensionless except the flux row; rescaling it keeps the
    // pivoting balanced across extreme coefficient ratios.
    const double flux_scale = std::max(beta_minus, beta_plus);
    A.row(5) /= flux_scale;

    Eigen::PartialPivLU<Eigen::Matrix<double, 6, 6>> lu(A);
    const Eigen::Matrix<double, 6, 3> X = lu.solve(B);
    const double residual = (A * X - B).norm();
    if (!X.allFinite() || residual > 1e-10 * std::max(1.0, X.norm()))
        throw SingularLocalSystem("build_local_basis: singular constraint system on element " +
                                  std::to_string(element));

    for (int i = 0; i < 3; ++i) {
        // back to the global frame: v = c0 + cx*(x-cx0)/s + cy*(y-cy0)/s
        auto unscale = [&](double c0, double cx, double cy) {
            return AffineFn{c0 - (cx * c.x + cy * c.y) / scale, cx / scale, cy / scale};
        };
        basis.shapes[i].minus_piece = unscale(X(0, i), X(1, i), X(2, i));
        basis.shapes[i].plus_piece = unscale(X(3, i), X(4, i), X(5, i));
    }
    return basis;
}

BasisTable build_basis_table(const Mesh& mesh, const InterfaceState& state, double beta_minus,
                             double beta_plus, int threads) {
    BasisTable table;
    table.elements.resize(mesh.element_count());
    parallel_for(mesh.element_count(), threads, [&](int e) {
        table.elements[e] = build_local_basis(mesh.element_vertices(e), state.cut_of(e),
                                              beta_minus, beta_plus, e, state.element_side(e));
    });
    return table;
}

std::vector<double> nodal_values(const Mesh& mesh, const std::function<double(Vec2)>& g) {
    std::vector<double> out(mesh.node_count());
    for (int n = 0; n < mesh.node_count(); ++n) out[n] = g(mesh.nodes[n]);
    return out;
}

Eigen::VectorXd interpolate(const Mesh& mesh, const InterfaceState&, const BasisTable&,
                            const std::function<double(Vec2)>& g) {
    Eigen::VectorXd coeffs(mesh.dof_count);
    for (int d = 0; d < mesh.dof_count; ++d) coeffs[d] = g(mesh.nodes[mesh.dof_node[d]]);
    return coeffs;
}

std::vector<double> to_all_nodes(const Mesh& mesh, const Eigen::VectorXd& dofs,
                                 const std::vector<double>* boundary) {
    std::vector<double> out(mesh.node_count(), 0.0);
    for (int n = 0; n < mesh.node_count(); ++n) {
        if (mesh.node_dof[n] >= 0)
            out[n] = dofs[mesh.node_dof[n]];
        else if (boundary)
            out[n] = (*boundary)[n];
    }
    return out;
}

double eval_discrete(const IfeBasis& basis, const Mesh& mesh, const std::vector<double>& all_nodes,
                     const Vec2& p, Side side) {
    const auto& tri = mesh.elements[basis.element];
    double v = 0.0;
    for (int i = 0; i < 3; ++i) v += all_nodes[tri[i]] * basis.shapes[i].eval(p, side);
    return v;
}

Vec2 grad_discrete(const IfeBasis& basis, const Mesh& mesh, const std::vector<double>& all_nodes,
                   Side side) {
    const auto& tri = mesh.elements[basis.element];
    Vec2 g{0.0, 0.0};
    for (int i = 0; i < 3; ++i) g += basis.shapes[i].grad(side) * all_nodes[tri[i]];
    return g;
}

double discrete_l2_norm(const Mesh& mesh, const InterfaceState& state, const BasisTable& bases,
                        const std::vector<double>& all_nodes) {
    double sum = 0.0;
    for (int e = 0; e < mesh.element_count(); ++e) {
        auto accumulate = [&](const QuadRule& rule, Side s) {
            for (std::size_t q = 0; q < rule.points.size(); ++q) {
                const double v = eval_discrete(bases[e], mesh, all_nodes, rule.points[q], s);
                sum += rule.weights[q] * v * v;
            }
        };
        if (const CutConfig* cut = state.cut_of(e)) {
            accumulate(cut_rule(*cut, Side::Minus, kVolumeDegree), Side::Minus);
            accumulate(cut_rule(*cut, Side::Plus, kVolumeDegree), Side::Plus);
        } else {
            accumulate(triangle_rule(mesh.element_vertices(e), kVolumeDegree),
                       state.element_side(e));
        }
    }
    return std::sqrt(sum);
}

}  // namespace pifem
