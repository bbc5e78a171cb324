#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "pifem/interface_geometry.hpp"
#include "pifem/mesh.hpp"

namespace pifem {

struct AffineFn {
    double c0 = 0.0, cx = 0.0, cy = 0.0;   // c0 + cx*x + cy*y

    double eval(const Vec2& p) const { return c0 + cx * p.x + cy * p.y; }
    Vec2 grad() const { return {cx, cy}; }
};

/// An affine polynomial per side of the cut segment. Both pieces coincide on
/// non-interface elements.
struct PiecewiseAffine {
    AffineFn minus_piece;
    AffineFn plus_piece;

    const AffineFn& piece(Side s) const { return s == Side::Minus ? minus_piece : plus_piece; }
    double eval(const Vec2& p, Side s) const { return piece(s).eval(p); }
    Vec2 grad(Side s) const { return piece(s).grad(); }
};

/// Local shape functions of one element: the Lagrange basis of the piecewise
/// linear space satisfying value continuity at both intersection points and
/// flux continuity across the cut segment (plain affine barycentric basis on
/// uncut elements).
struct IfeBasis {
    int element = -1;
    std::array<Vec2, 3> vertices;
    std::array<PiecewiseAffine, 3> shapes;
    double beta_minus = 1.0;
    double beta_plus = 1.0;
    const CutConfig* cut = nullptr;   // null on non-interface elements
    Side uniform_side = Side::Minus;  // side of the whole element when uncut

    double beta(Side s) const { return s == Side::Minus ? beta_minus : beta_plus; }

    /// Side of a point within this element (points on the cut segment are Minus).
    Side side_of(const Vec2& p) const { return cut ? cut->side_of(p) : uniform_side; }

    /// Value of shape i at a point of the element; throws OutsideElement if p
    /// lies outside beyond a 1e-12 barycentric tolerance.
    double evaluate(int i, const Vec2& p) const;
    Vec2 gradient(int i, const Vec2& p) const;
};

/// Construct the local basis. For interface elements this solves the 6x6
/// constraint system (3 nodal values, continuity at D and E, flux jump) with
/// partial pivoting; throws SingularLocalSystem if it is numerically singular.
IfeBasis build_local_basis(const std::array<Vec2, 3>& vertices, const CutConfig* cut,
                           double beta_minus, double beta_plus, int element = -1,
                           Side uniform_side = Side::Minus);

/// Per-time-step table of local bases, built once and then shared read-only.
struct BasisTable {
    std::vector<IfeBasis> elements;

    const IfeBasis& operator[](int e) const { return elements[e]; }
    int size() const { return static_cast<int>(elements.size()); }
};

BasisTable build_basis_table(const Mesh& mesh, const InterfaceState& state, double beta_minus,
                             double beta_plus, int threads = 1);

/// Nodal values of g at every mesh node.
std::vector<double> nodal_values(const Mesh& mesh, const std::function<double(Vec2)>& g);

/// Nodal interpolation onto the current space in the interior-dof layout
/// (boundary values dropped: the homogeneous-Dirichlet space).
Eigen::VectorXd interpolate(const Mesh& mesh, const InterfaceState& state, const BasisTable& bases,
                            const std::function<double(Vec2)>& g);

/// Expand an interior-dof vector to all nodes, filling boundary nodes from
/// `boundary` (zeros if null).
std::vector<double> to_all_nodes(const Mesh& mesh, const Eigen::VectorXd& dofs,
                                 const std::vector<double>* boundary = nullptr);

/// Evaluate the discrete function with the given nodal values on element e.
double eval_discrete(const IfeBasis& basis, const Mesh& mesh, const std::vector<double>& all_nodes,
                     const Vec2& p, Side side);
Vec2 grad_discrete(const IfeBasis& basis, const Mesh& mesh, const std::vector<double>& all_nodes,
                   Side side);

/// L2 norm over the whole domain of the discrete field (cut-aware quadrature,
/// exact for piecewise affine functions).
double discrete_l2_norm(const Mesh& mesh, const InterfaceState& state, const BasisTable& bases,
                        const std::vector<double>& all_nodes);

}  // namespace pifem
