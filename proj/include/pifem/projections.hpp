#pragma once

#include "pifem/assembly.hpp"

namespace pifem {

/// A function the elliptic projection can be applied to: either an analytic
/// per-side function (continuous across edges, so its edge jumps vanish) or a
/// discrete field with its own piecewise structure.
struct ProjectionSource {
    virtual ~ProjectionSource() = default;

    /// Gradient at x inside `element`; `target_side` is the side of the
    /// target-space region containing x (analytic sources select their branch
    /// with it, discrete sources use their own cut structure instead).
    virtual Vec2 gradient(int element, Side target_side, const Vec2& x) const = 0;

    /// Value at x inside `element` (only used for discontinuous sources).
    virtual double value(int element, const Vec2& x) const = 0;

    /// Continuous sources drop the edge terms that involve their own jumps.
    virtual bool continuous() const = 0;

    virtual int quadrature_degree() const = 0;

    /// Cut structure of the source on this element (null for analytic ones).
    virtual const CutConfig* cut(int /*element*/) const { return nullptr; }
    virtual Side fallback_side(int /*element*/) const { return Side::Minus; }
};

class AnalyticSource final : public ProjectionSource {
  public:
    AnalyticSource(SideVectorFn grad, double t) : grad_(std::move(grad)), t_(t) {}

    Vec2 gradient(int, Side target_side, const Vec2& x) const override {
        return grad_(x, target_side, t_);
    }
    double value(int, const Vec2&) const override { return 0.0; }
    bool continuous() const override { return true; }
    int quadrature_degree() const override { return kErrorDegree; }

  private:
    SideVectorFn grad_;
    double t_;
};

/// A discrete field from some (possibly different) interface state.
class DiscreteSource final : public ProjectionSource {
  public:
    DiscreteSource(const Mesh& mesh, const InterfaceState& state, const BasisTable& bases,
                   std::vector<double> all_nodes)
        : mesh_(mesh), state_(state), bases_(bases), all_nodes_(std::move(all_nodes)) {}

    Vec2 gradient(int element, Side, const Vec2& x) const override {
        return grad_discrete(bases_[element], mesh_, all_nodes_, bases_[element].side_of(x));
    }
    double value(int element, const Vec2& x) const override {
        return eval_discrete(bases_[element], mesh_, all_nodes_, x, bases_[element].side_of(x));
    }
    bool continuous() const override { return false; }
    int quadrature_degree() const override { return kVolumeDegree; }
    const CutConfig* cut(int element) const override { return state_.cut_of(element); }
    Side fallback_side(int element) const override { return state_.element_side(element); }

    const std::vector<double>& nodes() const { return all_nodes_; }

  private:
    const Mesh& mesh_;
    const InterfaceState& state_;
    const BasisTable& bases_;
    std::vector<double> all_nodes_;
};

struct ProjectionResult {
    Vector coefficients;   // interior-dof layout
    double residual = 0.0; // achieved linear-solver residual (relative)
};

/// a_h-orthogonal projection onto the space described by (state, bases):
/// solves A x = r with r_i = a_h(source, psi_i), boundary dofs pinned to bc.
ProjectionResult elliptic_projection(const Mesh& mesh, const InterfaceState& state,
                                     const BasisTable& bases, const ProjectionSource& source,
                                     double sigma, const std::vector<double>* bc = nullptr,
                                     double rel_tol = 1e-12, int threads = 1);

/// Discrete Laplacian: x with (x, v)_M = a_h(w, v) for all v, i.e. M x = A w.
Vector discrete_laplacian(const SparseSym& mass, const SparseSym& stiffness, const Vector& w,
                          double rel_tol = 1e-12);

Vector discrete_laplacian(const Mesh& mesh, const InterfaceState& state, const BasisTable& bases,
                          const Vector& w, double sigma, double rel_tol = 1e-12);

}  // namespace pifem
