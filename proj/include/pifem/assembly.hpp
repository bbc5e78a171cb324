#pragma once

#include <optional>

#include "pifem/ife_space.hpp"
#include "pifem/linear_algebra.hpp"
#include "pifem/quadrature.hpp"

namespace pifem {

/// Penalty used when none is given: "sufficiently large" scaled to the
/// coefficient magnitude; validated by the positive-definiteness checks.
inline double default_sigma(double beta_minus, double beta_plus) {
    return 100.0 * std::max(beta_minus, beta_plus);
}

/// A bilinear form assembled over interior dofs, plus the boundary lift
/// lift[i] = sum_b A(i,b) * bc[b] when Dirichlet values bc are supplied.
struct AssembledBilinear {
    SparseSym matrix;
    Vector lift;
};

/// Cross-step mass: rows test the new space, columns the old one.
struct AssembledCross {
    SparseMat matrix;
    Vector lift;   // columns paired with old-time boundary values
};

/// Per-step assembly bundle for the backward Euler system
/// (M + tau*A) u^n = C u^{n-1} + tau*F + boundary lifts.
struct SystemMatrices {
    SparseSym A;
    SparseSym M;
    SparseMat C;
    Vector F;
    Vector lift_A;
    Vector lift_M;
    Vector lift_C;
    int dof_count = 0;
};

/// Stiffness form: volume diffusion plus symmetric interior-penalty terms on
/// interface edges only (jumps of the space vanish elsewhere). Averages and
/// jumps use the fixed lower-element-index-first orientation.
AssembledBilinear assemble_stiffness(const Mesh& mesh, const InterfaceState& state,
                                     const BasisTable& bases, double sigma,
                                     const std::vector<double>* bc = nullptr, int threads = 1);

AssembledBilinear assemble_mass(const Mesh& mesh, const InterfaceState& state,
                                const BasisTable& bases, const std::vector<double>* bc = nullptr,
                                int threads = 1);

/// L2 pairing of the new-state space against the old-state space with exact
/// union-partition quadrature on elements cut in either state.
AssembledCross assemble_cross_mass(const Mesh& mesh, const InterfaceState& state_old,
                                   const InterfaceState& state_new, const BasisTable& bases_old,
                                   const BasisTable& bases_new,
                                   const std::vector<double>* bc_old = nullptr, int threads = 1);

Vector assemble_load(const Mesh& mesh, const InterfaceState& state, const BasisTable& bases,
                     const SideScalarFn& f, double t, int threads = 1);

/// Crossing point of the interface on edge `edge`, if any (taken from the cut
/// of an adjacent interface element; consistent across neighbors).
std::optional<Vec2> edge_cut_point(const Mesh& mesh, const InterfaceState& state, int edge);

/// Coordinate-format dump (row, col, value per line) for cross-checking.
void dump_coo(const SparseMat& m, std::ostream& os);

}  // namespace pifem
