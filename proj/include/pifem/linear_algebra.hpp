#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "pifem/errors.hpp"

namespace pifem {

using Vector = Eigen::VectorXd;
using Triplet = Eigen::Triplet<double>;
using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Sparse matrix that is symmetric by construction (full pattern stored).
class SparseSym {
  public:
    SparseSym() = default;
    explicit SparseSym(SparseMat m) : mat_(std::move(m)) {}

    static SparseSym from_triplets(int dim, const std::vector<Triplet>& entries);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const SparseMat& raw() const { return mat_; }

    Vector operator*(const Vector& x) const { return mat_ * x; }
    Vector diagonal() const { return mat_.diagonal(); }
    Eigen::MatrixXd dense() const { return Eigen::MatrixXd(mat_); }

    /// max |A - A^T| entry relative to max |A| entry.
    double asymmetry() const;

    /// this + s * other (matching dimensions).
    SparseSym plus_scaled(double s, const SparseSym& other) const;

  private:
    SparseMat mat_;
};

/// Jacobi-preconditioned conjugate gradients for SPD systems. Deterministic:
/// zero start vector, fixed recurrence. Returns x with ||Ax-b|| <= rel_tol*||b||
/// (the true residual is re-checked before returning). Throws
/// NotPositiveDefinite on negative curvature and MaxIterations after
/// 50*dim iterations.
Vector solve_spd(const SparseSym& A, const Vector& b, double rel_tol = 1e-12);

struct EigenEstimates {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double cond = 0.0;
};

/// Extreme eigenvalues of an SPD matrix: power iteration for lambda_max and
/// inverse iteration (shift 0, via solve_spd) for lambda_min, both from the
/// fixed start vector of ones. Relative tolerance on the eigenvalue.
EigenEstimates condition_number_estimate(const SparseSym& A, double tol = 1e-6);

/// Dense Cholesky fallback for small systems (oracle use; dim <= 400).
Vector solve_dense(const SparseSym& A, const Vector& b);

}  // namespace pifem
