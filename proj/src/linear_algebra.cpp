#include "pifem/linear_algebra.hpp"

#include <cmath>
#include <string>

namespace pifem {

SparseSym SparseSym::from_triplets(int dim, const std::vector<Triplet>& entries) {
    SparseMat m(dim, dim);
    m.setFromTriplets(entries.begin(), entries.end());
    m.makeCompressed();
    return SparseSym(std::move(m));
}

double SparseSym::asymmetry() const {
    SparseMat diff = mat_ - SparseMat(mat_.transpose());
    double max_diff = 0.0, max_entry = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseMat::InnerIterator it(diff, k); it; ++it)
            max_diff = std::max(max_diff, std::abs(it.value()));
    for (int k = 0; k < mat_.outerSize(); ++k)
        for (SparseMat::InnerIterator it(mat_, k); it; ++it)
            max_entry = std::max(max_entry, std::abs(it.value()));
    return max_entry > 0.0 ? max_diff / max_entry : 0.0;
}

SparseSym SparseSym::plus_scaled(double s, const SparseSym& other) const {
    SparseMat sum = mat_ + s * other.mat_;
    sum.makeCompressed();
    return SparseSym(std::move(sum));
}

Vector solve_spd(const SparseSym& A, const Vector& b, double rel_tol) {
    const int n = A.dim();
    const double bnorm = b.norm();
    if (bnorm == 0.0) return Vector::Zero(n);

    Vector inv_diag = A.diagonal();
    for (int i = 0; i < n; ++i) {
        if (!(inv_diag[i] > 0.0))
            throw NotPositiveDefinite("solve_spd: nonpositive diagonal at row " +
                                      std::to_string(i));
        inv_diag[i] = 1.0 / inv_diag[i];
    }

    Vector x = Vector::Zero(n);
    Vector r = b;
    Vector z = inv_diag.cwiseProduct(r);
    Vector p = z;
    double rz = r.dot(z);
    const long max_iter = 50L * n;

    for (long it = 0; it < max_iter; ++it) {
        const Vector Ap = A * p;
        const double curvature = p.dot(Ap);
        if (curvature <= 0.0)
            throw NotPositiveDefinite("solve_spd: negative curvature at iteration " +
                                      std::to_string(it));
        const double alpha = rz / curvature;
        x += alpha * p;
        r -= alpha * Ap;
        if (r.norm() <= rel_tol * bnorm) {
            // guard against recurrence drift with the true residual
            Vector true_r = b - A * x;
            if (true_r.norm() <= rel_tol * bnorm) return x;
            r = std::move(true_r);
            z = inv_diag.cwiseProduct(r);
            p = z;
            rz = r.dot(z);
            continue;
        }
        z = inv_diag.cwiseProduct(r);
        const double rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }
    throw MaxIterations("solve_spd: no convergence within " + std::to_string(max_iter) +
                        " iterations");
}

namespace {

// Rayleigh-quotient iteration driver shared by both eigenvalue directions.
template <typename ApplyOp>
double iterate_extreme(int n, double tol, ApplyOp&& apply) {
    Vector x = Vector::Ones(n);
    x /= x.norm();
    double lambda = 0.0;
    const int max_iter = 200000;
    for (int it = 0; it < max_iter; ++it) {
        Vector y = apply(x);
        const double lambda_new = x.dot(y);   // Rayleigh quotient of the operator
        const double ynorm = y.norm();
        if (ynorm == 0.0) return 0.0;
        y /= ynorm;
        const bool settled = it > 0 && std::abs(lambda_new - lambda) <= tol * std::abs(lambda_new);
        lambda = lambda_new;
        x = std::move(y);
        if (settled) return lambda;
    }
    throw MaxIterations("condition_number_estimate: eigenvalue iteration stalled");
}

}  // namespace

EigenEstimates condition_number_estimate(const SparseSym& A, double tol) {
    const int n = A.dim();
    if (n == 0) throw InvalidArgument("condition_number_estimate: empty matrix");

    EigenEstimates est;
    est.lambda_max = iterate_extreme(n, tol, [&](const Vector& x) { return A * x; });

    const double solve_tol = std::min(1e-12, 0.01 * tol);
    const double inv_lambda =
        iterate_extreme(n, tol, [&](const Vector& x) { return solve_spd(A, x, solve_tol); });
    est.lambda_min = 1.0 / inv_lambda;
    est.cond = est.lambda_max / est.lambda_min;
    return est;
}

Vector solve_dense(const SparseSym& A, const Vector& b) {
    if (A.dim() > 400) throw InvalidArgument("solve_dense: oracle fallback limited to dim <= 400");
    Eigen::LLT<Eigen::MatrixXd> llt(A.dense());
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("solve_dense: Cholesky factorization failed");
    return llt.solve(b);
}

}  // namespace pifem
