#pragma once

#include <Eigen/Dense>

#include "kolmo/errors.hpp"
#include "kolmo/rng.hpp"

namespace kolmo {

/// Dense symmetric matrix with bit-exact symmetry: the upper triangle is
/// mirrored from the lower one at construction, so m(i,j) == m(j,i) as stored.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(const Eigen::MatrixXd& m);

    static SymMatrix identity(int dim);
    static SymMatrix zero(int dim);

    int dim() const { return int(m_.rows()); }
    double operator()(int i, int j) const { return m_(i, j); }
    const Eigen::MatrixXd& mat() const { return m_; }

private:
    Eigen::MatrixXd m_;
};

/// Lower-triangular Cholesky factor plus the diagonal shift that was needed.
struct CholeskyFactor {
    Eigen::MatrixXd lower;
    double jitter_used = 0.0;

    int dim() const { return int(lower.rows()); }

    /// Solve L x = b.
    Eigen::VectorXd solve_lower(const Eigen::VectorXd& b) const;
    /// Solve (L L^T) x = b by two triangular solves (never forms the inverse).
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
    Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;
    /// log det(L L^T)
    double log_det() const;
};

/// Factor m + jitter*I, trying jitter in the doubling schedule
/// {0, eps, 2 eps, 4 eps, ...} with eps = 1e-12 * max diagonal, stopping at the
/// first success with jitter <= max_jitter. Throws NotPositiveDefinite otherwise.
CholeskyFactor cholesky_with_jitter(const SymMatrix& m, double max_jitter);

/// Log of the normalized Gaussian density (2 pi)^{-dim/2} det^{-1/2} exp(-q/2).
double mvn_logpdf(const Eigen::VectorXd& mean, const CholeskyFactor& chol,
                  const Eigen::VectorXd& point);

/// n independent draws mean + L z, one per column of the result (dim x n).
Eigen::MatrixXd mvn_sample(const Eigen::VectorXd& mean, const CholeskyFactor& chol,
                           Rng& rng, int n);

} // namespace kolmo
