#include "kolmo/linalg.hpp"

#include <cmath>

namespace kolmo {

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw DimensionMismatch("SymMatrix: input must be square, dim >= 1");
    m_ = m;
    for (int i = 0; i < m_.rows(); ++i)
        for (int j = 0; j < i; ++j)
            m_(j, i) = m_(i, j);
}

SymMatrix SymMatrix::identity(int dim) {
    return SymMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

SymMatrix SymMatrix::zero(int dim) {
    return SymMatrix(Eigen::MatrixXd::Zero(dim, dim));
}

Eigen::VectorXd CholeskyFactor::solve_lower(const Eigen::VectorXd& b) const {
    return lower.triangularView<Eigen::Lower>().solve(b);
}

Eigen::VectorXd CholeskyFactor::solve(const Eigen::VectorXd& b) const {
    Eigen::VectorXd y = lower.triangularView<Eigen::Lower>().solve(b);
    return lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

Eigen::MatrixXd CholeskyFactor::solve(const Eigen::MatrixXd& b) const {
    Eigen::MatrixXd y = lower.triangularView<Eigen::Lower>().solve(b);
    return lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

double CholeskyFactor::log_det() const {
    double s = 0.0;
    for (int i = 0; i < lower.rows(); ++i) s += std::log(lower(i, i));
    return 2.0 * s;
}

namespace {

bool try_llt(const Eigen::MatrixXd& m, double jitter, Eigen::MatrixXd& out) {
    Eigen::MatrixXd shifted = m;
    if (jitter > 0.0) shifted.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() != Eigen::Success) return false;
    out = llt.matrixL();
    for (int i = 0; i < out.rows(); ++i)
        if (!(out(i, i) > 0.0)) return false;
    return true;
}

} // namespace

CholeskyFactor cholesky_with_jitter(const SymMatrix& m, double max_jitter) {
    if (max_jitter < 0.0)
        throw NotPositiveDefinite("cholesky_with_jitter: max_jitter must be >= 0");
    Eigen::MatrixXd lower;
    if (try_llt(m.mat(), 0.0, lower)) return {lower, 0.0};

    const double eps = 1e-12 * m.mat().diagonal().maxCoeff();
    if (eps > 0.0) {
        for (double jitter = eps; jitter <= max_jitter; jitter *= 2.0) {
            if (try_llt(m.mat(), jitter, lower)) return {lower, jitter};
        }
    }
    throw NotPositiveDefinite("cholesky_with_jitter: factorization failed at max_jitter");
}

double mvn_logpdf(const Eigen::VectorXd& mean, const CholeskyFactor& chol,
                  const Eigen::VectorXd& point) {
    const int dim = chol.dim();
    if (mean.size() != dim || point.size() != dim)
        throw DimensionMismatch("mvn_logpdf: dimension mismatch");
    const Eigen::VectorXd half = chol.solve_lower(point - mean);
    constexpr double log2pi = 1.8378770664093454836;  // log(2 pi)
    return -0.5 * dim * log2pi - 0.5 * chol.log_det() - 0.5 * half.squaredNorm();
}

Eigen::MatrixXd mvn_sample(const Eigen::VectorXd& mean, const CholeskyFactor& chol,
                           Rng& rng, int n) {
    const int dim = chol.dim();
    if (mean.size() != dim)
        throw DimensionMismatch("mvn_sample: dimension mismatch");
    Eigen::MatrixXd out(dim, n);
    Eigen::VectorXd z(dim);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < dim; ++i) z(i) = rng.normal();
        out.col(j) = mean + chol.lower * z;
    }
    return out;
}

} // namespace kolmo
