#pragma once

#include <vector>

#include "kolmo/transport.hpp"

namespace kolmo {

/// Admissible derivative multi-order of the frozen kernel: up to 2 in x1,
/// up to 1 in x2, up to 1 in y1, total at most 3.
struct DerivOrder {
    int n_x1 = 0;
    int n_x2 = 0;
    int n_y1 = 0;

    DerivOrder(int nx1, int nx2, int ny1);
    int total() const { return n_x1 + n_x2 + n_y1; }
    /// (s-t) exponent of the sup bound: -2d - (3 n_x2 + n_x1 + n_y1)/2.
    double scaling_exponent(int d) const {
        return -2.0 * d - 0.5 * (3 * n_x2 + n_x1 + n_y1);
    }
    static std::vector<DerivOrder> all_admissible();
};

double qtilde_log_density(const FrozenFrame& frame, double t, const Eigen::VectorXd& x,
                          double s, const Eigen::VectorXd& y);

/// Frozen Gaussian transition density, normalized to integrate to 1 over
/// R^{2d} (prefactor (2 pi)^{-d} det^{-1/2}).
double qtilde_density(const FrozenFrame& frame, double t, const Eigen::VectorXd& x,
                      double s, const Eigen::VectorXd& y);

/// Analytic derivative tensor, flattened with the first variable's index
/// slowest; variables ordered (x1 copies, x2, y1). Size d^order.total().
/// Assembled from the inverse-covariance Hermite forms with
/// D_{x1} mean = (Id, R_{t,s})^T; never forms the explicit inverse.
Eigen::VectorXd qtilde_derivative(const FrozenFrame& frame, double t, const Eigen::VectorXd& x,
                                  double s, const Eigen::VectorXd& y, const DerivOrder& order);

/// Central-difference fallback for the same tensor (slower, used for
/// cross-checks). Step scales shrink with the total order.
Eigen::VectorXd qtilde_derivative_fd(const FrozenFrame& frame, double t, const Eigen::VectorXd& x,
                                     double s, const Eigen::VectorXd& y, const DerivOrder& order);

/// First derivative in y2 (the symmetry counterpart of D_{x2}: the two sum
/// to zero identically).
Eigen::VectorXd qtilde_dy2(const FrozenFrame& frame, double t, const Eigen::VectorXd& x,
                           double s, const Eigen::VectorXd& y);

/// Gaussian upper-bound shape (c/(s-t)^{2d}) exp(-c(|y1-m1|^2/(s-t) + |y2-m2|^2/(s-t)^3)).
double qhat_bound(const FrozenFrame& frame, double t, const Eigen::VectorXd& x,
                  double s, const Eigen::VectorXd& y, double c);

/// Exact d = 1 prototype density (oracle for qtilde on the kolmogorov preset).
/// x and y are 2-vectors; throws ZeroAlpha when alpha == 0.
double kolmogorov_density(double alpha, double s, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y);

/// A scalar field with supplied first/second derivatives at one point.
struct FieldDerivatives {
    Eigen::VectorXd grad_x1;  // d
    Eigen::VectorXd grad_x2;  // d
    Eigen::MatrixXd hess_x1;  // d x d
};

/// 1/2 Tr(a D^2_{x1} psi) + F1 . D_{x1} psi + F2 . D_{x2} psi
double apply_generator(const CoefficientSet& coeffs, const FieldDerivatives& psi,
                       double t, const Eigen::VectorXd& x);

/// Frozen generator: coefficients evaluated along the frame's transport, the
/// x2-drift linearized through D1F2 around theta^1.
double apply_frozen_generator(const FrozenFrame& frame, const FieldDerivatives& psi,
                              double t, const Eigen::VectorXd& x);

} // namespace kolmo
