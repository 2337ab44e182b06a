#pragma once

#include <functional>

#include <Eigen/Dense>

namespace kolmo {

using ScalarField = std::function<double(const Eigen::VectorXd&)>;

/// Central-difference scheme with relative step h = scale * max(1, |coordinate|).
struct FiniteDiffScheme {
    int order = 1;       // 1 = gradient, 2 = Hessian
    double scale = 0.0;  // 0 selects the default for the order

    double effective_scale() const { return scale > 0.0 ? scale : (order == 1 ? 1e-5 : 1e-4); }
    double step(double coord) const;
};

Eigen::VectorXd central_gradient(const ScalarField& f, const FiniteDiffScheme& scheme,
                                 const Eigen::VectorXd& point);
Eigen::MatrixXd central_hessian(const ScalarField& f, const FiniteDiffScheme& scheme,
                                const Eigen::VectorXd& point);

double central_derivative_1d(const std::function<double(double)>& f, double x,
                             int order = 1, double scale = 0.0);

} // namespace kolmo
