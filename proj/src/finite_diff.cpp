#include "kolmo/finite_diff.hpp"

#include <cmath>

namespace kolmo {

double FiniteDiffScheme::step(double coord) const {
    return effective_scale() * std::max(1.0, std::abs(coord));
}

Eigen::VectorXd central_gradient(const ScalarField& f, const FiniteDiffScheme& scheme,
                                 const Eigen::VectorXd& point) {
    const int n = int(point.size());
    Eigen::VectorXd g(n);
    Eigen::VectorXd p = point;
    for (int i = 0; i < n; ++i) {
        const double h = scheme.step(point(i));
        p(i) = point(i) + h;
        const double fp = f(p);
        p(i) = point(i) - h;
        const double fm = f(p);
        p(i) = point(i);
        g(i) = (fp - fm) / (2.0 * h);
    }
    return g;
}

Eigen::MatrixXd central_hessian(const ScalarField& f, const FiniteDiffScheme& scheme,
                                const Eigen::VectorXd& point) {
    const int n = int(point.size());
    Eigen::MatrixXd hess(n, n);
    Eigen::VectorXd p = point;
    const double f0 = f(point);
    for (int i = 0; i < n; ++i) {
        const double hi = scheme.step(point(i));
        p(i) = point(i) + hi;
        const double fp = f(p);
        p(i) = point(i) - hi;
        const double fm = f(p);
        p(i) = point(i);
        hess(i, i) = (fp - 2.0 * f0 + fm) / (hi * hi);
        for (int j = 0; j < i; ++j) {
            const double hj = scheme.step(point(j));
            p(i) = point(i) + hi; p(j) = point(j) + hj;
            const double fpp = f(p);
            p(j) = point(j) - hj;
            const double fpm = f(p);
            p(i) = point(i) - hi; p(j) = point(j) + hj;
            const double fmp = f(p);
            p(j) = point(j) - hj;
            const double fmm = f(p);
            p(i) = point(i); p(j) = point(j);
            hess(i, j) = hess(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
        }
    }
    return hess;
}

double central_derivative_1d(const std::function<double(double)>& f, double x,
                             int order, double scale) {
    FiniteDiffScheme scheme{order, scale};
    const double h = scheme.step(x);
    if (order == 1) return (f(x + h) - f(x - h)) / (2.0 * h);
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

} // namespace kolmo
