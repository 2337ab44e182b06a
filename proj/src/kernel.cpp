#include "kolmo/kernel.hpp"

#include <cmath>
#include <functional>

#include "kolmo/errors.hpp"

namespace kolmo {

DerivOrder::DerivOrder(int nx1, int nx2, int ny1) : n_x1(nx1), n_x2(nx2), n_y1(ny1) {
    const bool ok = nx1 >= 0 && nx1 <= 2 && nx2 >= 0 && nx2 <= 1 && ny1 >= 0 && ny1 <= 1 &&
                    nx1 + nx2 + ny1 <= 3;
    if (!ok) throw UnsupportedOrder("DerivOrder: admissible orders are x1<=2, x2<=1, y1<=1, total<=3");
}

std::vector<DerivOrder> DerivOrder::all_admissible() {
    std::vector<DerivOrder> out;
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 1; ++b)
            for (int c = 0; c <= 1; ++c)
                if (a + b + c <= 3 && a + b + c > 0) out.push_back(DerivOrder(a, b, c));
    return out;
}

double qtilde_log_density(const FrozenFrame& frame, double t, const Eigen::VectorXd& x,
                          double s, const Eigen::VectorXd& y) {
    const CholeskyFactor& factor = frame.covariance_factor(t, s);
    return mvn_logpdf(frame.mean(t, s, x), factor, y);
}

double qtilde_density(const FrozenFrame& frame, double t, const Eigen::VectorXd& x,
                      double s, const Eigen::VectorXd& y) {
    return std::exp(qtilde_log_density(frame, t, x, s, y));
}

namespace {

// Direction Jacobians dz/dv for z = y - m(t,s,x): differentiating through the
// mean uses D_{x1} m = (Id, R_{t,s})^T.
enum class Var { X1, X2, Y1, Y2 };

Eigen::MatrixXd direction(Var v, int d, const Eigen::MatrixXd& r_ts) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * d, d);
    switch (v) {
        case Var::X1:
            j.topRows(d) = -Eigen::MatrixXd::Identity(d, d);
            j.bottomRows(d) = -r_ts;
            break;
        case Var::X2:
            j.bottomRows(d) = -Eigen::MatrixXd::Identity(d, d);
            break;
        case Var::Y1:
            j.topRows(d) = Eigen::MatrixXd::Identity(d, d);
            break;
        case Var::Y2:
            j.bottomRows(d) = Eigen::MatrixXd::Identity(d, d);
            break;
    }
    return j;
}

std::vector<Var> variable_list(const DerivOrder& order) {
    std::vector<Var> vars;
    for (int i = 0; i < order.n_x1; ++i) vars.push_back(Var::X1);
    for (int i = 0; i < order.n_x2; ++i) vars.push_back(Var::X2);
    for (int i = 0; i < order.n_y1; ++i) vars.push_back(Var::Y1);
    return vars;
}

// Contract the Gaussian derivative tensors (Hermite forms of w = Sigma^{-1} z)
// with constant direction Jacobians.
Eigen::VectorXd contract(const std::vector<Eigen::MatrixXd>& dirs, const Eigen::VectorXd& w,
                         const CholeskyFactor& factor, double q, int d) {
    const int k = int(dirs.size());
    if (k == 0) {
        Eigen::VectorXd out(1);
        out(0) = q;
        return out;
    }
    std::vector<Eigen::VectorXd> g(k);        // g_m = J_m^T w
    for (int m = 0; m < k; ++m) g[m] = dirs[m].transpose() * w;
    if (k == 1) return -g[0] * q;

    // S_{mn} = J_m^T Sigma^{-1} J_n via triangular solves
    std::vector<std::vector<Eigen::MatrixXd>> smn(k, std::vector<Eigen::MatrixXd>(k));
    for (int m = 0; m < k; ++m) {
        const Eigen::MatrixXd sol = factor.solve(dirs[m]);
        for (int n = 0; n < k; ++n) smn[n][m] = dirs[n].transpose() * sol;
    }
    if (k == 2) {
        const Eigen::MatrixXd t2 = g[0] * g[1].transpose() - smn[0][1];
        Eigen::VectorXd out(d * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) out(i * d + j) = t2(i, j) * q;
        return out;
    }
    // k == 3
    Eigen::VectorXd out(d * d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int l = 0; l < d; ++l) {
                const double v = -g[0](i) * g[1](j) * g[2](l) + smn[0][1](i, j) * g[2](l) +
                                 smn[0][2](i, l) * g[1](j) + smn[1][2](j, l) * g[0](i);
                out((i * d + j) * d + l) = v * q;
            }
    return out;
}

} // namespace

Eigen::VectorXd qtilde_derivative(const FrozenFrame& frame, double t, const Eigen::VectorXd& x,
                                  double s, const Eigen::VectorXd& y, const DerivOrder& order) {
    const int d = frame.d();
    const CholeskyFactor& factor = frame.covariance_factor(t, s);
    const Eigen::VectorXd z = y - frame.mean(t, s, x);
    const Eigen::VectorXd w = factor.solve(z);
    const double q = std::exp(mvn_logpdf(Eigen::VectorXd::Zero(2 * d), factor, z));

    Eigen::MatrixXd r_ts;
    if (order.n_x1 > 0) r_ts = frame.resolvent(t, s);
    std::vector<Eigen::MatrixXd> dirs;
    for (Var v : variable_list(order)) dirs.push_back(direction(v, d, r_ts));
    return contract(dirs, w, factor, q, d);
}

Eigen::VectorXd qtilde_derivative_fd(const FrozenFrame& frame, double t, const Eigen::VectorXd& x,
                                     double s, const Eigen::VectorXd& y, const DerivOrder& order) {
    const int d = frame.d();
    const auto vars = variable_list(order);
    const int k = int(vars.size());
    if (k == 0) {
        Eigen::VectorXd out(1);
        out(0) = qtilde_density(frame, t, x, s, y);
        return out;
    }
    // nested first-order central differences; larger steps for higher totals
    const double scale = (k == 1) ? 1e-5 : (k == 2 ? 1e-4 : 6e-4);

    // recursive evaluation over the multi-index components
    std::function<double(int, Eigen::VectorXd, Eigen::VectorXd, const std::vector<int>&)> rec =
        [&](int level, Eigen::VectorXd xv, Eigen::VectorXd yv, const std::vector<int>& comp)
        -> double {
        if (level == k) return qtilde_density(frame, t, xv, s, yv);
        const int c = comp[level];
        int idx = 0;
        bool on_x = true;
        switch (vars[level]) {
            case Var::X1: idx = c; on_x = true; break;
            case Var::X2: idx = d + c; on_x = true; break;
            case Var::Y1: idx = c; on_x = false; break;
            case Var::Y2: idx = d + c; on_x = false; break;
        }
        const double base = on_x ? xv(idx) : yv(idx);
        const double h = scale * std::max(1.0, std::abs(base));
        double fp, fm;
        if (on_x) {
            xv(idx) = base + h;
            fp = rec(level + 1, xv, yv, comp);
            xv(idx) = base - h;
            fm = rec(level + 1, xv, yv, comp);
            xv(idx) = base;
        } else {
            yv(idx) = base + h;
            fp = rec(level + 1, xv, yv, comp);
            yv(idx) = base - h;
            fm = rec(level + 1, xv, yv, comp);
            yv(idx) = base;
        }
        return (fp - fm) / (2.0 * h);
    };

    int size = 1;
    for (int i = 0; i < k; ++i) size *= d;
    Eigen::VectorXd out(size);
    std::vector<int> comp(k, 0);
    for (int flat = 0; flat < size; ++flat) {
        int rem = flat;
        for (int i = k - 1; i >= 0; --i) {
            comp[i] = rem % d;
            rem /= d;
        }
        out(flat) = rec(0, x, y, comp);
    }
    return out;
}

Eigen::VectorXd qtilde_dy2(const FrozenFrame& frame, double t, const Eigen::VectorXd& x,
                           double s, const Eigen::VectorXd& y) {
    const int d = frame.d();
    const CholeskyFactor& factor = frame.covariance_factor(t, s);
    const Eigen::VectorXd z = y - frame.mean(t, s, x);
    const Eigen::VectorXd w = factor.solve(z);
    const double q = std::exp(mvn_logpdf(Eigen::VectorXd::Zero(2 * d), factor, z));
    return -w.tail(d) * q;
}

double qhat_bound(const FrozenFrame& frame, double t, const Eigen::VectorXd& x,
                  double s, const Eigen::VectorXd& y, double c) {
    const int d = frame.d();
    const Eigen::VectorXd m = frame.mean(t, s, x);
    const double dt = s - t;
    const double e1 = (y.head(d) - m.head(d)).squaredNorm() / dt;
    const double e2 = (y.tail(d) - m.tail(d)).squaredNorm() / (dt * dt * dt);
    return c / std::pow(dt, 2 * d) * std::exp(-c * (e1 + e2));
}

double kolmogorov_density(double alpha, double s, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y) {
    if (alpha == 0.0) throw ZeroAlpha("kolmogorov_density: alpha must be nonzero");
    const SymMatrix k = kolmogorov_covariance(alpha, s);
    const CholeskyFactor factor = cholesky_with_jitter(k, 0.0);
    Eigen::VectorXd mean(2);
    mean << x(0), x(1) + s * alpha * x(0);
    return std::exp(mvn_logpdf(mean, factor, y));
}

double apply_generator(const CoefficientSet& coeffs, const FieldDerivatives& psi,
                       double t, const Eigen::VectorXd& x) {
    const double tr = (coeffs.a(t, x) * psi.hess_x1).trace();
    return 0.5 * tr + coeffs.F1(t, x).dot(psi.grad_x1) + coeffs.F2(t, x).dot(psi.grad_x2);
}

double apply_frozen_generator(const FrozenFrame& frame, const FieldDerivatives& psi,
                              double t, const Eigen::VectorXd& x) {
    const int d = frame.d();
    const Eigen::VectorXd theta = frame.theta_at(t);
    const CoefficientSet& c = frame.coeffs();
    const double tr = (c.a(t, theta) * psi.hess_x1).trace();
    const Eigen::VectorXd drift2 =
        c.F2(t, theta) + c.d1f2(t, theta) * (x.head(d) - theta.head(d));
    return 0.5 * tr + c.F1(t, theta).dot(psi.grad_x1) + drift2.dot(psi.grad_x2);
}

} // namespace kolmo
