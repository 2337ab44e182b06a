#include "kolmo/transport.hpp"

#include <algorithm>
#include <cmath>

#include "kolmo/errors.hpp"

namespace kolmo {

namespace {

// Packed state layout: [theta(2d) | cumF1(d) | cumF2(d) | cumG(d^2) |
// cumGtheta1(d) | cumGcumF1(d) | cumA(d^2) | cumGA(d^2) | cumGAG(d^2)]
struct Layout {
    int d;
    int o_theta = 0, o_f1, o_f2, o_g, o_gth, o_gcf, o_a, o_ga, o_gag, size;
    explicit Layout(int dim) : d(dim) {
        const int d2 = d * d;
        o_f1 = 2 * d;
        o_f2 = 3 * d;
        o_g = 4 * d;
        o_gth = o_g + d2;
        o_gcf = o_gth + d;
        o_a = o_gcf + d;
        o_ga = o_a + d2;
        o_gag = o_ga + d2;
        size = o_gag + d2;
    }
    Eigen::Map<const Eigen::MatrixXd> mat(const Eigen::VectorXd& v, int off) const {
        return Eigen::Map<const Eigen::MatrixXd>(v.data() + off, d, d);
    }
};

Eigen::VectorXd packed_deriv(const CoefficientSet& coeffs, const Layout& lay, double r,
                             const Eigen::VectorXd& y) {
    const int d = lay.d;
    const Eigen::VectorXd theta = y.head(2 * d);
    const Eigen::VectorXd f1 = coeffs.F1(r, theta);
    const Eigen::VectorXd f2 = coeffs.F2(r, theta);
    const Eigen::MatrixXd g = coeffs.d1f2(r, theta);
    const Eigen::MatrixXd a = coeffs.a(r, theta);
    const Eigen::Map<const Eigen::MatrixXd> cum_g = lay.mat(y, lay.o_g);
    const Eigen::MatrixXd ga = cum_g * a;

    Eigen::VectorXd dy(lay.size);
    dy.head(d) = f1;
    dy.segment(d, d) = f2;
    dy.segment(lay.o_f1, d) = f1;
    dy.segment(lay.o_f2, d) = f2;
    Eigen::Map<Eigen::MatrixXd>(dy.data() + lay.o_g, d, d) = g;
    dy.segment(lay.o_gth, d) = g * theta.head(d);
    dy.segment(lay.o_gcf, d) = g * y.segment(lay.o_f1, d);
    Eigen::Map<Eigen::MatrixXd>(dy.data() + lay.o_a, d, d) = a;
    Eigen::Map<Eigen::MatrixXd>(dy.data() + lay.o_ga, d, d) = ga;
    Eigen::Map<Eigen::MatrixXd>(dy.data() + lay.o_gag, d, d) = ga * cum_g.transpose();
    return dy;
}

} // namespace

FrozenFrame solve_transport(const CoefficientSet& coeffs, double tau,
                            const Eigen::VectorXd& xi, double T,
                            const ODEGridConfig& cfg) {
    if (tau > T)
        throw ReversedInterval("solve_transport: tau > T is rejected");
    if (xi.size() != 2 * coeffs.d)
        throw DimensionMismatch("solve_transport: xi must have size 2d");

    FrozenFrame frame;
    frame.coeffs_ = coeffs;
    if (!frame.coeffs_.d1f2) frame.coeffs_.use_fd_d1f2();
    frame.tau_ = tau;
    frame.T_ = T;
    frame.xi_ = xi;

    const Layout lay(coeffs.d);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(lay.size);
    y.head(2 * coeffs.d) = xi;

    const int steps =
        (T > tau) ? std::max(1, int(std::ceil((T - tau) * cfg.steps_per_unit_time - 1e-9))) : 0;
    frame.h_ = steps > 0 ? (T - tau) / steps : 0.0;
    frame.times_.reserve(steps + 1);
    frame.states_.reserve(steps + 1);
    frame.derivs_.reserve(steps + 1);

    const auto& cs = frame.coeffs_;
    double r = tau;
    Eigen::VectorXd k1 = packed_deriv(cs, lay, r, y);
    frame.times_.push_back(r);
    frame.states_.push_back(y);
    frame.derivs_.push_back(k1);
    const double h = frame.h_;
    for (int k = 0; k < steps; ++k) {
        const Eigen::VectorXd k2 = packed_deriv(cs, lay, r + 0.5 * h, y + 0.5 * h * k1);
        const Eigen::VectorXd k3 = packed_deriv(cs, lay, r + 0.5 * h, y + 0.5 * h * k2);
        const Eigen::VectorXd k4 = packed_deriv(cs, lay, r + h, y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        r = (k + 1 == steps) ? T : tau + (k + 1) * h;
        k1 = packed_deriv(cs, lay, r, y);
        frame.times_.push_back(r);
        frame.states_.push_back(y);
        frame.derivs_.push_back(k1);
    }
    return frame;
}

void FrozenFrame::check_range(double lo, double hi) const {
    const double slack = 1e-12 * std::max(1.0, T_ - tau_);
    if (lo < tau_ - slack || hi > T_ + slack || lo > hi + slack)
        throw OutOfGrid("FrozenFrame: time query outside [tau, T]");
}

Eigen::VectorXd FrozenFrame::state_at(double s) const {
    if (s <= times_.front()) return states_.front();
    if (s >= times_.back()) return states_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), s);
    const size_t k = size_t(it - times_.begin()) - 1;
    if (times_[k] == s) return states_[k];
    const double hk = times_[k + 1] - times_[k];
    const double u = (s - times_[k]) / hk;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1;
    const double h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2;
    const double h11 = u3 - u2;
    return h00 * states_[k] + (h10 * hk) * derivs_[k] + h01 * states_[k + 1] +
           (h11 * hk) * derivs_[k + 1];
}

FrozenFrame::Snapshot FrozenFrame::snapshot(double s) const {
    const Layout lay(coeffs_.d);
    const Eigen::VectorXd y = state_at(s);
    Snapshot snap;
    snap.theta = y.head(2 * lay.d);
    snap.cum_f1 = y.segment(lay.o_f1, lay.d);
    snap.cum_f2 = y.segment(lay.o_f2, lay.d);
    snap.cum_g = lay.mat(y, lay.o_g);
    snap.cum_g_theta1 = y.segment(lay.o_gth, lay.d);
    snap.cum_g_cumf1 = y.segment(lay.o_gcf, lay.d);
    snap.cum_a = lay.mat(y, lay.o_a);
    snap.cum_ga = lay.mat(y, lay.o_ga);
    snap.cum_gag = lay.mat(y, lay.o_gag);
    return snap;
}

Eigen::VectorXd FrozenFrame::theta_at(double s) const {
    check_range(s, s);
    return state_at(s).head(2 * coeffs_.d);
}

Eigen::MatrixXd FrozenFrame::resolvent(double t, double r) const {
    check_range(t, r);
    const Layout lay(coeffs_.d);
    const Eigen::VectorXd yt = state_at(t), yr = state_at(r);
    return lay.mat(yr, lay.o_g) - lay.mat(yt, lay.o_g);
}

Eigen::VectorXd FrozenFrame::mean(double t, double s, const Eigen::VectorXd& x) const {
    check_range(t, s);
    const int d = coeffs_.d;
    if (x.size() != 2 * d) throw DimensionMismatch("FrozenFrame::mean: x must have size 2d");
    const Snapshot a = snapshot(t), b = snapshot(s);
    const Eigen::MatrixXd dg = b.cum_g - a.cum_g;
    Eigen::VectorXd m(2 * d);
    m.head(d) = x.head(d) + (b.cum_f1 - a.cum_f1);
    m.tail(d) = x.tail(d) + (b.cum_f2 - a.cum_f2) + dg * x.head(d) -
                (b.cum_g_theta1 - a.cum_g_theta1) + (b.cum_g_cumf1 - a.cum_g_cumf1) -
                dg * a.cum_f1;
    return m;
}

SymMatrix FrozenFrame::covariance(double t, double s) const {
    check_range(t, s);
    if (!(s > t)) throw OutOfGrid("FrozenFrame::covariance: requires t < s");
    const int d = coeffs_.d;
    const Snapshot a = snapshot(t), b = snapshot(s);
    const Eigen::MatrixXd dP = b.cum_a - a.cum_a;
    const Eigen::MatrixXd dQ = b.cum_ga - a.cum_ga;
    const Eigen::MatrixXd dS = b.cum_gag - a.cum_gag;
    const Eigen::MatrixXd& m = b.cum_g;  // cumulative resolvent at s

    // Sigma_21 = int_t^s R_{r,s} a dr with R_{r,s} = cumG(s) - cumG(r);
    // Sigma_22 likewise expands into primitive differences.
    const Eigen::MatrixXd s21 = m * dP - dQ;
    const Eigen::MatrixXd s22 =
        m * dP * m.transpose() - m * dQ.transpose() - dQ * m.transpose() + dS;

    Eigen::MatrixXd full(2 * d, 2 * d);
    full.topLeftCorner(d, d) = dP;
    full.bottomLeftCorner(d, d) = s21;
    full.topRightCorner(d, d) = s21.transpose();
    full.bottomRightCorner(d, d) = s22;
    return SymMatrix(full);
}

const CholeskyFactor& FrozenFrame::covariance_factor(double t, double s) const {
    const auto key = std::make_pair(t, s);
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->map.find(key);
    if (it == cache_->map.end()) {
        const SymMatrix cov = covariance(t, s);
        const double max_jitter = 1e-8 * cov.mat().diagonal().maxCoeff();
        try {
            auto factor = std::make_unique<CholeskyFactor>(cholesky_with_jitter(cov, max_jitter));
            it = cache_->map.emplace(key, std::move(factor)).first;
        } catch (const NotPositiveDefinite&) {
            throw DegenerateCovariance("FrozenFrame: covariance not factorizable at max jitter");
        }
    }
    return *it->second;
}

SymMatrix kolmogorov_covariance(double alpha, double s) {
    Eigen::MatrixXd k(2, 2);
    k(0, 0) = s;
    k(1, 0) = k(0, 1) = 0.5 * alpha * s * s;
    k(1, 1) = alpha * alpha * s * s * s / 3.0;
    return SymMatrix(k);
}

} // namespace kolmo
