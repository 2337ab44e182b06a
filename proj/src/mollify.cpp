#include "kolmo/mollify.hpp"

#include <cmath>
#include <memory>
#include <vector>

#include "kolmo/errors.hpp"
#include "kolmo/quadrature.hpp"

namespace kolmo {

double bump(double z) {
    const double r2 = z * z;
    if (r2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r2));
}

namespace {

// int_{-1}^{1} bump and the radial integral over the unit ball of R^m,
// both by fine midpoint quadrature (the bump is flat to all orders at the
// endpoints, so midpoint converges superalgebraically).
double bump_integral_1d(int nodes = 20001) {
    double s = 0.0;
    const double h = 2.0 / nodes;
    for (int i = 0; i < nodes; ++i) s += bump(-1.0 + (i + 0.5) * h);
    return s * h;
}

double bump_integral_ball(int m, int nodes = 20001) {
    // int_{R^m} bump(|z|) dz = S_{m-1} int_0^1 bump(r) r^{m-1} dr
    double s = 0.0;
    const double h = 1.0 / nodes;
    for (int i = 0; i < nodes; ++i) {
        const double r = (i + 0.5) * h;
        s += bump(r) * std::pow(r, m - 1);
    }
    const double surface = 2.0 * std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m);
    return surface * s * h;
}

struct Stencil {
    // offsets in (time, space) with weights normalized to unit mass
    std::vector<double> dt;
    std::vector<Eigen::VectorXd> dy;  // 2d-dim space offsets
    std::vector<double> w;            // joint weights, sum == 1
    double raw_mass = 0.0;            // discrete mass before renormalization
};

Stencil build_stencil(const MollifierConfig& cfg) {
    const int d = cfg.d, m = 2 * d, nn = cfg.quad_nodes;
    const double radius = 1.0 / cfg.n;
    const double h = 2.0 * radius / nn;

    // 1-dim midpoint offsets over [-1/n, 1/n]
    std::vector<double> off(nn);
    for (int i = 0; i < nn; ++i) off[i] = -radius + (i + 0.5) * h;

    // time weights: c2 n bump(n s) h
    std::vector<double> wt(nn);
    for (int i = 0; i < nn; ++i) wt[i] = cfg.c2 * cfg.n * bump(cfg.n * off[i]) * h;

    // joint space weights on the tensor grid of the 2d-dim cube
    std::vector<Eigen::VectorXd> ys;
    std::vector<double> ws;
    const double nscale = std::pow(double(cfg.n), m);
    std::vector<int> idx(m, 0);
    const double cell = std::pow(h, m);
    while (true) {
        Eigen::VectorXd y(m);
        for (int k = 0; k < m; ++k) y(k) = off[idx[k]];
        const double w = cfg.c1 * nscale * bump(cfg.n * y.norm()) * cell;
        if (w > 0.0) {
            ys.push_back(y);
            ws.push_back(w);
        }
        int k = 0;
        while (k < m && ++idx[k] == nn) idx[k++] = 0;
        if (k == m) break;
    }

    Stencil st;
    double mass = 0.0;
    for (size_t i = 0; i < ys.size(); ++i)
        for (int j = 0; j < nn; ++j) mass += ws[i] * wt[j];
    st.raw_mass = mass;
    st.dt.reserve(ys.size() * nn);
    st.dy.reserve(ys.size() * nn);
    st.w.reserve(ys.size() * nn);
    for (size_t i = 0; i < ys.size(); ++i) {
        for (int j = 0; j < nn; ++j) {
            st.dt.push_back(off[j]);
            st.dy.push_back(ys[i]);
            st.w.push_back(ws[i] * wt[j] / mass);
        }
    }
    return st;
}

double clamp(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

} // namespace

MollifierConfig MollifierConfig::make(int n, int d, double time_horizon) {
    MollifierConfig cfg;
    cfg.n = n;
    cfg.d = d;
    cfg.time_horizon = time_horizon;
    cfg.c1 = 1.0 / bump_integral_ball(2 * d);
    cfg.c2 = 1.0 / bump_integral_1d();
    return cfg;
}

CoefficientSet mollify(const CoefficientSet& coeffs, const MollifierConfig& config) {
    MollifierConfig cfg = config;
    if (cfg.d != coeffs.d) cfg.d = coeffs.d;
    if (cfg.c1 <= 0.0 || cfg.c2 <= 0.0) {
        cfg.c1 = 1.0 / bump_integral_ball(2 * cfg.d);
        cfg.c2 = 1.0 / bump_integral_1d();
    }
    if (cfg.n < 1) throw QuadratureFailure("mollify: index n must be >= 1");

    // Verify the continuous kernel normalization implied by (c1, c2).
    const double mass1 = cfg.c1 * bump_integral_ball(2 * cfg.d, 4001);
    const double mass2 = cfg.c2 * bump_integral_1d(4001);
    if (std::abs(mass1 - 1.0) > 1e-6 || std::abs(mass2 - 1.0) > 1e-6)
        throw QuadratureFailure("mollify: kernel normalization deviates from 1");

    auto st = std::make_shared<const Stencil>(build_stencil(cfg));
    const double t_hi = cfg.time_horizon;

    auto conv_drift = [st, t_hi](const DriftFn& f) -> DriftFn {
        if (!f) return nullptr;
        return [st, t_hi, f](double t, const Eigen::VectorXd& x) {
            Eigen::VectorXd acc = st->w[0] * f(clamp(t - st->dt[0], 0.0, t_hi), x - st->dy[0]);
            for (size_t i = 1; i < st->w.size(); ++i)
                acc += st->w[i] * f(clamp(t - st->dt[i], 0.0, t_hi), x - st->dy[i]);
            return acc;
        };
    };
    auto conv_matrix = [st, t_hi](const MatrixFn& f) -> MatrixFn {
        if (!f) return nullptr;
        return [st, t_hi, f](double t, const Eigen::VectorXd& x) {
            Eigen::MatrixXd acc = st->w[0] * f(clamp(t - st->dt[0], 0.0, t_hi), x - st->dy[0]);
            for (size_t i = 1; i < st->w.size(); ++i)
                acc += st->w[i] * f(clamp(t - st->dt[i], 0.0, t_hi), x - st->dy[i]);
            return acc;
        };
    };

    CoefficientSet out = coeffs;
    out.F1 = conv_drift(coeffs.F1);
    out.F2 = conv_drift(coeffs.F2);
    out.sigma = conv_matrix(coeffs.sigma);
    if (coeffs.d1f2) out.d1f2 = conv_matrix(coeffs.d1f2);
    out.F1_s = out.F2_s = out.sigma_s = out.d1f2_s = nullptr;
    return out;
}

} // namespace kolmo
