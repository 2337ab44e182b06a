#include "kolmo/coefficients.hpp"

#include <cmath>
#include <sstream>

#include "kolmo/errors.hpp"
#include "kolmo/rng.hpp"

namespace kolmo {

Eigen::VectorXd CoefficientSet::drift(double t, const Eigen::VectorXd& state) const {
    Eigen::VectorXd out(2 * d);
    out.head(d) = F1(t, state);
    out.tail(d) = F2(t, state);
    return out;
}

Eigen::MatrixXd CoefficientSet::a(double t, const Eigen::VectorXd& state) const {
    const Eigen::MatrixXd s = sigma(t, state);
    return s * s.transpose();
}

void CoefficientSet::use_fd_d1f2(double scale) {
    const DriftFn f2 = F2;
    const int dim = d;
    d1f2 = [f2, dim, scale](double t, const Eigen::VectorXd& state) {
        Eigen::MatrixXd jac(dim, dim);
        Eigen::VectorXd p = state;
        for (int j = 0; j < dim; ++j) {
            const double h = scale * std::max(1.0, std::abs(state(j)));
            p(j) = state(j) + h;
            const Eigen::VectorXd fp = f2(t, p);
            p(j) = state(j) - h;
            const Eigen::VectorXd fm = f2(t, p);
            p(j) = state(j);
            jac.col(j) = (fp - fm) / (2.0 * h);
        }
        return jac;
    };
    d1f2_is_fd = true;
}

namespace {

MatrixFn identity_sigma(int d) {
    return [d](double, const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(d, d); };
}

DriftFn zero_drift(int d) {
    return [d](double, const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(d); };
}

} // namespace

CoefficientSet make_kolmogorov_preset(double alpha, int d) {
    CoefficientSet c;
    c.d = d;
    c.F1 = zero_drift(d);
    c.F2 = [alpha, d](double, const Eigen::VectorXd& state) {
        return Eigen::VectorXd(alpha * state.head(d));
    };
    c.sigma = identity_sigma(d);
    c.d1f2 = [alpha, d](double, const Eigen::VectorXd&) {
        return Eigen::MatrixXd(alpha * Eigen::MatrixXd::Identity(d, d));
    };
    if (d == 1) {
        c.F1_s = [](double, double, double) { return 0.0; };
        c.F2_s = [alpha](double, double x1, double) { return alpha * x1; };
        c.sigma_s = [](double, double, double) { return 1.0; };
        c.d1f2_s = [alpha](double, double, double) { return alpha; };
    }
    c.holder = {0.75, 0.75, 1.0, 0.5};
    c.constants = {1.0, std::abs(alpha) + 1.0, 1.0, 1.0};
    c.Lambda = 1.5;
    const double lo = std::min(0.0, alpha), hi = std::max(0.0, alpha);
    c.convex_set = {lo - 0.5, hi + 0.5, std::max(4.0, 2.0 * alpha * alpha)};
    return c;
}

CoefficientSet make_holder_preset(double beta, int d) {
    CoefficientSet c;
    c.d = d;
    c.F1 = zero_drift(d);
    c.F2 = [beta, d](double, const Eigen::VectorXd& state) {
        Eigen::VectorXd v(d);
        for (int i = 0; i < d; ++i) {
            const double z = state(d + i);
            v(i) = state(i) + (z >= 0 ? 1.0 : -1.0) * std::pow(std::abs(z), beta);
        }
        return v;
    };
    c.sigma = identity_sigma(d);
    c.d1f2 = [d](double, const Eigen::VectorXd&) {
        return Eigen::MatrixXd(Eigen::MatrixXd::Identity(d, d));
    };
    if (d == 1) {
        c.F1_s = [](double, double, double) { return 0.0; };
        c.F2_s = [beta](double, double x1, double x2) {
            return x1 + (x2 >= 0 ? 1.0 : -1.0) * std::pow(std::abs(x2), beta);
        };
        c.sigma_s = [](double, double, double) { return 1.0; };
        c.d1f2_s = [](double, double, double) { return 1.0; };
    }
    c.holder = {0.75, 0.75, beta, 0.5};
    // |sign(b)|b|^beta - sign(b')|b'|^beta| <= 2^{1-beta} |b - b'|^beta
    c.constants = {1.0, 2.0, 1.0, 1.0};
    c.Lambda = 1.5;
    c.convex_set = {0.5, 2.0, 4.0};
    return c;
}

CoefficientSet make_linear_gamma_preset(const Eigen::MatrixXd& gamma, DriftFn f2_bar) {
    const int d = int(gamma.rows());
    CoefficientSet c;
    c.d = d;
    c.F1 = zero_drift(d);
    if (!f2_bar) f2_bar = zero_drift(d);
    c.F2 = [gamma, f2_bar, d](double t, const Eigen::VectorXd& state) {
        return Eigen::VectorXd(f2_bar(t, state) + gamma * state.head(d));
    };
    c.sigma = identity_sigma(d);
    c.d1f2 = [gamma](double, const Eigen::VectorXd&) { return gamma; };
    if (d == 1) {
        const double g0 = gamma(0, 0);
        const DriftFn fb = f2_bar;
        c.F1_s = [](double, double, double) { return 0.0; };
        c.F2_s = [g0, fb](double t, double x1, double x2) {
            Eigen::Vector2d st(x1, x2);
            return fb(t, st)(0) + g0 * x1;
        };
        c.sigma_s = [](double, double, double) { return 1.0; };
        c.d1f2_s = [g0](double, double, double) { return g0; };
    }
    c.holder = {0.75, 0.75, 0.75, 0.5};
    c.constants = {1.0, gamma.cwiseAbs().maxCoeff() * d + 1.0, 1.0, 1.0};
    c.Lambda = 1.5;
    const double lo = gamma.minCoeff(), hi = gamma.maxCoeff();
    const double gnorm = gamma.norm();
    c.convex_set = {lo - 0.5, hi + 0.5, std::max(4.0, 2.0 * gnorm * gnorm)};
    return c;
}

CoefficientSet make_preset(const std::string& name, double alpha, double beta, double gamma) {
    if (name == "kolmogorov") return make_kolmogorov_preset(alpha);
    if (name == "holder") return make_holder_preset(beta);
    if (name == "lipschitz") return make_holder_preset(1.0);
    if (name == "linear-gamma") {
        Eigen::MatrixXd g(1, 1);
        g(0, 0) = gamma;
        return make_linear_gamma_preset(g);
    }
    throw Error("unknown preset: " + name);
}

// ---------------------------------------------------------------------------
// Assumption audits
// ---------------------------------------------------------------------------

namespace {

Eigen::VectorXd sample_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, Rng& rng) {
    Eigen::VectorXd v(lo.size());
    for (int i = 0; i < lo.size(); ++i) v(i) = lo(i) + (hi(i) - lo(i)) * rng.uniform();
    return v;
}

std::string point_str(double t, const Eigen::VectorXd& x) {
    std::ostringstream os;
    os << "(t=" << t << ", x=[";
    for (int i = 0; i < x.size(); ++i) os << (i ? "," : "") << x(i);
    os << "])";
    return os.str();
}

} // namespace

AssumptionReport check_assumptions(const CoefficientSet& coeffs, const SampleSpec& spec) {
    AssumptionReport rep;
    rep.d1f2_is_fd = coeffs.d1f2_is_fd;
    const int d = coeffs.d;
    Rng rng(spec.seed);

    const auto& h = coeffs.holder;
    rep.exponents_pass = h.beta11 > 2.0 / 3.0 && h.beta12 > 2.0 / 3.0 && h.beta22 > 2.0 / 3.0;
    if (h.beta11 <= 2.0 / 3.0)
        rep.violations.push_back("(H1) exponent not greater than 2/3: beta11");
    if (h.beta12 <= 2.0 / 3.0)
        rep.violations.push_back("(H1) exponent not greater than 2/3: beta12");
    if (h.beta22 <= 2.0 / 3.0)
        rep.violations.push_back("(H1) exponent not greater than 2/3: beta22");

    rep.h1_pass = true;
    rep.h2_pass = true;
    rep.h3b_pass = true;
    rep.ellip_min = std::numeric_limits<double>::infinity();
    rep.ellip_max = -rep.ellip_min;
    rep.d1f2_entry_min = rep.d1f2_gram_min = std::numeric_limits<double>::infinity();
    rep.d1f2_entry_max = rep.d1f2_gram_max = -rep.d1f2_entry_min;

    for (int k = 0; k < spec.count; ++k) {
        const double t = spec.t_lo + (spec.t_hi - spec.t_lo) * rng.uniform();
        const Eigen::VectorXd x = sample_box(spec.lo, spec.hi, rng);
        const Eigen::VectorXd y = sample_box(spec.lo, spec.hi, rng);
        const double d1 = (x.head(d) - y.head(d)).norm();
        const double d2 = (x.tail(d) - y.tail(d)).norm();
        if (d1 + d2 > 0) {
            const double den1 = std::pow(d1, h.beta11) + std::pow(d2, h.beta12);
            const double den2 = d1 + std::pow(d2, h.beta22);
            const double densig = d1 + d2;
            const double q1 = den1 > 0 ? (coeffs.F1(t, x) - coeffs.F1(t, y)).norm() / den1 : 0.0;
            const double q2 = den2 > 0 ? (coeffs.F2(t, x) - coeffs.F2(t, y)).norm() / den2 : 0.0;
            const double qs =
                densig > 0 ? (coeffs.sigma(t, x) - coeffs.sigma(t, y)).norm() / densig : 0.0;
            rep.quot_F1 = std::max(rep.quot_F1, q1);
            rep.quot_F2 = std::max(rep.quot_F2, q2);
            rep.quot_sigma = std::max(rep.quot_sigma, qs);
            if (q1 > coeffs.constants.C1 || q2 > coeffs.constants.C2 ||
                qs > coeffs.constants.Csigma) {
                if (rep.h1_pass)
                    rep.violations.push_back("(H1) Hölder inequality violated at " +
                                             point_str(t, x) + " vs " + point_str(t, y));
                rep.h1_pass = false;
            }
        }

        // (H2): Rayleigh interval of a = sigma sigma^T
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(coeffs.a(t, x));
        const double lmin = es.eigenvalues().minCoeff();
        const double lmax = es.eigenvalues().maxCoeff();
        rep.ellip_min = std::min(rep.ellip_min, lmin);
        rep.ellip_max = std::max(rep.ellip_max, lmax);
        if (lmin < 1.0 / coeffs.Lambda - 1e-12 || lmax > coeffs.Lambda + 1e-12) {
            if (rep.h2_pass)
                rep.violations.push_back("(H2) ellipticity interval violated at " +
                                         point_str(t, x));
            rep.h2_pass = false;
        }

        // (H3-b): box containment of D1F2 entries and Gram spectrum
        const Eigen::MatrixXd g = coeffs.d1f2(t, x);
        rep.d1f2_entry_min = std::min(rep.d1f2_entry_min, g.minCoeff());
        rep.d1f2_entry_max = std::max(rep.d1f2_entry_max, g.maxCoeff());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eg(g * g.transpose());
        const double gmin = eg.eigenvalues().minCoeff();
        const double gmax = eg.eigenvalues().maxCoeff();
        rep.d1f2_gram_min = std::min(rep.d1f2_gram_min, gmin);
        rep.d1f2_gram_max = std::max(rep.d1f2_gram_max, gmax);
        const bool in_box = g.minCoeff() >= coeffs.convex_set.lo - 1e-12 &&
                            g.maxCoeff() <= coeffs.convex_set.hi + 1e-12;
        const bool in_spec = gmin >= 1.0 / coeffs.convex_set.Lambda_bar - 1e-12 &&
                             gmax <= coeffs.convex_set.Lambda_bar + 1e-12;
        if (!in_box || !in_spec) {
            if (rep.h3b_pass)
                rep.violations.push_back("(H3-b) D1F2 containment violated at " +
                                         point_str(t, x));
            rep.h3b_pass = false;
        }
    }
    return rep;
}

} // namespace kolmo
