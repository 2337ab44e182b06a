#include "kolmo/parametrix.hpp"

#include <algorithm>
#include <cmath>

#include "kolmo/errors.hpp"
#include "kolmo/parallel.hpp"
#include "kolmo/rng.hpp"
#include "kolmo/sde.hpp"

namespace kolmo {

// ---------------------------------------------------------------------------
// Perturbation operators
// ---------------------------------------------------------------------------

double delta_apply(DeltaKind kind, const Eigen::VectorXd& zeta, const Field& f,
                   double s, const Eigen::VectorXd& y) {
    const int d = int(y.size()) / 2;
    switch (kind) {
        case DeltaKind::Full:
            return f(s, y) - f(s, zeta);
        case DeltaKind::First: {
            Eigen::VectorXd mixed = zeta;
            mixed.head(d) = y.head(d);
            return f(s, mixed) - f(s, zeta);
        }
        case DeltaKind::Second: {
            Eigen::VectorXd mixed = zeta;
            mixed.head(d) = y.head(d);
            return f(s, y) - f(s, mixed);
        }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Grid fields
// ---------------------------------------------------------------------------

GridSpec GridSpec::uniform(double T, int nt, double lo, double hi, int nx) {
    GridSpec spec;
    spec.times.resize(nt);
    for (int i = 0; i < nt; ++i) spec.times[i] = T * double(i) / (nt - 1);
    spec.times.back() = T;
    spec.x1_nodes.resize(nx);
    spec.x2_nodes.resize(nx);
    for (int i = 0; i < nx; ++i) {
        const double v = lo + (hi - lo) * double(i) / (nx - 1);
        spec.x1_nodes[i] = v;
        spec.x2_nodes[i] = v;
    }
    return spec;
}

namespace {

// clamped bracket: returns i with axis[i] <= v <= axis[i+1] and the local weight
inline void locate(const std::vector<double>& axis, double v, int& i, double& u) {
    const int n = int(axis.size());
    if (v <= axis.front()) { i = 0; u = 0.0; return; }
    if (v >= axis.back()) { i = n - 2; u = 1.0; return; }
    const auto it = std::upper_bound(axis.begin(), axis.end(), v);
    i = int(it - axis.begin()) - 1;
    u = (v - axis[i]) / (axis[i + 1] - axis[i]);
}

} // namespace

GridSampler::GridSampler(std::shared_ptr<const GridSpec> spec,
                         std::vector<std::shared_ptr<const std::vector<double>>> fields)
    : spec_(std::move(spec)), fields_(std::move(fields)) {}

void GridSampler::eval(double s, double y1, double y2, double* out) const {
    const GridSpec& g = *spec_;
    int it, i1, i2;
    double ut, u1, u2;
    locate(g.times, s, it, ut);
    locate(g.x1_nodes, y1, i1, u1);
    locate(g.x2_nodes, y2, i2, u2);
    const std::size_t n1 = g.n1(), n2 = g.n2();
    const std::size_t base = (std::size_t(it) * n1 + i1) * n2 + i2;
    const std::size_t dt = n1 * n2;
    const double w000 = (1 - ut) * (1 - u1) * (1 - u2), w001 = (1 - ut) * (1 - u1) * u2;
    const double w010 = (1 - ut) * u1 * (1 - u2), w011 = (1 - ut) * u1 * u2;
    const double w100 = ut * (1 - u1) * (1 - u2), w101 = ut * (1 - u1) * u2;
    const double w110 = ut * u1 * (1 - u2), w111 = ut * u1 * u2;
    for (std::size_t f = 0; f < fields_.size(); ++f) {
        const double* v = fields_[f]->data();
        out[f] = w000 * v[base] + w001 * v[base + 1] + w010 * v[base + n2] +
                 w011 * v[base + n2 + 1] + w100 * v[base + dt] + w101 * v[base + dt + 1] +
                 w110 * v[base + dt + n2] + w111 * v[base + dt + n2 + 1];
    }
}

double GridSampler::eval1(double s, double y1, double y2, int field) const {
    double buf[8];
    eval(s, y1, y2, buf);
    return buf[field];
}

GridSolution::GridSolution(GridSpec s) : spec(std::move(s)) {
    const std::size_t n = std::size_t(spec.nt()) * spec.n1() * spec.n2();
    u.assign(n, 0.0);
    d1u.assign(n, 0.0);
    d2u.assign(n, 0.0);
    d11u.assign(n, 0.0);
    d12u.assign(n, 0.0);
}

namespace {

// non-uniform 3-point first/second derivatives along one axis of a line
void line_derivs(const std::vector<double>& axis, const double* f, std::size_t stride,
                 double* out1, double* out2) {
    const int n = int(axis.size());
    auto fv = [&](int i) { return f[stride * i]; };
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            const double h = axis[1] - axis[0];
            out1[0] = (fv(1) - fv(0)) / h;
            if (out2) {
                const double h2 = axis[2] - axis[1];
                out2[0] = 2.0 * (h2 * fv(0) - (h + h2) * fv(1) + h * fv(2)) /
                          (h * h2 * (h + h2));
            }
        } else if (i == n - 1) {
            const double h = axis[n - 1] - axis[n - 2];
            out1[stride * i] = (fv(n - 1) - fv(n - 2)) / h;
            if (out2) {
                const double h1 = axis[n - 2] - axis[n - 3];
                out2[stride * i] = 2.0 * (h * fv(n - 3) - (h1 + h) * fv(n - 2) + h1 * fv(n - 1)) /
                                   (h1 * h * (h1 + h));
            }
        } else {
            const double hl = axis[i] - axis[i - 1], hr = axis[i + 1] - axis[i];
            out1[stride * i] = (fv(i + 1) * hl * hl - fv(i - 1) * hr * hr +
                                fv(i) * (hr * hr - hl * hl)) /
                               (hl * hr * (hl + hr));
            if (out2)
                out2[stride * i] =
                    2.0 * (fv(i - 1) * hr + fv(i + 1) * hl - fv(i) * (hl + hr)) /
                    (hl * hr * (hl + hr));
        }
    }
}

} // namespace

void GridSolution::refresh_derivatives() {
    const int nt = spec.nt(), n1 = spec.n1(), n2 = spec.n2();
    for (int it = 0; it < nt; ++it) {
        // x1 direction: stride n2
        for (int i2 = 0; i2 < n2; ++i2) {
            const std::size_t off = idx(it, 0, i2);
            line_derivs(spec.x1_nodes, &u[off], n2, &d1u[off], &d11u[off]);
        }
        // x2 direction: stride 1
        for (int i1 = 0; i1 < n1; ++i1) {
            const std::size_t off = idx(it, i1, 0);
            line_derivs(spec.x2_nodes, &u[off], 1, &d2u[off], nullptr);
        }
        // mixed: x2 stencil applied to d1u
        for (int i1 = 0; i1 < n1; ++i1) {
            const std::size_t off = idx(it, i1, 0);
            line_derivs(spec.x2_nodes, &d1u[off], 1, &d12u[off], nullptr);
        }
    }
}

double GridSolution::sup_abs(const std::vector<double>& field) const {
    double m = 0.0;
    for (double v : field) m = std::max(m, std::abs(v));
    return m;
}

std::shared_ptr<const GridSampler> GridSolution::derivative_sampler() const {
    auto sp = std::make_shared<const GridSpec>(spec);
    return std::make_shared<const GridSampler>(
        sp, std::vector<std::shared_ptr<const std::vector<double>>>{
                std::make_shared<const std::vector<double>>(d1u),
                std::make_shared<const std::vector<double>>(d2u),
                std::make_shared<const std::vector<double>>(d11u)});
}

std::shared_ptr<const GridSampler> GridSolution::field_sampler(
    const std::vector<double>& field) const {
    auto sp = std::make_shared<const GridSpec>(spec);
    return std::make_shared<const GridSampler>(
        sp, std::vector<std::shared_ptr<const std::vector<double>>>{
                std::make_shared<const std::vector<double>>(field)});
}

// ---------------------------------------------------------------------------
// Integrand engine (d = 1)
// ---------------------------------------------------------------------------

namespace {

struct ScalarCoeffs {
    Scalar3Fn f1, f2, a, g;

    static ScalarCoeffs wrap(const CoefficientSet& c) {
        ScalarCoeffs sc;
        sc.f1 = c.F1_s ? c.F1_s : Scalar3Fn([&c](double t, double y1, double y2) {
            Eigen::Vector2d st(y1, y2);
            return c.F1(t, st)(0);
        });
        sc.f2 = c.F2_s ? c.F2_s : Scalar3Fn([&c](double t, double y1, double y2) {
            Eigen::Vector2d st(y1, y2);
            return c.F2(t, st)(0);
        });
        if (c.sigma_s) {
            const Scalar3Fn ss = c.sigma_s;
            sc.a = [ss](double t, double y1, double y2) {
                const double v = ss(t, y1, y2);
                return v * v;
            };
        } else {
            sc.a = [&c](double t, double y1, double y2) {
                Eigen::Vector2d st(y1, y2);
                return c.a(t, st)(0, 0);
            };
        }
        sc.g = c.d1f2_s ? c.d1f2_s : Scalar3Fn([&c](double t, double y1, double y2) {
            Eigen::Vector2d st(y1, y2);
            return c.d1f2(t, st)(0, 0);
        });
        return sc;
    }
};

struct FrozenVals {
    double theta1, theta2;
    double f1_th, f2_th, a_th, g_th;
};

struct FieldEval {
    double d1, d2, d11;
};

class Engine {
public:
    Engine(const CoefficientSet& coeffs, const SolutionFields& fields)
        : sc_(ScalarCoeffs::wrap(coeffs)), fields_(fields) {
        if (coeffs.d != 1) throw Error("integrand engine: implemented for d = 1");
        if (!fields_.phi) throw MissingDerivativeField("integrand_terms: phi missing");
        if (!fields_.zero_derivatives && !fields_.fused &&
            (!fields_.d1u || !fields_.d2u || !fields_.d11u))
            throw MissingDerivativeField("integrand_terms: D1u, D2u, D1^2u required");
    }

    FrozenVals frozen_at(const FrozenFrame& frame, double s) const {
        const Eigen::VectorXd th = frame.theta_at(s);
        FrozenVals fv;
        fv.theta1 = th(0);
        fv.theta2 = th(1);
        fv.f1_th = sc_.f1(s, fv.theta1, fv.theta2);
        fv.f2_th = sc_.f2(s, fv.theta1, fv.theta2);
        fv.a_th = sc_.a(s, fv.theta1, fv.theta2);
        fv.g_th = sc_.g(s, fv.theta1, fv.theta2);
        return fv;
    }

    FieldEval fields_at(double s, double y1, double y2) const {
        FieldEval fe{0, 0, 0};
        if (fields_.zero_derivatives) return fe;
        if (fields_.fused) {
            double buf[3];
            fields_.fused->eval(s, y1, y2, buf);
            fe.d1 = buf[0];
            fe.d2 = buf[1];
            fe.d11 = buf[2];
        } else {
            fe.d1 = fields_.d1u(s, y1, y2);
            fe.d2 = fields_.d2u(s, y1, y2);
            fe.d11 = fields_.d11u(s, y1, y2);
        }
        return fe;
    }

    // plain forms of the four terms at (s, y); the solver integrates their sum
    // against the kernel
    IntegrandTerms plain(double s, double y1, double y2, const FrozenVals& fv) const {
        IntegrandTerms out;
        out.h1 = fields_.phi(s, y1, y2);
        if (fields_.zero_derivatives) return out;
        const FieldEval fe = fields_at(s, y1, y2);
        out.h2 = -0.5 * (sc_.a(s, y1, y2) - fv.a_th) * fe.d11;
        out.h3 = -(sc_.f1(s, y1, y2) - fv.f1_th) * fe.d1;
        out.h4 = -((sc_.f2(s, y1, y2) - fv.f2_th) - fv.g_th * (y1 - fv.theta1)) * fe.d2;
        out.h2_kernel = out.h2;
        return out;
    }

    // centered forms: every piece vanishes at y2 = theta2, the cross pieces of
    // h3/h4 also at y1 = theta1. h2 splits into the part against the
    // differentiated kernel and the part against its extra y1-derivative.
    IntegrandTerms centered(double s, double y1, double y2, const FrozenVals& fv) const {
        IntegrandTerms out;
        out.h1 = fields_.phi(s, y1, y2) - fields_.phi(s, y1, fv.theta2);
        if (fields_.zero_derivatives) return out;
        const FieldEval fe = fields_at(s, y1, y2);
        const FieldEval fc = fields_at(s, y1, fv.theta2);
        const double d1_c = fe.d1 - fc.d1;  // Delta^2 D1u
        const double d2_c = fe.d2 - fc.d2;  // Delta^2 D2u

        const double a_y = sc_.a(s, y1, y2);
        const double a_yth = sc_.a(s, y1, fv.theta2);
        const double h = 1e-6 * std::max(1.0, std::abs(y1));
        const double da_dy1 =
            (sc_.a(s, y1 + h, fv.theta2) - sc_.a(s, y1 - h, fv.theta2)) / (2.0 * h);

        out.h2_kernel = -0.5 * ((a_y - a_yth) * fe.d11 - da_dy1 * d1_c);
        out.h2_dy1 = 0.5 * (a_yth - fv.a_th) * d1_c;
        out.h2 = out.h2_kernel + out.h2_dy1;

        const double f1_y = sc_.f1(s, y1, y2);
        const double f1_yth = sc_.f1(s, y1, fv.theta2);
        out.h3 = -((f1_y - f1_yth) * fe.d1 + (f1_yth - fv.f1_th) * d1_c);

        const double f2_y = sc_.f2(s, y1, y2);
        const double f2_yth = sc_.f2(s, y1, fv.theta2);
        out.h4 = -(((f2_yth - fv.f2_th) - fv.g_th * (y1 - fv.theta1)) * d2_c +
                   (f2_y - f2_yth) * fe.d2);
        return out;
    }

private:
    ScalarCoeffs sc_;
    const SolutionFields& fields_;
};

} // namespace

IntegrandTerms integrand_terms(const CoefficientSet& coeffs, const FrozenFrame& frame,
                               const SolutionFields& fields, double s,
                               const Eigen::VectorXd& y, bool centered) {
    Engine engine(coeffs, fields);
    const FrozenVals fv = engine.frozen_at(frame, s);
    return centered ? engine.centered(s, y(0), y(1), fv) : engine.plain(s, y(0), y(1), fv);
}

// ---------------------------------------------------------------------------
// Representation and Picard iteration
// ---------------------------------------------------------------------------

namespace {

struct ZRule {
    std::vector<double> z;
    std::vector<double> w;  // Gauss-Legendre weight times the Gaussian factor
};

ZRule make_z_rule(const QuadratureSpec& q) {
    ZRule rule;
    const auto nodes = gl_panel_rule(-q.z_half, q.z_half, q.space_panels, q.space_order);
    rule.z.reserve(nodes.size());
    rule.w.reserve(nodes.size());
    const double norm = 1.0 / std::sqrt(2.0 * M_PI);
    for (const auto& n : nodes) {
        rule.z.push_back(n.x);
        rule.w.push_back(n.w * norm * std::exp(-0.5 * n.x * n.x));
    }
    return rule;
}

} // namespace

double representation_rhs(const CoefficientSet& coeffs, const SolutionFields& fields,
                          double t, const Eigen::VectorXd& x, double T,
                          const PicardConfig& cfg, const Eigen::VectorXd* xi_override) {
    if (coeffs.d != 1) throw Error("representation_rhs: implemented for d = 1");
    if (!(T > t)) return 0.0;

    Engine engine(coeffs, fields);
    const Eigen::VectorXd xi = xi_override ? *xi_override : x;
    const FrozenFrame frame =
        solve_transport(coeffs, t, xi, T, ODEGridConfig{cfg.ode_steps_per_unit});

    const auto time_rule =
        graded_time_rule(t, T, cfg.quad.time_panels, cfg.quad.time_ratio, cfg.quad.time_order);
    const ZRule zr = make_z_rule(cfg.quad);
    const int nz = int(zr.z.size());
    const double prune = cfg.quad.prune_weight;

    double total = 0.0;
    for (const auto& tn : time_rule) {
        const double s = tn.x;
        const Eigen::VectorXd mean = frame.mean(t, s, x);
        const Eigen::MatrixXd& lower = frame.covariance_factor(t, s).lower;
        const double l00 = lower(0, 0), l10 = lower(1, 0), l11 = lower(1, 1);
        const FrozenVals fv = engine.frozen_at(frame, s);

        double inner = 0.0;
        for (int i = 0; i < nz; ++i) {
            const double y1 = mean(0) + l00 * zr.z[i];
            const double y2base = mean(1) + l10 * zr.z[i];
            const double wi = zr.w[i];
            for (int j = 0; j < nz; ++j) {
                const double w = wi * zr.w[j];
                if (w < prune) continue;
                inner += w * engine.plain(s, y1, y2base + l11 * zr.z[j], fv).sum();
            }
        }
        total += tn.w * inner;
    }
    // Backward Feynman-Kac: the terminal-value solution of
    // d_t u + L~ u = phi + (L~ - L) u is u = -E int (phi + (L~ - L) u) ds,
    // i.e. the negative of the integrated term sum.
    return -total;
}

PicardResult picard_solve(const CoefficientSet& coeffs, const ScalarField3& phi, double T,
                          const PicardConfig& cfg, const GridSpec& grid) {
    PicardResult res;
    res.sol = GridSolution(grid);
    GridSolution& sol = res.sol;
    const int nt = grid.nt(), n1 = grid.n1(), n2 = grid.n2();
    const std::size_t interior = std::size_t(nt - 1) * n1 * n2;  // terminal slice stays 0

    int rising = 0;
    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        SolutionFields fields;
        fields.phi = phi;
        if (iter == 1)
            fields.zero_derivatives = true;
        else
            fields.fused = sol.derivative_sampler();

        std::vector<double> u_next(sol.u.size(), 0.0);
        parallel_for(interior, [&](std::size_t node) {
            const int it = int(node / (std::size_t(n1) * n2));
            const int rem = int(node % (std::size_t(n1) * n2));
            const int i1 = rem / n2, i2 = rem % n2;
            Eigen::Vector2d xv(grid.x1_nodes[i1], grid.x2_nodes[i2]);
            u_next[sol.idx(it, i1, i2)] =
                representation_rhs(coeffs, fields, grid.times[it], xv, T, cfg);
        });

        double change = 0.0;
        for (std::size_t k = 0; k < sol.u.size(); ++k)
            change = std::max(change, std::abs(u_next[k] - sol.u[k]));
        res.changes.push_back(change);
        if (res.changes.size() > 1) {
            const double prev = res.changes[res.changes.size() - 2];
            const double ratio = prev > 0 ? change / prev : 0.0;
            res.ratios.push_back(ratio);
            rising = ratio > 1.0 ? rising + 1 : 0;
            if (rising >= 3)
                throw NoContraction("picard_solve: sup-change ratio above 1 for 3 iterations");
        }

        sol.u = std::move(u_next);
        sol.refresh_derivatives();
        res.iterations = iter;
        res.final_change = change;
        if (change < cfg.tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

double feynman_kac_first_term(const CoefficientSet& coeffs, const ScalarField3& phi,
                              double t, const Eigen::VectorXd& x, double T, int n_paths,
                              std::uint64_t seed, const PicardConfig& cfg, double* std_err) {
    if (coeffs.d != 1) throw Error("feynman_kac_first_term: implemented for d = 1");
    const FrozenFrame frame =
        solve_transport(coeffs, t, x, T, ODEGridConfig{cfg.ode_steps_per_unit});
    const auto time_rule =
        graded_time_rule(t, T, cfg.quad.time_panels, cfg.quad.time_ratio, cfg.quad.time_order);
    // warm the factor cache before the parallel section
    for (const auto& tn : time_rule) frame.covariance_factor(t, tn.x);

    std::vector<double> per_path(n_paths, 0.0);
    parallel_for(size_t(n_paths), [&](std::size_t p) {
        Rng rng = Rng::substream(seed, p);
        double acc = 0.0;
        for (const auto& tn : time_rule) {
            const Eigen::VectorXd draw = frozen_simulate(frame, x, t, tn.x, rng);
            acc += tn.w * phi(tn.x, draw(0), draw(1));
        }
        per_path[p] = acc;
    });

    double mean = 0.0;
    for (double v : per_path) mean += v;
    mean /= n_paths;
    if (std_err) {
        double var = 0.0;
        for (double v : per_path) var += (v - mean) * (v - mean);
        var = n_paths > 1 ? var / (n_paths - 1) : 0.0;
        *std_err = std::sqrt(var / n_paths);
    }
    return mean;
}

// ---------------------------------------------------------------------------
// Centering checks
// ---------------------------------------------------------------------------

double centering_check(const FrozenFrame& frame, double t, const Eigen::VectorXd& x,
                       double s, const Field& f, const Field& g, const DerivOrder& order,
                       CenteringVariant variant, const Eigen::VectorXd& zeta,
                       int nodes_per_axis) {
    if (frame.d() != 1) throw Error("centering_check: implemented for d = 1");
    if (order.n_y1 != 0)
        throw InadmissibleVariant("centering_check: order must not differentiate in y1");
    if (variant == CenteringVariant::A && order.n_x1 + order.n_x2 == 0)
        throw InadmissibleVariant("centering_check: variant a needs n_x1 + n_x2 > 0");
    if ((variant == CenteringVariant::B || variant == CenteringVariant::C) && order.n_x2 == 0)
        throw InadmissibleVariant("centering_check: variants b/c need n_x2 > 0");

    // 48^2-style tensor rule in standardized coordinates
    const int panels = std::max(1, nodes_per_axis / 4);
    const auto zr = gl_panel_rule(-8.0, 8.0, panels, 4);
    const Eigen::VectorXd mean = frame.mean(t, s, x);
    const Eigen::MatrixXd& lower = frame.covariance_factor(t, s).lower;
    const double det_l = lower(0, 0) * lower(1, 1);

    auto integrate = [&](const std::function<double(double, const Eigen::VectorXd&)>& h) {
        double acc = 0.0;
        Eigen::Vector2d y;
        for (const auto& ni : zr) {
            for (const auto& nj : zr) {
                y(0) = mean(0) + lower(0, 0) * ni.x;
                y(1) = mean(1) + lower(1, 0) * ni.x + lower(1, 1) * nj.x;
                const double dq = qtilde_derivative(frame, t, x, s, y, order)(0);
                acc += ni.w * nj.w * det_l * h(s, y) * dq;
            }
        }
        return acc;
    };

    double lhs = 0.0, rhs = 0.0;
    switch (variant) {
        case CenteringVariant::A:
            lhs = integrate(f);
            rhs = integrate([&](double ss, const Eigen::VectorXd& y) {
                return delta_apply(DeltaKind::Full, zeta, f, ss, y);
            });
            break;
        case CenteringVariant::B:
            lhs = integrate(f);
            rhs = integrate([&](double ss, const Eigen::VectorXd& y) {
                return delta_apply(DeltaKind::Second, zeta, f, ss, y);
            });
            break;
        case CenteringVariant::C:
            lhs = integrate([&](double ss, const Eigen::VectorXd& y) {
                return delta_apply(DeltaKind::First, zeta, f, ss, y) * g(ss, y);
            });
            rhs = integrate([&](double ss, const Eigen::VectorXd& y) {
                return delta_apply(DeltaKind::First, zeta, f, ss, y) *
                       delta_apply(DeltaKind::Second, zeta, g, ss, y);
            });
            break;
    }
    return std::abs(lhs - rhs);
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

DiagnosticsReport derivative_diagnostics(const GridSolution& sol, double gamma,
                                         const HolderExponents& holder, int pair_samples,
                                         std::uint64_t seed) {
    const double gamma_max = 3.0 * std::min(holder.beta12, holder.beta22) - 1.0;
    if (!(gamma > 0.0) || !(gamma < gamma_max))
        throw InvalidGamma("derivative_diagnostics: need 0 < gamma < 3 min(beta12, beta22) - 1");

    DiagnosticsReport rep;
    rep.gamma = gamma;
    rep.sup_d1u = sol.sup_abs(sol.d1u);
    rep.sup_d2u = sol.sup_abs(sol.d2u);
    rep.sup_d11u = sol.sup_abs(sol.d11u);
    rep.sup_d12u = sol.sup_abs(sol.d12u);

    const auto sampler = sol.field_sampler(sol.d2u);
    const double t_lo = sol.spec.times.front(), t_hi = sol.spec.times.back();
    const double x1_lo = sol.spec.x1_nodes.front(), x1_hi = sol.spec.x1_nodes.back();
    const double x2_lo = sol.spec.x2_nodes.front(), x2_hi = sol.spec.x2_nodes.back();
    Rng rng(seed);
    double m = 0.0;
    for (int k = 0; k < pair_samples; ++k) {
        const double t = t_lo + (t_hi - t_lo) * rng.uniform();
        const double w1 = x1_lo + (x1_hi - x1_lo) * rng.uniform();
        const double w2 = x2_lo + (x2_hi - x2_lo) * rng.uniform();
        const double w2p = x2_lo + (x2_hi - x2_lo) * rng.uniform();
        const double dw = std::abs(w2 - w2p);
        if (dw == 0.0) continue;
        const double num = std::abs(sampler->eval1(t, w1, w2) - sampler->eval1(t, w1, w2p));
        const double den = std::pow(dw, gamma / 3.0) + std::pow(dw, holder.beta22) +
                           std::pow(dw, holder.beta12) + dw;
        m = std::max(m, num / den);
    }
    rep.holder_modulus = m;
    return rep;
}

} // namespace kolmo
