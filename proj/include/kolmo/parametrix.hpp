#pragma once

#include <memory>

#include "kolmo/kernel.hpp"
#include "kolmo/quadrature.hpp"

namespace kolmo {

/// Generic scalar space-time field on (s, state).
using Field = std::function<double(double, const Eigen::VectorXd&)>;
/// d = 1 scalar field on (s, y1, y2) - the grid solver's working shape.
using ScalarField3 = std::function<double(double, double, double)>;

// ---------------------------------------------------------------------------
// Perturbation operators
// ---------------------------------------------------------------------------

enum class DeltaKind { Full, First, Second };

/// Delta(zeta) f = f(s,y) - f(s,zeta);  Delta^1 f = f(s,y1,zeta2) - f(s,zeta);
/// Delta^2 f = f(s,y) - f(s,y1,zeta2).
double delta_apply(DeltaKind kind, const Eigen::VectorXd& zeta, const Field& f,
                   double s, const Eigen::VectorXd& y);

// ---------------------------------------------------------------------------
// Grid fields
// ---------------------------------------------------------------------------

struct GridSpec {
    std::vector<double> times;
    std::vector<double> x1_nodes, x2_nodes;
    static GridSpec uniform(double T, int nt, double lo, double hi, int nx);
    int nt() const { return int(times.size()); }
    int n1() const { return int(x1_nodes.size()); }
    int n2() const { return int(x2_nodes.size()); }
};

/// Trilinear interpolation over the (t, x1, x2) grid of one or more fields
/// sharing one locate. Outside the box the boundary value continues
/// constantly; time is clamped to [times.front(), times.back()].
class GridSampler {
public:
    GridSampler(std::shared_ptr<const GridSpec> spec,
                std::vector<std::shared_ptr<const std::vector<double>>> fields);
    int n_fields() const { return int(fields_.size()); }
    void eval(double s, double y1, double y2, double* out) const;
    double eval1(double s, double y1, double y2, int field = 0) const;

private:
    std::shared_ptr<const GridSpec> spec_;
    std::vector<std::shared_ptr<const std::vector<double>>> fields_;
};

/// The u-solution and its derivative fields on the space-time grid.
/// u at the terminal time slice is exactly zero by construction.
struct GridSolution {
    GridSolution() = default;
    explicit GridSolution(GridSpec spec);

    GridSpec spec;
    std::vector<double> u, d1u, d2u, d11u, d12u;

    std::size_t idx(int it, int i1, int i2) const {
        return (std::size_t(it) * spec.n1() + i1) * spec.n2() + i2;
    }
    /// Rebuild the derivative fields from u by central stencils (one-sided at
    /// the box edges); d12u applies the x2 stencil to d1u.
    void refresh_derivatives();
    double sup_abs(const std::vector<double>& field) const;
    /// Sampler over (d1u, d2u, d11u) sharing one locate.
    std::shared_ptr<const GridSampler> derivative_sampler() const;
    std::shared_ptr<const GridSampler> field_sampler(const std::vector<double>& field) const;
};

// ---------------------------------------------------------------------------
// Integrand terms
// ---------------------------------------------------------------------------

/// Source plus current-iterate derivative fields entering the integrands.
/// Either declare zero_derivatives, install the fused grid sampler, or supply
/// all three scalar closures; otherwise MissingDerivativeField is thrown.
struct SolutionFields {
    ScalarField3 phi;
    ScalarField3 d1u, d2u, d11u;
    std::shared_ptr<const GridSampler> fused;  // fast path: (d1u, d2u, d11u)
    bool zero_derivatives = false;

    static SolutionFields zero(ScalarField3 phi_fn) {
        SolutionFields f;
        f.phi = std::move(phi_fn);
        f.zero_derivatives = true;
        return f;
    }
};

/// Values of the four integrand terms at one (s, y). In centered mode h2
/// carries the integration-by-parts split: h2 = h2_kernel + h2_dy1, where
/// h2_kernel integrates against the differentiated kernel and h2_dy1 against
/// its extra y1-derivative.
struct IntegrandTerms {
    double h1 = 0, h2 = 0, h3 = 0, h4 = 0;
    double h2_kernel = 0, h2_dy1 = 0;
    double sum() const { return h1 + h2 + h3 + h4; }
};

IntegrandTerms integrand_terms(const CoefficientSet& coeffs, const FrozenFrame& frame,
                               const SolutionFields& fields, double s,
                               const Eigen::VectorXd& y, bool centered);

// ---------------------------------------------------------------------------
// Representation, Picard iteration, diagnostics
// ---------------------------------------------------------------------------

struct QuadratureSpec {
    int space_panels = 8;   // Gauss-Legendre panels per z-axis over [-z_half, z_half]
    int space_order = 4;
    double z_half = 8.0;    // +-8 sigma: q mass outside < 1e-8
    int time_panels = 24;   // geometric panels toward s = t
    int time_order = 2;
    double time_ratio = 0.5;
    double prune_weight = 1e-15;  // drop z-nodes with negligible Gaussian weight
};

struct PicardConfig {
    int max_iter = 25;
    double tol = 1e-5;  // sup-grid change tolerance
    QuadratureSpec quad;
    int ode_steps_per_unit = 64;
};

/// One evaluation of the parametrix right-hand side at (t, x): builds the
/// frozen frame at (tau, xi) = (t, x) and integrates sum_j H^j against the
/// frozen kernel with the graded time rule and the Gaussian-standardized
/// space rule, returning the terminal-value solution update
/// -sum_j int int H^j q dy ds (the backward Feynman-Kac sign; with u-fields
/// frozen at zero and phi == 1 this gives -(T - t)). xi_override exists
/// solely for the freezing-point consistency check.
double representation_rhs(const CoefficientSet& coeffs, const SolutionFields& fields,
                          double t, const Eigen::VectorXd& x, double T,
                          const PicardConfig& cfg,
                          const Eigen::VectorXd* xi_override = nullptr);

struct PicardResult {
    GridSolution sol;
    int iterations = 0;
    bool converged = false;
    std::vector<double> changes;  // sup-grid change per iteration
    std::vector<double> ratios;   // change ratio from iteration 2 on
    double final_change = 0.0;
};

/// Explicit Picard iteration u^{k+1} = RHS(u^k) starting from u = 0; the
/// derivative fields inside the integrands come from grid stencils of the
/// previous iterate. Throws NoContraction when the change ratio exceeds 1 for
/// three consecutive iterations.
PicardResult picard_solve(const CoefficientSet& coeffs, const ScalarField3& phi, double T,
                          const PicardConfig& cfg, const GridSpec& grid);

/// Monte Carlo estimate of E int_t^T phi(s, X_s) ds for the frozen process,
/// sampled exactly at the quadrature times. Cross-checks the phi part of
/// representation_rhs.
double feynman_kac_first_term(const CoefficientSet& coeffs, const ScalarField3& phi,
                              double t, const Eigen::VectorXd& x, double T, int n_paths,
                              std::uint64_t seed, const PicardConfig& cfg = {},
                              double* std_err = nullptr);

enum class CenteringVariant { A, B, C };

/// Computes D^{order} of the integral of f (or (Delta^1 f) g for variant C)
/// against the kernel with and without the centering split, returning the
/// absolute difference. Variant A needs n_x1 + n_x2 > 0; B and C need
/// n_x2 > 0 (InadmissibleVariant otherwise).
double centering_check(const FrozenFrame& frame, double t, const Eigen::VectorXd& x,
                       double s, const Field& f, const Field& g, const DerivOrder& order,
                       CenteringVariant variant, const Eigen::VectorXd& zeta,
                       int nodes_per_axis = 48);

struct DiagnosticsReport {
    double sup_d1u = 0, sup_d2u = 0, sup_d11u = 0, sup_d12u = 0;
    double holder_modulus = 0;  // M(D2u, T)
    double gamma = 0;
};

/// Sup-norms over the grid plus the sampled Hölder modulus of D2u with the
/// four-term denominator |dw|^{gamma/3} + |dw|^{beta22} + |dw|^{beta12} + |dw|.
/// Requires 0 < gamma < 3 min(beta12, beta22) - 1.
DiagnosticsReport derivative_diagnostics(const GridSolution& sol, double gamma,
                                         const HolderExponents& holder, int pair_samples,
                                         std::uint64_t seed);

} // namespace kolmo
