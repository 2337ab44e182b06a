#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace kolmo {

/// Hölder exponents of the drift pieces. beta21 is fixed to 1 (F2 Lipschitz in
/// x1); the remaining drift exponents must exceed 2/3 for the model to be in
/// the admissible regularity class.
struct HolderExponents {
    double beta11 = 0.75;  // F1 in x1
    double beta12 = 0.75;  // F1 in x2
    double beta22 = 0.75;  // F2 in x2
    double alpha1 = 0.5;   // D1F2 in x1
};

struct HolderConstants {
    double C1 = 1.0;
    double C2 = 1.0;
    double Csigma = 1.0;
    double C2bar = 1.0;
};

/// Concrete closed convex constraint on D1F2: an axis-aligned box of matrix
/// entries plus the declared spectral interval [1/Lambda_bar, Lambda_bar]
/// for (D1F2)(D1F2)^T.
struct ConvexBox {
    double lo = 0.5;
    double hi = 2.0;
    double Lambda_bar = 8.0;
};

using DriftFn = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;   // (t, state) -> R^d
using MatrixFn = std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&)>;  // (t, state) -> R^{d x d}
using Scalar3Fn = std::function<double(double, double, double)>;                  // (t, x1, x2), d = 1

/// The model (F1, F2, sigma, D1F2) with its assumption metadata. States are
/// 2d-vectors (x1 stacked over x2). Maps must be pure: evaluation has no side
/// effects, so a set can be shared freely between workers.
struct CoefficientSet {
    int d = 1;
    DriftFn F1;
    DriftFn F2;
    MatrixFn sigma;
    MatrixFn d1f2;          // analytic when available
    bool d1f2_is_fd = false;  // true when d1f2 is the finite-difference fallback

    // Optional d = 1 scalar fast paths mirroring the maps above; hot loops use
    // them when present to avoid Eigen temporaries. Presets install them,
    // mollify drops them (the wrapped vector maps stay authoritative).
    Scalar3Fn F1_s, F2_s, sigma_s, d1f2_s;

    HolderExponents holder;
    HolderConstants constants;
    double Lambda = 2.0;  // ellipticity bound for sigma sigma^T, > 1
    ConvexBox convex_set;

    Eigen::VectorXd x1(const Eigen::VectorXd& state) const { return state.head(d); }
    Eigen::VectorXd x2(const Eigen::VectorXd& state) const { return state.tail(d); }

    /// Full drift (F1, F2) stacked into a 2d-vector.
    Eigen::VectorXd drift(double t, const Eigen::VectorXd& state) const;
    /// Diffusion square a = sigma sigma^T.
    Eigen::MatrixXd a(double t, const Eigen::VectorXd& state) const;

    /// Install the finite-difference fallback for d1f2 (flagged).
    void use_fd_d1f2(double scale = 1e-6);
};

// Named presets reachable from the CLI.
CoefficientSet make_kolmogorov_preset(double alpha, int d = 1);
CoefficientSet make_holder_preset(double beta, int d = 1);  // F2 = x1 + sign(x2)|x2|^beta
CoefficientSet make_linear_gamma_preset(const Eigen::MatrixXd& gamma, DriftFn f2_bar = nullptr);
/// Dispatch by name: "kolmogorov", "holder", "linear-gamma", "lipschitz"
/// (lipschitz is holder with beta = 1).
CoefficientSet make_preset(const std::string& name, double alpha, double beta, double gamma);

// ---------------------------------------------------------------------------
// Assumption audits
// ---------------------------------------------------------------------------

struct SampleSpec {
    Eigen::VectorXd lo, hi;  // 2d state box
    double t_lo = 0.0, t_hi = 1.0;
    int count = 200;
    std::uint64_t seed = 0;
};

struct AssumptionReport {
    bool exponents_pass = false;  // declared drift exponents all > 2/3
    bool h1_pass = false;
    bool h2_pass = false;
    bool h3b_pass = false;
    bool d1f2_is_fd = false;

    // measured Hölder quotients (max over sampled pairs, vs declared constants)
    double quot_F1 = 0.0, quot_F2 = 0.0, quot_sigma = 0.0;
    // measured spectrum interval of a = sigma sigma^T
    double ellip_min = 0.0, ellip_max = 0.0;
    // measured entry range and Gram spectrum of D1F2
    double d1f2_entry_min = 0.0, d1f2_entry_max = 0.0;
    double d1f2_gram_min = 0.0, d1f2_gram_max = 0.0;

    std::vector<std::string> violations;

    bool pass() const { return exponents_pass && h1_pass && h2_pass && h3b_pass; }
};

/// Sample random point pairs and check (H1)-(H3b) against the declared
/// metadata. Violations are report entries (with witnessing points), never
/// exceptions. Deterministic given the seed.
AssumptionReport check_assumptions(const CoefficientSet& coeffs, const SampleSpec& spec);

} // namespace kolmo
