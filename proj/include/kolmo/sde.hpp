#pragma once

#include <cstdint>
#include <vector>

#include "kolmo/transport.hpp"

namespace kolmo {

/// Driving Brownian increments on a uniform grid, each ~ N(0, h Id).
/// Dyadic refinement is exact: refine_half produces a step-h/2 path whose
/// pairwise floating-point sums reproduce this path's increments bit for bit.
struct BrownianPath {
    double t0 = 0.0;
    double step = 0.0;
    std::uint64_t seed = 0;  // recorded for reproducibility
    std::vector<Eigen::VectorXd> increments;  // d-vectors

    int d() const { return increments.empty() ? 0 : int(increments[0].size()); }
    int steps() const { return int(increments.size()); }
    double horizon() const { return t0 + step * steps(); }
};

BrownianPath sample_brownian(int d, double t0, double T, double step, Rng& rng,
                             std::uint64_t seed_record = 0);

/// Conditional midpoint split of every increment (no Brownian bridge needed
/// beyond the midpoint rule): halves sum back to the parent exactly.
BrownianPath refine_half(const BrownianPath& path, Rng& rng);

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;  // 2d each
};

/// Euler-Maruyama for the degenerate system: only the first block receives
/// noise (B = (Id, 0)^T), the second block update is drift-only by
/// construction.
Trajectory euler_simulate(const CoefficientSet& coeffs, const Eigen::VectorXd& x,
                          double t, double T, const BrownianPath& path);

/// One exact draw from N(mean(t,s,x), Sigma(t,s)) - the frozen system is
/// Gaussian, so there is no time-stepping error.
Eigen::VectorXd frozen_simulate(const FrozenFrame& frame, const Eigen::VectorXd& x,
                                double t, double s, Rng& rng);
/// Same with an injected factor (lets tests pass a degenerate covariance).
Eigen::VectorXd frozen_simulate_with_factor(const FrozenFrame& frame, const Eigen::VectorXd& x,
                                            double t, double s, const CholeskyFactor& factor,
                                            Rng& rng);

struct RefinementRow {
    int level;
    double h;
    double mean_sq_sup_dist;
    double std_err;
    int n_paths;
    std::uint64_t seed;
};

/// Shared-noise refinement probe: for each path, simulate at steps h and h/2
/// driven by the same Brownian increments (coarse increments are pairwise sums
/// of fine ones) and report E[sup_grid |X^(h) - X^(h/2)|^2] per level.
/// Deterministic given (seed, config) for any worker count.
std::vector<RefinementRow> dual_refinement_experiment(const CoefficientSet& coeffs,
                                                      const Eigen::VectorXd& x, double t,
                                                      double T, double h0, int levels,
                                                      int n_paths, std::uint64_t seed);

struct HistSpec {
    Eigen::VectorXd edges1, edges2;  // bin edges per axis
    int bins1() const { return int(edges1.size()) - 1; }
    int bins2() const { return int(edges2.size()) - 1; }
    /// Symmetric spec: center +- half per axis, `bins` bins (odd bin counts
    /// put the central bin exactly at the center).
    static HistSpec symmetric(const Eigen::Vector2d& center, const Eigen::Vector2d& half, int bins);
};

struct EnsembleStats {
    int n = 0;
    Eigen::VectorXd mean;
    SymMatrix covariance;  // unbiased
    HistSpec bins;
    Eigen::MatrixXd hist;  // masses, sum exactly 1 (outliers clamped to edge bins)
};

/// Mean, unbiased covariance and a 2-dim histogram of the (x1, x2) components
/// (first coordinate of each block for d > 1).
EnsembleStats ensemble_stats(const std::vector<Eigen::VectorXd>& samples, const HistSpec& bins);

} // namespace kolmo
