#include "kolmo/sde.hpp"

#include <algorithm>
#include <cmath>

#include "kolmo/errors.hpp"
#include "kolmo/parallel.hpp"

namespace kolmo {

BrownianPath sample_brownian(int d, double t0, double T, double step, Rng& rng,
                             std::uint64_t seed_record) {
    BrownianPath path;
    path.t0 = t0;
    path.step = step;
    path.seed = seed_record;
    const int n = int(std::llround((T - t0) / step));
    const double sd = std::sqrt(step);
    path.increments.reserve(n);
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd dw(d);
        for (int i = 0; i < d; ++i) dw(i) = sd * rng.normal();
        path.increments.push_back(std::move(dw));
    }
    return path;
}

BrownianPath refine_half(const BrownianPath& path, Rng& rng) {
    BrownianPath fine;
    fine.t0 = path.t0;
    fine.step = 0.5 * path.step;
    fine.seed = path.seed;
    fine.increments.reserve(2 * path.increments.size());
    const int d = path.d();
    const double sd = 0.5 * std::sqrt(path.step);  // conditional midpoint std = sqrt(h/4)
    for (const auto& dw : path.increments) {
        Eigen::VectorXd f1(d), f2(d);
        for (int i = 0; i < d; ++i) {
            const double xi = sd * rng.normal();
            f1(i) = 0.5 * dw(i) + xi;
            f2(i) = dw(i) - f1(i);
            if (f1(i) + f2(i) != dw(i)) {  // enforce bit-exact pairwise sums
                f1(i) = 0.5 * dw(i);
                f2(i) = dw(i) - f1(i);
            }
        }
        fine.increments.push_back(std::move(f1));
        fine.increments.push_back(std::move(f2));
    }
    return fine;
}

Trajectory euler_simulate(const CoefficientSet& coeffs, const Eigen::VectorXd& x,
                          double t, double T, const BrownianPath& path) {
    const int d = coeffs.d;
    const double h = path.step;
    const int start = int(std::llround((t - path.t0) / h));
    const int n = int(std::llround((T - t) / h));
    if (start < 0 || start + n > path.steps() ||
        std::abs(path.t0 + start * h - t) > 1e-12 * std::max(1.0, std::abs(t)))
        throw Error("euler_simulate: path does not cover [t, T] at its step");

    Trajectory traj;
    traj.times.reserve(n + 1);
    traj.states.reserve(n + 1);
    traj.times.push_back(t);
    traj.states.push_back(x);
    Eigen::VectorXd cur = x;
    for (int k = 0; k < n; ++k) {
        const double tk = t + k * h;
        const Eigen::VectorXd f1 = coeffs.F1(tk, cur);
        const Eigen::VectorXd f2 = coeffs.F2(tk, cur);
        const Eigen::MatrixXd sig = coeffs.sigma(tk, cur);
        // noise enters the first block only
        cur.head(d) += f1 * h + sig * path.increments[start + k];
        cur.tail(d) += f2 * h;
        traj.times.push_back(t + (k + 1) * h);
        traj.states.push_back(cur);
    }
    return traj;
}

Eigen::VectorXd frozen_simulate_with_factor(const FrozenFrame& frame, const Eigen::VectorXd& x,
                                            double t, double s, const CholeskyFactor& factor,
                                            Rng& rng) {
    return mvn_sample(frame.mean(t, s, x), factor, rng, 1).col(0);
}

Eigen::VectorXd frozen_simulate(const FrozenFrame& frame, const Eigen::VectorXd& x,
                                double t, double s, Rng& rng) {
    return frozen_simulate_with_factor(frame, x, t, s, frame.covariance_factor(t, s), rng);
}

std::vector<RefinementRow> dual_refinement_experiment(const CoefficientSet& coeffs,
                                                      const Eigen::VectorXd& x, double t,
                                                      double T, double h0, int levels,
                                                      int n_paths, std::uint64_t seed) {
    // per-path sup^2 per level, reduced in path order afterwards
    std::vector<std::vector<double>> sup2(n_paths, std::vector<double>(levels, 0.0));

    parallel_for(size_t(n_paths), [&](size_t p) {
        Rng rng = Rng::substream(seed, std::uint64_t(p) * 131 + 1);
        BrownianPath coarse = sample_brownian(coeffs.d, t, T, h0, rng, seed);
        Trajectory prev = euler_simulate(coeffs, x, t, T, coarse);
        for (int lev = 0; lev < levels; ++lev) {
            Rng rng_lev = Rng::substream(seed, std::uint64_t(p) * 131 + 2 + lev);
            BrownianPath fine = refine_half(coarse, rng_lev);
            Trajectory cur = euler_simulate(coeffs, x, t, T, fine);
            double sup = 0.0;
            for (size_t k = 0; k < prev.states.size(); ++k)
                sup = std::max(sup, (prev.states[k] - cur.states[2 * k]).norm());
            sup2[p][lev] = sup * sup;
            coarse = std::move(fine);
            prev = std::move(cur);
        }
    });

    std::vector<RefinementRow> rows(levels);
    for (int lev = 0; lev < levels; ++lev) {
        double mean = 0.0;
        for (int p = 0; p < n_paths; ++p) mean += sup2[p][lev];
        mean /= n_paths;
        double var = 0.0;
        for (int p = 0; p < n_paths; ++p) {
            const double dd = sup2[p][lev] - mean;
            var += dd * dd;
        }
        var = n_paths > 1 ? var / (n_paths - 1) : 0.0;
        rows[lev] = {lev, h0 / std::pow(2.0, lev), mean, std::sqrt(var / n_paths), n_paths, seed};
    }
    return rows;
}

HistSpec HistSpec::symmetric(const Eigen::Vector2d& center, const Eigen::Vector2d& half, int bins) {
    HistSpec spec;
    spec.edges1.resize(bins + 1);
    spec.edges2.resize(bins + 1);
    for (int i = 0; i <= bins; ++i) {
        const double u = -1.0 + 2.0 * i / bins;
        spec.edges1(i) = center(0) + half(0) * u;
        spec.edges2(i) = center(1) + half(1) * u;
    }
    return spec;
}

EnsembleStats ensemble_stats(const std::vector<Eigen::VectorXd>& samples, const HistSpec& bins) {
    const int n = int(samples.size());
    if (n < 2) throw EmptyEnsemble("ensemble_stats: need at least 2 samples");
    const int dim = int(samples[0].size());
    const int d = dim / 2;

    EnsembleStats st;
    st.n = n;
    st.bins = bins;

    // two-pass mean/covariance with compensated sums
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim), comp = Eigen::VectorXd::Zero(dim);
    for (const auto& smp : samples) {
        for (int i = 0; i < dim; ++i) {
            const double yy = smp(i) - comp(i);
            const double tt = sum(i) + yy;
            comp(i) = (tt - sum(i)) - yy;
            sum(i) = tt;
        }
    }
    st.mean = sum / n;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& smp : samples) {
        const Eigen::VectorXd c = smp - st.mean;
        cov.noalias() += c * c.transpose();
    }
    st.covariance = SymMatrix(cov / (n - 1));

    const int b1 = bins.bins1(), b2 = bins.bins2();
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(b1, b2);
    auto locate = [](const Eigen::VectorXd& edges, double v) {
        const int nb = int(edges.size()) - 1;
        const auto it = std::upper_bound(edges.data(), edges.data() + edges.size(), v);
        int idx = int(it - edges.data()) - 1;
        return std::clamp(idx, 0, nb - 1);
    };
    for (const auto& smp : samples)
        counts(locate(bins.edges1, smp(0)), locate(bins.edges2, smp(d))) += 1.0;
    st.hist = counts / double(n);
    return st;
}

} // namespace kolmo
