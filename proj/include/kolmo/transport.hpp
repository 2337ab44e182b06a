#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "kolmo/coefficients.hpp"
#include "kolmo/linalg.hpp"

namespace kolmo {

struct ODEGridConfig {
    int steps_per_unit_time = 64;  // RK4 steps per unit of time
};

/// Deterministic transport theta, resolvent R and the mean/covariance of the
/// frozen linearized system for one freezing datum (tau, xi).
///
/// The transport ODE is integrated by classical RK4 together with every time
/// integral the accessors need, accumulated from tau as cumulative primitives
/// (RK4 on a pure quadrature is composite Simpson on the grid). Accessors then
/// reduce to differences of primitives, so resolvent additivity
/// R(t,s) = R(t,r) + R(r,s) holds exactly and any (t, s) inside the frame is
/// reachable; off-node times use cubic Hermite interpolation, matching the
/// integrator's fourth order.
///
/// Immutable after construction; the covariance-factor cache is safe for
/// concurrent readers and first-writers.
class FrozenFrame {
public:
    double tau() const { return tau_; }
    double horizon() const { return T_; }
    int d() const { return coeffs_.d; }
    const CoefficientSet& coeffs() const { return coeffs_; }
    const Eigen::VectorXd& xi() const { return xi_; }
    const std::vector<double>& grid() const { return times_; }

    Eigen::VectorXd theta_at(double s) const;

    /// R_{t,r} = int_t^r D1F2(v, theta_v) dv
    Eigen::MatrixXd resolvent(double t, double r) const;

    /// Mean of the frozen system started at (t, x), evaluated at s.
    Eigen::VectorXd mean(double t, double s, const Eigen::VectorXd& x) const;

    /// Covariance of the frozen system over [t, s], s > t. The two off-diagonal
    /// blocks share one computation and the result is bit-symmetric.
    SymMatrix covariance(double t, double s) const;

    /// Memoized Cholesky factor of covariance(t, s); jitter capped at
    /// 1e-8 * max diagonal. Throws DegenerateCovariance on failure.
    const CholeskyFactor& covariance_factor(double t, double s) const;

    friend FrozenFrame solve_transport(const CoefficientSet&, double,
                                       const Eigen::VectorXd&, double,
                                       const ODEGridConfig&);

private:
    struct Snapshot {
        Eigen::VectorXd theta;               // 2d
        Eigen::VectorXd cum_f1, cum_f2;      // int F1, int F2 (d)
        Eigen::MatrixXd cum_g;               // int D1F2 (d x d)
        Eigen::VectorXd cum_g_theta1;        // int D1F2 theta^1 (d)
        Eigen::VectorXd cum_g_cumf1;         // int D1F2 (int F1) (d)
        Eigen::MatrixXd cum_a;               // int a (d x d)
        Eigen::MatrixXd cum_ga;              // int (int D1F2) a (d x d)
        Eigen::MatrixXd cum_gag;             // int (int D1F2) a (int D1F2)^T
    };

    Eigen::VectorXd state_at(double s) const;
    Snapshot snapshot(double s) const;
    void check_range(double lo, double hi) const;

    CoefficientSet coeffs_;
    double tau_ = 0.0, T_ = 0.0, h_ = 0.0;
    Eigen::VectorXd xi_;
    std::vector<double> times_;
    std::vector<Eigen::VectorXd> states_;  // packed state per node
    std::vector<Eigen::VectorXd> derivs_;  // packed state derivative per node

    struct FactorCache {
        std::mutex mu;
        std::map<std::pair<double, double>, std::unique_ptr<CholeskyFactor>> map;
    };
    std::shared_ptr<FactorCache> cache_ = std::make_shared<FactorCache>();
};

/// Integrate the transport ODE d theta/ds = F(s, theta), theta(tau) = xi on
/// [tau, T]. Throws ReversedInterval when tau > T (reversed intervals are
/// rejected rather than zero-extended).
FrozenFrame solve_transport(const CoefficientSet& coeffs, double tau,
                            const Eigen::VectorXd& xi, double T,
                            const ODEGridConfig& cfg = {});

/// Closed-form covariance of the d = 1 prototype system:
/// [[s, a s^2/2], [a s^2/2, a^2 s^3/3]].
SymMatrix kolmogorov_covariance(double alpha, double s);

} // namespace kolmo
