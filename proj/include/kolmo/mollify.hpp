#pragma once

#include "kolmo/coefficients.hpp"

namespace kolmo {

/// The fixed smooth bump exp(-1/(1-z^2)) on (-1, 1), zero outside.
double bump(double z);

/// Space-time mollification stencil of index n: joint space kernel
/// c1 n^{2d} bump(n|y|) on R^{2d}, time kernel c2 n bump(n|s|) on R, each with
/// support radius 1/n. The normalization constants c1, c2 are computed by
/// fine quadrature so that the continuous kernels integrate to 1 within 1e-8.
struct MollifierConfig {
    int n = 8;
    int d = 1;
    double time_horizon = 1.0;  // t - s is clamped to [0, time_horizon]
    int quad_nodes = 21;        // midpoint nodes per axis for the convolution
    double c1 = 0.0;
    double c2 = 0.0;

    static MollifierConfig make(int n, int d = 1, double time_horizon = 1.0);
};

/// Convolve every map of the set (F1, F2, sigma and D1F2) with the mollifier.
/// Metadata is copied; the discrete stencil weights are renormalized to unit
/// mass so constants are preserved and D1F2 containment in the convex box
/// survives exactly. Throws QuadratureFailure when the kernel normalization
/// implied by (c1, c2) is off by more than 1e-6.
CoefficientSet mollify(const CoefficientSet& coeffs, const MollifierConfig& config);

} // namespace kolmo
