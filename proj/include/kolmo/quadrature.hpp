#pragma once

#include <utility>
#include <vector>

namespace kolmo {

struct QuadNode {
    double x;
    double w;
};

/// Gauss-Legendre nodes and weights on [-1, 1], computed once per order.
const std::vector<QuadNode>& gauss_legendre(int order);

/// Composite Gauss-Legendre rule: `panels` equal panels over [a, b].
std::vector<QuadNode> gl_panel_rule(double a, double b, int panels, int order);

/// Time rule on [t, T] graded geometrically toward s = t: panel k covers
/// [t + (T-t) r^{k+1}, t + (T-t) r^k] for k < panels-1, and the last panel
/// absorbs the remaining sliver [t, t + (T-t) r^{panels-1}]. All nodes are
/// strictly inside (t, T).
std::vector<QuadNode> graded_time_rule(double t, double T, int panels, double ratio, int order);

/// Midpoint nodes on [a, b].
std::vector<QuadNode> midpoint_rule(double a, double b, int n);

} // namespace kolmo
