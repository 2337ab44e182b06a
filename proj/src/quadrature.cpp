#include "kolmo/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace kolmo {

namespace {

std::vector<QuadNode> compute_gl(int n) {
    // Newton iteration on Legendre polynomials, symmetric roots.
    std::vector<QuadNode> nodes(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[i] = {-x, w};
        nodes[n - 1 - i] = {x, w};
    }
    if (n % 2 == 1) nodes[n / 2].x = 0.0;
    return nodes;
}

} // namespace

const std::vector<QuadNode>& gauss_legendre(int order) {
    static std::mutex mu;
    static std::map<int, std::vector<QuadNode>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gl(order)).first;
    return it->second;
}

std::vector<QuadNode> gl_panel_rule(double a, double b, int panels, int order) {
    const auto& base = gauss_legendre(order);
    std::vector<QuadNode> out;
    out.reserve(size_t(panels) * order);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (const auto& n : base)
            out.push_back({lo + 0.5 * h * (n.x + 1.0), 0.5 * h * n.w});
    }
    return out;
}

std::vector<QuadNode> graded_time_rule(double t, double T, int panels, double ratio, int order) {
    const auto& base = gauss_legendre(order);
    std::vector<QuadNode> out;
    out.reserve(size_t(panels) * order);
    const double len = T - t;
    double hi = 1.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = (p == panels - 1) ? 0.0 : hi * ratio;
        const double a = t + len * lo;
        const double h = len * (hi - lo);
        for (const auto& n : base)
            out.push_back({a + 0.5 * h * (n.x + 1.0), 0.5 * h * n.w});
        hi = lo;
    }
    return out;
}

std::vector<QuadNode> midpoint_rule(double a, double b, int n) {
    std::vector<QuadNode> out(n);
    const double h = (b - a) / n;
    for (int i = 0; i < n; ++i) out[i] = {a + (i + 0.5) * h, h};
    return out;
}

} // namespace kolmo
