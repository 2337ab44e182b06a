#include <chrono>
#include <cstdio>

#include "kolmo/experiments.hpp"

using namespace kolmo;
using namespace kolmo::experiments;
using Clock = std::chrono::steady_clock;

int main() {
    Thresholds thr;
    PicardConfig picard;
    auto t0 = Clock::now();
    const ManufacturedResult r = run_manufactured(0.25, 19, 2.4, picard, thr);
    auto t1 = Clock::now();
    std::printf("manufactured T=0.25 nx=19 box=2.4:\n");
    std::printf("  max_rel_err = %.5f (< 0.02)\n", r.max_rel_err);
    std::printf("  terminal_sup = %.3e (== 0)\n", r.terminal_sup);
    std::printf("  pde_residual_rel = %.5f (< 0.05)\n", r.pde_residual_rel);
    std::printf("  iterations = %d, pass = %d\n", r.iterations, int(r.pass));
    std::printf("  time = %.1f s\n", std::chrono::duration<double>(t1 - t0).count());
    return 0;
}
