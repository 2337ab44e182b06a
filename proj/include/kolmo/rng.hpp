#pragma once

#include <cstdint>

namespace kolmo {

/// Deterministic random stream (xoshiro256++ core, splitmix64 seeding).
///
/// The standard library distributions are implementation-defined, so uniform
/// and normal variates are generated here directly from the raw bits. Two
/// streams built from the same (seed, index) pair produce identical sequences
/// on every platform and across worker counts.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}
    Rng(std::uint64_t seed, std::uint64_t stream_index);

    /// Independent substream for worker `index`; never share one Rng between workers.
    static Rng substream(std::uint64_t seed, std::uint64_t index) { return Rng(seed, index); }

    std::uint64_t next_u64();
    double uniform();   // [0, 1)
    double normal();    // standard normal (Marsaglia polar, cached spare)

private:
    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace kolmo
