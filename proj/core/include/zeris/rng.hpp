#ifndef ZERIS_RNG_HPP
#define ZERIS_RNG_HPP

#include <cstdint>

namespace zeris::mc {

/// Counter-based random stream: draw i of stream s under seed k is a fixed
/// mix of (k, s, i), so the sequence for any trial is independent of which
/// worker evaluates it and of how many draws other trials consume.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    /// uniform on [0, 1)
    double next_unit();

    /// uniform on (0, 1]
    double next_unit_open_low();

    /// standard normal; consumes exactly two uniforms
    double next_normal();

private:
    std::uint64_t counter_;
};

/// Worker count for parallel reductions: ZERIS_WORKERS if set, otherwise
/// the hardware concurrency (at least 1).
int default_worker_count();

}  // namespace zeris::mc

#endif
