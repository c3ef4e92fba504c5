#include "zeris/rng.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace zeris::mc {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Stafford "mix13" finalizer; full-period bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) {
    counter_ = mix64(seed + kGolden) ^ mix64(stream * 0xd6e8feb86659fd93ULL + kGolden);
}

std::uint64_t CounterRng::next_u64() {
    counter_ += kGolden;
    return mix64(counter_);
}

double CounterRng::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_unit_open_low() {
    return 1.0 - next_unit();
}

double CounterRng::next_normal() {
    const double u1 = next_unit_open_low();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
}

int default_worker_count() {
    if (const char* env = std::getenv("ZERIS_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace zeris::mc
