#pragma once

#include <cstdint>

namespace nrcdt {

// Counter-based generator: the n-th output is a pure function of (key, n),
// so parallel consumers can jump anywhere in the stream and every platform
// produces identical bits. The mixer is the splitmix64 finalizer applied to
// key + counter * golden-ratio increment.
struct CounterRng {
    std::uint64_t key = 0;
    std::uint64_t counter = 0;

    explicit CounterRng(std::uint64_t k = 0) : key(k) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() {
        return mix(key + 0x9e3779b97f4a7c15ull * ++counter);
    }

    // Uniform in [0, 1), 53 mantissa bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + uniform() * (hi - lo);
    }

    // Inclusive integer range.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (hi <= lo) return lo;
        auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }
};

// Order-independent per-sample seed so dataset generation can run in any
// schedule and still be bit-reproducible.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = CounterRng::mix(master ^ 0x6a09e667f3bcc909ull);
    h = CounterRng::mix(h ^ a);
    h = CounterRng::mix(h ^ b);
    return h;
}

}  // namespace nrcdt
