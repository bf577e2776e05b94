#pragma once

#include <cstdint>

namespace probgen {

// SplitMix64: the documented mixing function behind every randomized routine.
// A 64-bit master seed fully determines all downstream draws; child streams
// for independent tasks are derived by mixing a task index into the master
// seed (see derive_stream), so runs are reproducible and tasks are decoupled.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform draw from [0, n).  Rejection-free modulo bias is irrelevant at
    // our n (generator counts, slot counts), but use the unbiased multiply
    // trick anyway since it costs nothing.
    std::uint64_t below(std::uint64_t n) {
        // Lemire's multiply-shift rejection method.
        std::uint64_t x = next();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        std::uint64_t l = static_cast<std::uint64_t>(m);
        if (l < n) {
            std::uint64_t t = -n % n;
            while (l < t) {
                x = next();
                m = static_cast<__uint128_t>(x) * n;
                l = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool coin() { return next() & 1; }

private:
    std::uint64_t state_;
};

// Child stream for task `index` under `master`: run the mixer once over the
// pair. Streams for distinct indices are independent for all practical
// purposes and fixed for all time by (master, index).
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index) {
    SplitMix64 mix(master ^ (0xa0761d6478bd642fULL + index * 0xe7037ed1a0b428dbULL));
    return mix.next();
}

// Default master seed used wherever the caller does not supply one.
inline constexpr std::uint64_t kDefaultSeed = 0x50524f4247454e31ULL; // "PROBGEN1"

} // namespace probgen
