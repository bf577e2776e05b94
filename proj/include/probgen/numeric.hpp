#pragma once

#include <cstdint>
#include <vector>

namespace probgen {

// Trial division is all we need: the numbers are group orders and element
// orders, nowhere near the sizes where this becomes a bottleneck.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

// Largest power of p dividing n.
inline std::uint64_t p_part(std::uint64_t n, std::uint64_t p) {
    std::uint64_t q = 1;
    while (n % p == 0) {
        q *= p;
        n /= p;
    }
    return q;
}

inline std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b) {
        std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace probgen
