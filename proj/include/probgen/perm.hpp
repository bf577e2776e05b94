#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "probgen/error.hpp"

namespace probgen {

using Point = std::uint32_t;

// 128-bit content key; used wherever elements or subgroups are stored in hash
// sets. Two independently seeded 64-bit mixes of the same data, so accidental
// collision is out of reach at our scales, and every consumer additionally
// cross-checks totals (class sizes summing to |G|, orbit-stabilizer products).
struct Key128 {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    bool operator==(const Key128& o) const { return lo == o.lo && hi == o.hi; }
    bool operator<(const Key128& o) const {
        return hi != o.hi ? hi < o.hi : lo < o.lo;
    }
};

struct Key128Hash {
    std::size_t operator()(const Key128& k) const {
        return static_cast<std::size_t>(k.lo ^ (k.hi * 0x9e3779b97f4a7c15ULL));
    }
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Key128 hash_words(const std::uint32_t* data, std::size_t n) {
    std::uint64_t a = 0x2545f4914f6cdd1dULL;
    std::uint64_t b = 0x9e3779b97f4a7c15ULL;
    for (std::size_t i = 0; i < n; ++i) {
        a = mix64(a ^ (data[i] + 0x633d5e9aULL + (a << 6)));
        b = mix64(b + data[i] * 0xff51afd7ed558ccdULL + i);
    }
    return Key128{a, b};
}

} // namespace detail

// A permutation of {1, 2, ...} with finite support, stored as a 0-based image
// array trimmed of trailing fixed points, so equal permutations of nominally
// different degrees compare equal. All mutating arithmetic pads the shorter
// operand with fixed points.
class Permutation {
public:
    Permutation() = default;

    explicit Permutation(std::vector<Point> images) : img_(std::move(images)) {
        validate();
        trim();
    }

    static Permutation identity() { return Permutation(); }

    // Degree after trimming: one past the largest moved point, 0 for identity.
    std::size_t degree() const { return img_.size(); }

    bool is_identity() const { return img_.empty(); }

    Point image(Point x) const { return x < img_.size() ? img_[x] : x; }

    const std::vector<Point>& images() const { return img_; }

    // Right-action convention throughout: (a*b) means "apply a, then b", so
    // point images satisfy (a*b)(x) = b(a(x)) and x^(ab) = (x^a)^b.
    Permutation operator*(const Permutation& o) const {
        std::size_t n = std::max(img_.size(), o.img_.size());
        std::vector<Point> r(n);
        for (Point x = 0; x < n; ++x) r[x] = o.image(image(x));
        return Permutation(std::move(r));
    }

    Permutation inverse() const {
        std::vector<Point> r(img_.size());
        for (Point x = 0; x < img_.size(); ++x) r[img_[x]] = x;
        return Permutation(std::move(r));
    }

    // this^h = h^-1 * this * h.
    Permutation conjugated_by(const Permutation& h) const {
        std::size_t n = std::max(img_.size(), h.img_.size());
        std::vector<Point> r(n);
        for (Point x = 0; x < n; ++x) r[h.image(x)] = h.image(image(x));
        return Permutation(std::move(r));
    }

    Permutation power(long long k) const {
        if (k < 0) return inverse().power(-k);
        Permutation base = *this, acc;
        unsigned long long e = static_cast<unsigned long long>(k);
        while (e) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    std::uint64_t order() const {
        std::vector<bool> seen(img_.size(), false);
        std::uint64_t ord = 1;
        for (Point s = 0; s < img_.size(); ++s) {
            if (seen[s]) continue;
            std::uint64_t len = 0;
            for (Point x = s; !seen[x]; x = img_[x]) {
                seen[x] = true;
                ++len;
            }
            std::uint64_t g = std::gcd(ord, len);
            std::uint64_t next = ord / g;
            if (len != 0 && next > UINT64_MAX / len)
                ceiling_error("element order exceeds 64 bits");
            ord = next * len;
        }
        return ord;
    }

    std::vector<Point> moved_points() const {
        std::vector<Point> m;
        for (Point x = 0; x < img_.size(); ++x)
            if (img_[x] != x) m.push_back(x);
        return m;
    }

    std::size_t n_moved() const {
        std::size_t c = 0;
        for (Point x = 0; x < img_.size(); ++x)
            if (img_[x] != x) ++c;
        return c;
    }

    // Multiset of cycle lengths >= 2, sorted ascending. Cheap conjugacy
    // invariant used as a prefilter before real conjugacy tests.
    std::vector<std::uint32_t> cycle_type() const {
        std::vector<bool> seen(img_.size(), false);
        std::vector<std::uint32_t> type;
        for (Point s = 0; s < img_.size(); ++s) {
            if (seen[s] || img_[s] == s) continue;
            std::uint32_t len = 0;
            for (Point x = s; !seen[x]; x = img_[x]) {
                seen[x] = true;
                ++len;
            }
            type.push_back(len);
        }
        std::sort(type.begin(), type.end());
        return type;
    }

    bool operator==(const Permutation& o) const { return img_ == o.img_; }
    bool operator!=(const Permutation& o) const { return img_ != o.img_; }

    // Lexicographic order on padded image arrays; the tie-break everywhere a
    // canonical representative is chosen.
    bool operator<(const Permutation& o) const {
        std::size_t n = std::max(img_.size(), o.img_.size());
        for (Point x = 0; x < n; ++x) {
            Point a = image(x), b = o.image(x);
            if (a != b) return a < b;
        }
        return false;
    }

    Key128 key() const { return detail::hash_words(img_.data(), img_.size()); }

    // Cycle notation with 1-based points: cycles ordered by least moved point,
    // each written from its least point; identity renders as "()".
    std::string cycle_string() const {
        if (is_identity()) return "()";
        std::string out;
        std::vector<bool> seen(img_.size(), false);
        for (Point s = 0; s < img_.size(); ++s) {
            if (seen[s] || img_[s] == s) continue;
            out += '(';
            bool first = true;
            for (Point x = s; !seen[x]; x = img_[x]) {
                seen[x] = true;
                if (!first) out += ',';
                out += std::to_string(x + 1);
                first = false;
            }
            out += ')';
        }
        return out;
    }

private:
    void validate() const {
        std::vector<bool> hit(img_.size(), false);
        for (Point v : img_) {
            if (v >= img_.size() || hit[v])
                user_error("image array is not a permutation");
            hit[v] = true;
        }
    }

    void trim() {
        while (!img_.empty() && img_.back() == img_.size() - 1) img_.pop_back();
    }

    std::vector<Point> img_;
};

// Parse cycle notation like "(1,2,3)(4,5)" (whitespace tolerated, "()" is the
// identity). Points are 1-based. If expected_degree is nonzero, any point
// beyond it is an error; repeated points are always an error.
inline Permutation parse_permutation(const std::string& text,
                                     std::size_t expected_degree = 0) {
    std::vector<std::vector<Point>> cycles;
    std::size_t i = 0, n = text.size();
    auto skip_ws = [&] {
        while (i < n && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n')) ++i;
    };
    skip_ws();
    if (i == n) user_error("empty permutation text");
    std::size_t max_point = 0;
    std::vector<bool> used;
    while (i < n) {
        skip_ws();
        if (i == n) break;
        if (text[i] != '(') user_error("expected '(' in permutation: '" + text + "'");
        ++i;
        std::vector<Point> cyc;
        skip_ws();
        while (i < n && text[i] != ')') {
            std::size_t j = i;
            while (j < n && text[j] >= '0' && text[j] <= '9') ++j;
            if (j == i) user_error("expected point number in permutation: '" + text + "'");
            unsigned long long v = std::stoull(text.substr(i, j - i));
            if (v == 0) user_error("points are 1-based; 0 is not a point");
            if (expected_degree && v > expected_degree)
                user_error("point " + std::to_string(v) + " exceeds degree " +
                           std::to_string(expected_degree));
            if (v > 200000) ceiling_error("point exceeds the supported degree ceiling");
            Point p = static_cast<Point>(v - 1);
            if (p >= used.size()) used.resize(p + 1, false);
            if (used[p])
                user_error("point " + std::to_string(v) + " repeated in permutation");
            used[p] = true;
            cyc.push_back(p);
            max_point = std::max<std::size_t>(max_point, p + 1);
            i = j;
            skip_ws();
            if (i < n && text[i] == ',') {
                ++i;
                skip_ws();
            }
        }
        if (i == n) user_error("unterminated cycle in permutation: '" + text + "'");
        ++i; // ')'
        if (cyc.size() == 1)
            user_error("length-1 cycle in permutation: '" + text + "'");
        if (!cyc.empty()) cycles.push_back(std::move(cyc));
        skip_ws();
    }
    std::vector<Point> img(std::max<std::size_t>(max_point, expected_degree));
    std::iota(img.begin(), img.end(), 0);
    for (const auto& cyc : cycles)
        for (std::size_t k = 0; k < cyc.size(); ++k)
            img[cyc[k]] = cyc[(k + 1) % cyc.size()];
    return Permutation(std::move(img));
}

} // namespace probgen
