#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "probgen/error.hpp"
#include "probgen/orbit.hpp"
#include "probgen/perm.hpp"
#include "probgen/rng.hpp"

namespace probgen {

// Stabilizer chain built by randomized Schreier-Sims and then *verified* by
// the deterministic pass (every Schreier generator of every level sifts to the
// identity), so the resulting order is exact, not probably-exact. Base points
// are chosen as the first moved point at each level.
class StabilizerChain {
public:
    StabilizerChain() = default;

    explicit StabilizerChain(const std::vector<Permutation>& generators,
                             std::uint64_t seed = kDefaultSeed) {
        for (const auto& g : generators)
            degree_ = std::max(degree_, g.degree());
        std::unordered_set<Key128, Key128Hash> seen;
        for (const auto& g : generators) {
            if (g.is_identity()) continue;
            if (seen.insert(g.key()).second) add_generator(g);
        }
        randomized_phase(generators, seed);
        verify();
    }

    std::size_t degree() const { return degree_; }

    std::uint64_t order() const {
        std::uint64_t n = 1;
        for (const auto& lv : levels_) {
            std::uint64_t len = lv.orbit.size();
            if (n > UINT64_MAX / len) ceiling_error("group order exceeds 64 bits");
            n *= len;
        }
        return n;
    }

    std::vector<Point> base() const {
        std::vector<Point> b;
        for (const auto& lv : levels_) b.push_back(lv.base);
        return b;
    }

    std::size_t depth() const { return levels_.size(); }

    // Generating set of the i-th stabilizer (this level's insertions plus
    // every deeper level's, all of which fix the earlier bases).
    const std::vector<Permutation>& level_generators(std::size_t i) const {
        return levels_[i].cum;
    }

    const PointOrbit& level_orbit(std::size_t i) const { return levels_[i].orbit; }

    Point level_base(std::size_t i) const { return levels_[i].base; }

    Permutation level_transversal(std::size_t i, Point x) const {
        const Level& lv = levels_[i];
        return lv.orbit.transversal(static_cast<std::size_t>(lv.orbit.position[x]),
                                    lv.cum);
    }

    // Strong generating set: union of all level generator lists.
    std::vector<Permutation> strong_generators() const {
        std::vector<Permutation> out;
        std::unordered_set<Key128, Key128Hash> seen;
        for (const auto& lv : levels_)
            for (const auto& g : lv.gens)
                if (seen.insert(g.key()).second) out.push_back(g);
        return out;
    }

    bool contains(const Permutation& g) const {
        Permutation r = g;
        std::size_t lv = sift(r);
        (void)lv;
        return r.is_identity();
    }

    // Sift g through the chain starting at `from`; returns the level at which
    // the residue dropped out (== depth() when it fixed every base). The
    // residue replaces g.
    std::size_t sift(Permutation& g, std::size_t from = 0) const {
        for (std::size_t i = from; i < levels_.size(); ++i) {
            const Level& lv = levels_[i];
            Point x = g.image(lv.base);
            if (!lv.orbit.contains(x)) return i;
            Permutation u = level_transversal(i, x);
            g = g * u.inverse();
        }
        return levels_.size();
    }

    // All elements, enumerated chain-wise (transversal products). Guarded by
    // the caller-supplied ceiling since this is only sane for small groups.
    std::vector<Permutation> elements(std::uint64_t ceiling = 100000) const {
        if (order() > ceiling) ceiling_error("group too large to enumerate");
        std::vector<Permutation> out{Permutation()};
        for (std::size_t i = levels_.size(); i-- > 0;) {
            std::vector<Permutation> next;
            next.reserve(out.size() * levels_[i].orbit.size());
            for (std::size_t t = 0; t < levels_[i].orbit.size(); ++t) {
                Permutation u = levels_[i].orbit.transversal(t, levels_[i].cum);
                for (const auto& tail : out) next.push_back(tail * u);
            }
            out = std::move(next);
        }
        return out;
    }

private:
    struct Level {
        Point base = 0;
        std::vector<Permutation> gens; // generators first inserted here
        std::vector<Permutation> cum;  // gens of this level and every deeper one
        PointOrbit orbit;              // orbit of base under cum
    };

    // A generator inserted at level `at` fixes the bases of levels 0..at-1,
    // so it belongs to the stabilizer generating set of every level <= at;
    // all their orbits must be recomputed, not just level at's. (Orbits of a
    // level's own insertions alone can be proper suborbits, which would make
    // the verification pass vacuous and the order wrong.)
    void refresh_from(std::size_t at) {
        for (std::size_t i = at + 1; i-- > 0;) {
            Level& lv = levels_[i];
            lv.cum.clear();
            for (std::size_t j = i; j < levels_.size(); ++j)
                lv.cum.insert(lv.cum.end(), levels_[j].gens.begin(),
                              levels_[j].gens.end());
            lv.orbit = orbit_of_point(lv.cum, lv.base, degree_);
        }
    }

    // Sift and insert the residue at its drop level (or a fresh level).
    // Returns false if g was already in the span.
    bool add_generator(Permutation g) {
        degree_ = std::max(degree_, g.degree());
        std::size_t at = sift(g);
        if (g.is_identity()) return false;
        if (at == levels_.size()) {
            Level lv;
            lv.base = g.moved_points().front();
            levels_.push_back(std::move(lv));
        }
        levels_[at].gens.push_back(std::move(g));
        refresh_from(at);
        return true;
    }

    // Product-replacement sampling of likely-missing elements: cheap way to
    // grow the chain close to complete before the deterministic closure pass.
    void randomized_phase(const std::vector<Permutation>& generators,
                          std::uint64_t seed) {
        std::vector<Permutation> nontrivial;
        for (const auto& g : generators)
            if (!g.is_identity()) nontrivial.push_back(g);
        if (nontrivial.empty()) return;
        SplitMix64 rng(derive_stream(seed, 0x5353)); // chain-internal stream
        std::vector<Permutation> slots;
        for (std::size_t i = 0; i < 10; ++i)
            slots.push_back(nontrivial[i % nontrivial.size()]);
        Permutation acc;
        auto step = [&] {
            std::size_t i = rng.below(10);
            std::size_t j = rng.below(9);
            if (j >= i) ++j;
            slots[i] = slots[i] * slots[j];
            acc = acc * slots[i];
        };
        for (int k = 0; k < 60; ++k) step();
        int consecutive = 0;
        while (consecutive < 16) {
            step();
            Permutation r = acc;
            sift(r);
            if (r.is_identity()) {
                ++consecutive;
            } else {
                add_generator(r);
                consecutive = 0;
            }
        }
    }

    // Deterministic closure: repeat until a pass over every level finds all
    // Schreier generators sifting to the identity below their level. Schreier
    // generators are taken over the full cumulative generator set of the
    // level, so a clean pass certifies Stab(base_i) = next level exactly and
    // the product of fundamental orbit lengths is exactly the group order.
    void verify() {
        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (std::size_t i = levels_.size(); i-- > 0;) {
                Level& lv = levels_[i];
                std::vector<Permutation> trans(lv.orbit.size());
                for (std::size_t t = 0; t < lv.orbit.size(); ++t)
                    trans[t] = lv.orbit.transversal(t, lv.cum);
                for (std::size_t t = 0; t < lv.orbit.size() && !dirty; ++t) {
                    for (std::size_t s = 0; s < lv.cum.size() && !dirty; ++s) {
                        Point y = lv.cum[s].image(lv.orbit.elements[t]);
                        std::size_t j = static_cast<std::size_t>(lv.orbit.position[y]);
                        Permutation sg = trans[t] * lv.cum[s] * trans[j].inverse();
                        std::size_t at = sift(sg, i + 1);
                        (void)at;
                        if (!sg.is_identity()) {
                            add_generator(sg);
                            dirty = true;
                        }
                    }
                }
                if (dirty) break; // restart from the deepest level again
            }
        }
    }

    std::size_t degree_ = 0;
    std::vector<Level> levels_;
};

} // namespace probgen
