#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "probgen/error.hpp"
#include "probgen/orbit.hpp"
#include "probgen/perm.hpp"
#include "probgen/rng.hpp"
#include "probgen/stabchain.hpp"

namespace probgen {

namespace detail {

// Product-replacement ("rattle") walker: ten accumulator slots scrambled
// sixty times at start, one slot multiplication feeding the accumulator per
// draw. Entirely determined by (generator list, seed).
class ProductReplacer {
public:
    ProductReplacer(const std::vector<Permutation>& gens, std::uint64_t seed)
        : rng_(seed) {
        for (const auto& g : gens)
            if (!g.is_identity()) nontrivial_.push_back(g);
        if (nontrivial_.empty()) return;
        for (std::size_t i = 0; i < 10; ++i)
            slots_.push_back(nontrivial_[i % nontrivial_.size()]);
        for (int k = 0; k < 60; ++k) step();
    }

    Permutation draw() {
        if (nontrivial_.empty()) return Permutation();
        step();
        return acc_;
    }

private:
    void step() {
        std::size_t i = rng_.below(10);
        std::size_t j = rng_.below(9);
        if (j >= i) ++j;
        slots_[i] = slots_[i] * slots_[j];
        acc_ = acc_ * slots_[i];
    }

    SplitMix64 rng_;
    std::vector<Permutation> nontrivial_;
    std::vector<Permutation> slots_;
    Permutation acc_;
};

struct GroupData {
    std::vector<Permutation> gens;
    std::size_t degree = 0;
    std::uint64_t seed = kDefaultSeed;

    // Caches freeze on first computation; populated under the mutex so
    // concurrent readers of one group are safe.
    mutable std::mutex mu;
    mutable std::optional<StabilizerChain> chain;
    mutable std::shared_ptr<const void> classes; // vector<ConjugacyClass>, typed in classes.hpp
    mutable std::unique_ptr<ProductReplacer> walker;
};

} // namespace detail

// Handle to a finitely generated permutation group. Copies share the
// underlying data and caches; all queries are logically const.
class PermGroup {
public:
    PermGroup() : data_(std::make_shared<detail::GroupData>()) {}

    explicit PermGroup(std::vector<Permutation> generators,
                       std::uint64_t seed = kDefaultSeed)
        : data_(std::make_shared<detail::GroupData>()) {
        data_->gens = std::move(generators);
        data_->seed = seed;
        for (const auto& g : data_->gens)
            data_->degree = std::max(data_->degree, g.degree());
    }

    static PermGroup from_strings(const std::vector<std::string>& cycle_strings,
                                  std::size_t expected_degree = 0) {
        std::vector<Permutation> gens;
        for (const auto& s : cycle_strings)
            gens.push_back(parse_permutation(s, expected_degree));
        return PermGroup(std::move(gens));
    }

    const std::vector<Permutation>& generators() const { return data_->gens; }

    // One past the largest moved point of any generator.
    std::size_t degree() const { return data_->degree; }

    bool is_trivial() const {
        for (const auto& g : data_->gens)
            if (!g.is_identity()) return false;
        return true;
    }

    const StabilizerChain& chain() const {
        std::lock_guard<std::mutex> lock(data_->mu);
        if (!data_->chain)
            data_->chain.emplace(data_->gens, data_->seed);
        return *data_->chain;
    }

    std::uint64_t order() const { return chain().order(); }

    bool contains(const Permutation& g) const { return chain().contains(g); }

    bool is_subgroup(const PermGroup& sub) const {
        for (const auto& g : sub.generators())
            if (!contains(g)) return false;
        return true;
    }

    Permutation random_element() const {
        std::lock_guard<std::mutex> lock(data_->mu);
        if (!data_->walker)
            data_->walker = std::make_unique<detail::ProductReplacer>(
                data_->gens, derive_stream(data_->seed, 0x5052));
        return data_->walker->draw();
    }

    // Independent deterministic stream for a named task; does not disturb the
    // group's own walker, so interleaving tasks cannot shift each other.
    detail::ProductReplacer task_walker(std::uint64_t task_index) const {
        return detail::ProductReplacer(data_->gens,
                                       derive_stream(data_->seed, task_index));
    }

    std::vector<Permutation> elements(std::uint64_t ceiling = 100000) const {
        return chain().elements(ceiling);
    }

    PointOrbit orbit(Point seed) const {
        return orbit_of_point(data_->gens, seed, data_->degree);
    }

    SetOrbit orbit_sets(const std::vector<Point>& seed,
                        std::size_t ceiling = 200000) const {
        return orbit_of_set(data_->gens, seed, ceiling);
    }

    // Orbits on {0..degree-1}, each sorted, listed by least element.
    std::vector<std::vector<Point>> orbits() const {
        std::vector<std::vector<Point>> out;
        std::vector<bool> seen(data_->degree, false);
        for (Point x = 0; x < data_->degree; ++x) {
            if (seen[x]) continue;
            PointOrbit orb = orbit(x);
            std::vector<Point> sorted = orb.elements;
            std::sort(sorted.begin(), sorted.end());
            for (Point y : sorted) seen[y] = true;
            out.push_back(std::move(sorted));
        }
        return out;
    }

    std::vector<Point> moved_points() const {
        std::vector<bool> moved(data_->degree, false);
        for (const auto& g : data_->gens)
            for (Point x = 0; x < g.degree(); ++x)
                if (g.image(x) != x) moved[x] = true;
        std::vector<Point> out;
        for (Point x = 0; x < data_->degree; ++x)
            if (moved[x]) out.push_back(x);
        return out;
    }

    bool transitive_on(const std::vector<Point>& points) const {
        if (points.empty()) return true;
        PointOrbit orb = orbit(points.front());
        for (Point x : points)
            if (!orb.contains(x)) return false;
        return true;
    }

    PermGroup point_stabilizer(Point x) const {
        PointOrbit orb = orbit(x);
        return PermGroup(schreier_generators(data_->gens, orb), data_->seed);
    }

    PermGroup set_stabilizer(const std::vector<Point>& set,
                             std::size_t ceiling = 200000) const {
        SetOrbit orb = orbit_of_set(data_->gens, set, ceiling);
        return PermGroup(schreier_generators(data_->gens, orb), data_->seed);
    }

    std::uint64_t group_seed() const { return data_->seed; }

    // classes.hpp uses these to fill / read the class cache (type-erased so
    // this header stays independent of the class layer).
    std::shared_ptr<const void>& class_cache() const { return data_->classes; }
    std::mutex& cache_mutex() const { return data_->mu; }

private:
    std::shared_ptr<detail::GroupData> data_;
};

// ---- canonical coset representatives -------------------------------------

// Canonical representative of the right coset M*g: descend M's stabilizer
// chain, at each level replacing the representative by u*w for the orbit
// point minimizing the image of the level's base; the result is the same for
// every member of the coset because the final stabilizer is trivial.
inline Permutation canonical_coset_rep(const PermGroup& M, const Permutation& g) {
    const StabilizerChain& ch = M.chain();
    Permutation w = g;
    for (std::size_t i = 0; i < ch.depth(); ++i) {
        const PointOrbit& orb = ch.level_orbit(i);
        Point best_delta = orb.elements[0];
        Point best_val = w.image(best_delta);
        for (std::size_t t = 1; t < orb.size(); ++t) {
            Point v = w.image(orb.elements[t]);
            if (v < best_val) {
                best_val = v;
                best_delta = orb.elements[t];
            }
        }
        if (best_delta != ch.level_base(i))
            w = ch.level_transversal(i, best_delta) * w;
    }
    return w;
}

// Explicit-enumeration canonicalizer (lexicographically least coset element);
// only for small M, and chiefly a cross-check against the chain route.
inline Permutation canonical_coset_rep_enumerated(const PermGroup& M,
                                                  const Permutation& g,
                                                  std::uint64_t ceiling = 5000) {
    if (M.order() > ceiling)
        ceiling_error("coset enumeration fallback limited to small subgroups");
    Permutation best;
    bool first = true;
    for (const auto& m : M.elements(ceiling)) {
        Permutation cand = m * g;
        if (first || cand < best) {
            best = cand;
            first = false;
        }
    }
    return best;
}

// ---- coset action ---------------------------------------------------------

// Faithfulness is not assumed; the image is whatever the action gives. Point
// 0 is the coset M*1, and points are numbered in breadth-first discovery
// order over the generators.
class CosetSpace {
public:
    CosetSpace(const PermGroup& G, const PermGroup& M,
               std::size_t ceiling = 200000)
        : G_(G), M_(M) {
        for (const auto& m : M.generators())
            if (!G.contains(m))
                user_error("coset action: subgroup generator outside the group");
        Permutation root = canonical_coset_rep(M_, Permutation());
        reps_.push_back(root);
        index_.emplace(root.key(), 0);
        std::vector<std::vector<Point>> images(G.generators().size());
        for (std::size_t i = 0; i < reps_.size(); ++i) {
            for (std::size_t s = 0; s < G.generators().size(); ++s) {
                Permutation next = canonical_coset_rep(M_, reps_[i] * G.generators()[s]);
                Key128 k = next.key();
                auto it = index_.find(k);
                std::uint32_t j;
                if (it == index_.end()) {
                    j = static_cast<std::uint32_t>(reps_.size());
                    index_.emplace(k, j);
                    reps_.push_back(std::move(next));
                    if (reps_.size() > ceiling)
                        ceiling_error("coset space exceeds index ceiling");
                } else {
                    j = it->second;
                }
                images[s].push_back(j);
            }
        }
        image_gens_.reserve(images.size());
        for (auto& img : images) image_gens_.push_back(Permutation(std::move(img)));
    }

    std::size_t size() const { return reps_.size(); }

    const std::vector<Permutation>& point_representatives() const { return reps_; }

    // Image generators, aligned with G's generator list.
    const std::vector<Permutation>& image_generators() const { return image_gens_; }

    PermGroup image_group() const {
        return PermGroup(image_gens_, G_.group_seed());
    }

    // Where an arbitrary group element sends each coset; degree() entries.
    Permutation image_of(const Permutation& g) const {
        std::vector<Point> img(reps_.size());
        for (std::size_t i = 0; i < reps_.size(); ++i) {
            Permutation moved = canonical_coset_rep(M_, reps_[i] * g);
            auto it = index_.find(moved.key());
            if (it == index_.end())
                internal_error("coset action: element leaves the coset space");
            img[i] = it->second;
        }
        return Permutation(std::move(img));
    }

    // Fixed cosets of g: the permutation-character workhorse.
    std::uint64_t fixed_count(const Permutation& g) const {
        std::uint64_t n = 0;
        for (std::size_t i = 0; i < reps_.size(); ++i) {
            Permutation moved = canonical_coset_rep(M_, reps_[i] * g);
            auto it = index_.find(moved.key());
            if (it == index_.end())
                internal_error("coset action: element leaves the coset space");
            if (it->second == i) ++n;
        }
        return n;
    }

    std::uint32_t point_of(const Permutation& coset_member) const {
        Permutation c = canonical_coset_rep(M_, coset_member);
        auto it = index_.find(c.key());
        if (it == index_.end())
            internal_error("coset lookup outside the space");
        return it->second;
    }

private:
    PermGroup G_;
    PermGroup M_;
    std::vector<Permutation> reps_;
    std::unordered_map<Key128, std::uint32_t, Key128Hash> index_;
    std::vector<Permutation> image_gens_;
};

// ---- derived subgroup and diagonal products -------------------------------

inline PermGroup derived_subgroup(const PermGroup& G) {
    std::vector<Permutation> gens;
    std::unordered_set<Key128, Key128Hash> seen;
    auto push = [&](const Permutation& p) {
        if (p.is_identity()) return false;
        if (!seen.insert(p.key()).second) return false;
        gens.push_back(p);
        return true;
    };
    for (const auto& a : G.generators())
        for (const auto& b : G.generators())
            push(a.inverse() * b.inverse() * a * b);
    PermGroup H(gens, G.group_seed());
    // Normal closure under G: conjugate current generators by G's generators
    // until nothing new appears; batch additions per pass.
    for (;;) {
        std::vector<Permutation> missing;
        for (const auto& h : gens)
            for (const auto& g : G.generators()) {
                Permutation c = h.conjugated_by(g);
                if (!H.contains(c) && !c.is_identity()) missing.push_back(c);
            }
        if (missing.empty()) break;
        for (auto& c : missing) push(c);
        H = PermGroup(gens, G.group_seed());
    }
    return H;
}

// Generator-aligned diagonal: factor generator lists must have equal length;
// block k of the product acts as factor k. Misalignment surfaces as an order
// mismatch, which is rejected.
inline PermGroup diagonal_product(const std::vector<PermGroup>& factors) {
    if (factors.empty()) user_error("diagonal product of no groups");
    std::size_t n_gens = factors[0].generators().size();
    for (const auto& f : factors)
        if (f.generators().size() != n_gens)
            user_error("diagonal product needs aligned generator lists");
    std::vector<Permutation> gens;
    for (std::size_t k = 0; k < n_gens; ++k) {
        std::vector<Point> img;
        std::size_t offset = 0;
        for (const auto& f : factors) {
            const Permutation& g = f.generators()[k];
            for (std::size_t x = 0; x < f.degree(); ++x)
                img.push_back(static_cast<Point>(g.image(static_cast<Point>(x)) + offset));
            offset += f.degree();
        }
        gens.push_back(Permutation(std::move(img)));
    }
    PermGroup D(gens, factors[0].group_seed());
    std::uint64_t expect = factors[0].order();
    for (const auto& f : factors)
        if (f.order() != expect)
            user_error("diagonal product factors have different orders");
    if (D.order() != expect)
        user_error("diagonal product generator lists are not aligned");
    return D;
}

} // namespace probgen
