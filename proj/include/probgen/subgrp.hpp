#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <probgen/classes.hpp>

namespace probgen {

namespace detail {

// Content key of the subgroup S^u given S's element list: hash of the sorted
// member keys, so conjugate subgroups collide exactly (collisions are caught
// by the orbit-stabilizer cross-check in normalizer()).
inline Key128 conjugate_subgroup_key(const std::vector<Permutation>& elems,
                                     const Permutation& u) {
    std::vector<Key128> keys;
    keys.reserve(elems.size());
    for (const Permutation& e : elems) keys.push_back(e.conjugated_by(u).key());
    std::sort(keys.begin(), keys.end(), key_less);
    std::vector<std::uint32_t> words;
    words.reserve(keys.size() * 4);
    for (const Key128& k : keys) {
        words.push_back(static_cast<std::uint32_t>(k.lo));
        words.push_back(static_cast<std::uint32_t>(k.lo >> 32));
        words.push_back(static_cast<std::uint32_t>(k.hi));
        words.push_back(static_cast<std::uint32_t>(k.hi >> 32));
    }
    return hash_words(words.data(), words.size());
}

} // namespace detail

// N_G(S) as the stabilizer of S's content key under conjugation: breadth-first
// orbit over subgroup conjugates, normalizer generators from the Schreier
// generators of that orbit.
inline PermGroup normalizer(const PermGroup& G, const PermGroup& S,
                            std::uint64_t enumeration_ceiling = 100000,
                            std::size_t orbit_ceiling = 200000) {
    for (const Permutation& s : S.generators())
        if (!G.contains(s))
            user_error("normalizer: subgroup generator outside the group");
    if (S.order() > enumeration_ceiling)
        ceiling_error("normalizer: subgroup exceeds the enumeration ceiling");
    const std::vector<Permutation> elems = S.elements(enumeration_ceiling);
    const std::vector<Permutation>& gens = G.generators();

    std::vector<Permutation> trans{Permutation()};
    std::unordered_map<Key128, std::uint32_t, Key128Hash> index;
    index.emplace(detail::conjugate_subgroup_key(elems, trans[0]), 0);
    std::vector<std::vector<std::uint32_t>> edge;
    for (std::size_t i = 0; i < trans.size(); ++i) {
        edge.emplace_back(gens.size());
        for (std::size_t s = 0; s < gens.size(); ++s) {
            Permutation u = trans[i] * gens[s];
            Key128 k = detail::conjugate_subgroup_key(elems, u);
            auto it = index.find(k);
            std::uint32_t j;
            if (it == index.end()) {
                j = static_cast<std::uint32_t>(trans.size());
                if (trans.size() >= orbit_ceiling)
                    ceiling_error("normalizer: subgroup-conjugate orbit ceiling");
                index.emplace(k, j);
                trans.push_back(std::move(u));
            } else {
                j = it->second;
            }
            edge[i][s] = j;
        }
    }

    std::vector<Permutation> ngens;
    std::unordered_set<Key128, Key128Hash> dedup;
    for (std::size_t i = 0; i < trans.size(); ++i)
        for (std::size_t s = 0; s < gens.size(); ++s) {
            Permutation sg = trans[i] * gens[s] * trans[edge[i][s]].inverse();
            if (sg.n_moved() == 0) continue;
            if (dedup.insert(sg.key()).second) ngens.push_back(std::move(sg));
        }
    PermGroup N(ngens, G.group_seed());

    check_internal(N.order() * trans.size() == G.order(),
                   "normalizer orbit-stabilizer mismatch");
    for (const Permutation& g : N.generators())
        for (const Permutation& s : S.generators())
            check_internal(S.contains(s.conjugated_by(g)),
                           "normalizer generator fails to normalize");
    return N;
}

// Sylow p-subgroup by ascending chain: start from the p-part of a random
// element, then repeatedly adjoin a p-element that normalizes the current
// subgroup without lying in it.  Random p-parts (and random conjugates of
// them) are tried first; if they stall, a p-element of the exact normalizer
// works, and one always exists because p-subgroups are subnormal in any Sylow
// overgroup.
inline PermGroup sylow_subgroup(const PermGroup& G, std::uint64_t p) {
    if (!is_prime_u64(p)) user_error("sylow subgroup: the parameter must be prime");
    const std::uint64_t target = p_part(G.order(), p);
    if (target == 1) return PermGroup({}, G.group_seed());

    detail::ProductReplacer walker = G.task_walker(0x53594c0000ull + p);
    auto p_part_of = [p](const Permutation& x) {
        std::uint64_t q = x.order();
        return x.power(static_cast<long long>(q / p_part(q, p)));
    };

    std::vector<Permutation> sgens;
    PermGroup S(sgens, G.group_seed());
    std::uint64_t ord = 1;
    auto try_extend = [&](const Permutation& y) {
        if (y.n_moved() == 0 || S.contains(y)) return false;
        for (const Permutation& sg : sgens)
            if (!S.contains(sg.conjugated_by(y))) return false;
        sgens.push_back(y);
        S = PermGroup(sgens, G.group_seed());
        ord = S.order();
        return true;
    };

    while (ord < target) {
        bool grew = false;
        for (int t = 0; t < 400 && !grew; ++t) {
            Permutation y = p_part_of(walker.draw());
            grew = try_extend(y) || try_extend(y.conjugated_by(walker.draw()));
        }
        if (!grew) {
            PermGroup N = normalizer(G, S);
            detail::ProductReplacer nwalker = N.task_walker(0x53594c01);
            for (int t = 0; t < 200000 && !grew; ++t)
                grew = try_extend(p_part_of(nwalker.draw()));
            check_internal(grew, "sylow ascent stalled below the p-part");
        }
        check_internal(ord <= target && target % ord == 0,
                       "sylow ascent left the p-subgroup lattice");
    }
    return S;
}

// A \ G / B with exact sizes: orbits of B on the right-coset space of A,
// |A·r·B| = |A| × orbit length.  Listed by the least coset index of the
// orbit, so the order is deterministic.
struct DoubleCosetRep {
    Permutation representative;
    std::uint64_t size = 0;
};

inline std::vector<DoubleCosetRep> double_coset_reps_and_sizes(
    const PermGroup& G, const PermGroup& A, const PermGroup& B,
    std::size_t coset_ceiling = 200000) {
    for (const Permutation& b : B.generators())
        if (!G.contains(b))
            user_error("double cosets: right-factor generator outside the group");
    CosetSpace cosets(G, A, coset_ceiling);
    std::vector<Permutation> bimg;
    bimg.reserve(B.generators().size());
    for (const Permutation& b : B.generators()) bimg.push_back(cosets.image_of(b));

    const std::uint64_t a_order = A.order();
    std::vector<DoubleCosetRep> out;
    std::vector<bool> seen(cosets.size(), false);
    for (std::uint32_t x = 0; x < cosets.size(); ++x) {
        if (seen[x]) continue;
        PointOrbit orb = orbit_of_point(bimg, x, static_cast<Point>(cosets.size()));
        for (Point y : orb.elements) seen[y] = true;
        out.push_back({cosets.point_representatives()[x], a_order * orb.size()});
    }
    std::uint64_t total = 0;
    for (const DoubleCosetRep& dc : out) total += dc.size;
    check_internal(total == G.order(), "double cosets fail to partition the group");
    return out;
}

// Representatives of the G-classes of elements of prime order p (p running
// over `primes`) that avoid the normal subgroup N.  Candidates come from a
// Sylow p-subgroup — every class of order-p elements meets it — and are then
// fused up to conjugacy.
inline std::vector<ConjugacyClass> classes_of_prime_order(
    const PermGroup& G, std::vector<std::uint64_t> primes, const PermGroup& N,
    std::uint64_t ceiling = 5000000) {
    for (const Permutation& ng : N.generators())
        if (!G.contains(ng))
            user_error("prime-order classes: N is not a subgroup");
    for (const Permutation& g : G.generators())
        for (const Permutation& ng : N.generators())
            if (!N.contains(ng.conjugated_by(g)))
                user_error("prime-order classes: N is not normal");

    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());

    const auto& table = conjugacy_classes(G, ceiling);
    std::set<std::size_t> found;
    for (std::uint64_t p : primes) {
        if (!is_prime_u64(p))
            user_error("prime-order classes: composite entry in the prime list");
        if (G.order() % p != 0) continue;
        PermGroup syl = sylow_subgroup(G, p);
        for (const Permutation& x : syl.elements()) {
            if (x.order() != p || N.contains(x)) continue;
            auto idx = find_class_index(table, x);
            check_internal(idx.has_value(), "sylow element escapes the class table");
            found.insert(*idx);
        }
    }
    std::vector<ConjugacyClass> out;
    for (std::size_t i : found) out.push_back(table[i]);
    return out;
}

} // namespace probgen
