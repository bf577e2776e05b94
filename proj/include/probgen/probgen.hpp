#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <probgen/rational.hpp>
#include <probgen/subgrp.hpp>

namespace probgen {

namespace detail {

inline void require_transitive(const PermGroup& G, const char* op) {
    if (!G.transitive_on(G.moved_points()))
        user_error(std::string(op) + ": the group is not transitive");
}

// Centralizer of x under conjugation by H; x need not lie in H, which is what
// the pointwise-centralizer chains below need.
inline PermGroup centralizer_in(const PermGroup& H, const Permutation& x) {
    ClassExpansion ex = expand_conjugation_orbit(H.generators(), x, H.order());
    check_internal(H.order() % ex.elems.size() == 0,
                   "conjugation orbit size does not divide the acting order");
    return centralizer_from_expansion(H, ex, H.order() / ex.elems.size(),
                                      H.contains(x));
}

} // namespace detail

// ---- permutation characters and the sigma machinery -----------------------

// Fixed-point counts of the class representatives on the right cosets of M,
// aligned with G's canonical class list.
struct PermChar {
    std::string subgroup_label;
    std::uint64_t degree = 1; // [G:M]
    std::vector<std::uint64_t> values;
};

inline PermChar permutation_character(const PermGroup& G, const PermGroup& M,
                                      std::string subgroup_label = "",
                                      std::size_t coset_ceiling = 200000) {
    const auto& classes = conjugacy_classes(G);
    CosetSpace cosets(G, M, coset_ceiling);
    PermChar out{std::move(subgroup_label),
                 static_cast<std::uint64_t>(cosets.size()),
                 {}};
    out.values.reserve(classes.size());
    std::uint64_t burnside = 0;
    for (const ConjugacyClass& c : classes) {
        out.values.push_back(cosets.fixed_count(c.representative()));
        burnside += c.size() * out.values.back();
    }
    check_internal(out.values.front() == out.degree,
                   "identity must fix every coset");
    check_internal(burnside == G.order(),
                   "permutation character fails the transitivity count");
    return out;
}

// psi(g) = sum over the characters of pi(s)·pi(g)/pi(1), psi(identity) = 0.
struct SigmaVector {
    std::vector<Rational> values;
    std::size_t s_class = 0;
};

inline SigmaVector approx_p(const std::vector<PermChar>& chars,
                            std::size_t s_class) {
    SigmaVector out;
    out.s_class = s_class;
    if (chars.empty()) return out;
    const std::size_t n = chars.front().values.size();
    for (const PermChar& pc : chars)
        if (pc.values.size() != n)
            user_error("approx_p: characters use different class alignments");
    if (s_class >= n) user_error("approx_p: class index out of range");
    out.values.assign(n, Rational(0));
    for (const PermChar& pc : chars)
        for (std::size_t i = 1; i < n; ++i)
            out.values[i] += Rational(BigInt(pc.values[s_class]) * BigInt(pc.values[i]),
                                      BigInt(pc.degree));
    return out;
}

// max over non-identity classes of psi; in outer mode the maximum is
// restricted to classes of prime order lying outside the socle.
inline Rational sigma_from_maxes(const PermGroup& G, std::size_t s_class,
                                 const std::vector<PermGroup>& maxes,
                                 const PermGroup* socle = nullptr) {
    if (maxes.empty()) return Rational(0);
    const auto& classes = conjugacy_classes(G);
    std::vector<PermChar> chars;
    chars.reserve(maxes.size());
    for (const PermGroup& m : maxes) chars.push_back(permutation_character(G, m));
    SigmaVector psi = approx_p(chars, s_class);

    std::vector<std::size_t> targets;
    if (socle == nullptr) {
        for (std::size_t i = 1; i < classes.size(); ++i) targets.push_back(i);
    } else {
        if (!G.is_subgroup(*socle) || !is_prime_u64(G.order() / socle->order()))
            user_error("sigma: the socle must be a subgroup of prime index");
        for (std::size_t i = 1; i < classes.size(); ++i)
            if (is_prime_u64(classes[i].element_order()) &&
                !socle->contains(classes[i].representative()))
                targets.push_back(i);
    }
    Rational best(0);
    for (std::size_t i : targets)
        if (best < psi.values[i]) best = psi.values[i];
    return best;
}

// floor(1/sigma), lowered by one when 1/sigma is an integer.
inline std::uint64_t spread_bound_from_sigma(const Rational& sigma) {
    if (sigma.is_zero() || sigma < Rational(0))
        user_error("spread bound needs a positive sigma");
    Rational inv = sigma.inverse();
    BigInt fl = inv.floor();
    if (inv.is_integer()) fl -= 1;
    return fl.convert_to<std::uint64_t>();
}

struct ProbGenInfo {
    std::string group_label;
    Rational sigma;
    std::uint64_t spread_bound = 0;
    std::vector<ClassLabel> best_classes;
    std::vector<std::uint64_t> max_counts; // sum of pi(s) per best class
};

// sigma(S) = min over candidate classes s of max_{g != 1} psi(g), with the
// candidates running over the maximally cyclic classes.  Ties report every
// attaining class; counts are the number of subgroups from the list (with
// multiplicity pi(s)) containing a fixed s.
inline ProbGenInfo prob_gen_info(const PermGroup& G,
                                 const std::vector<PermGroup>& maxes,
                                 std::string group_label = "") {
    const auto& classes = conjugacy_classes(G);
    std::vector<PermChar> chars;
    chars.reserve(maxes.size());
    for (const PermGroup& m : maxes) chars.push_back(permutation_character(G, m));

    ProbGenInfo info;
    info.group_label = std::move(group_label);
    bool first = true;
    std::vector<std::size_t> best;
    for (std::size_t s : maximally_cyclic_representatives(G)) {
        if (classes[s].element_order() == 1) continue;
        SigmaVector psi = approx_p(chars, s);
        Rational mx(0);
        for (std::size_t i = 1; i < psi.values.size(); ++i)
            if (mx < psi.values[i]) mx = psi.values[i];
        if (first || mx < info.sigma) {
            info.sigma = mx;
            best = {s};
            first = false;
        } else if (mx == info.sigma) {
            best.push_back(s);
        }
    }
    if (first) user_error("sigma: no candidate classes (trivial group?)");
    if (info.sigma.is_zero())
        user_error("sigma is zero: the subgroup list certifies nothing");
    info.spread_bound = spread_bound_from_sigma(info.sigma);
    for (std::size_t s : best) {
        info.best_classes.push_back(classes[s].label());
        std::uint64_t count = 0;
        for (const PermChar& pc : chars) count += pc.values[s];
        info.max_counts.push_back(count);
    }
    return info;
}

// Candidate s-classes for the almost-simple variant: the maximally cyclic
// classes of the socle, located inside G's class list (classes may fuse).
inline std::vector<std::size_t> socle_candidate_classes(const PermGroup& G,
                                                        const PermGroup& socle) {
    const auto& gcl = conjugacy_classes(G);
    const auto& scl = conjugacy_classes(socle);
    std::set<std::size_t> out;
    for (std::size_t i : maximally_cyclic_representatives(socle)) {
        if (scl[i].element_order() == 1) continue;
        auto idx = find_class_index(gcl, scl[i].representative());
        check_internal(idx.has_value(), "socle class escapes the group's table");
        out.insert(*idx);
    }
    return {out.begin(), out.end()};
}

struct OuterInfo {
    Rational sigma; // min over s of max psi over outer prime-order classes
    std::vector<ClassLabel> best_classes;
    std::vector<std::uint64_t> max_counts;
};

inline OuterInfo prob_gen_info_almost_simple(const PermGroup& G,
                                             const PermGroup& socle,
                                             const std::vector<std::size_t>& s_classes,
                                             const std::vector<PermGroup>& maxes) {
    if (!G.is_subgroup(socle) || socle.order() == G.order() ||
        !is_prime_u64(G.order() / socle.order()))
        user_error("almost-simple mode needs a socle of prime index");
    if (s_classes.empty()) user_error("almost-simple mode needs candidate classes");
    const auto& classes = conjugacy_classes(G);
    std::vector<PermChar> chars;
    std::vector<bool> from_socle;
    for (const PermGroup& m : maxes) {
        chars.push_back(permutation_character(G, m));
        from_socle.push_back(m.order() == socle.order() && socle.is_subgroup(m));
    }

    std::vector<std::size_t> outer;
    for (std::size_t i = 1; i < classes.size(); ++i)
        if (is_prime_u64(classes[i].element_order()) &&
            !socle.contains(classes[i].representative()))
            outer.push_back(i);

    OuterInfo info;
    bool first = true;
    std::vector<std::size_t> best;
    for (std::size_t s : s_classes) {
        if (s >= classes.size()) user_error("almost-simple mode: bad class index");
        SigmaVector psi = approx_p(chars, s);
        Rational mx(0);
        for (std::size_t i : outer)
            if (mx < psi.values[i]) mx = psi.values[i];
        if (first || mx < info.sigma) {
            info.sigma = mx;
            best = {s};
            first = false;
        } else if (mx == info.sigma) {
            best.push_back(s);
        }
    }
    for (std::size_t s : best) {
        info.best_classes.push_back(classes[s].label());
        std::uint64_t count = 0;
        for (std::size_t c = 0; c < chars.size(); ++c)
            if (!from_socle[c]) count += chars[c].values[s];
        info.max_counts.push_back(count);
    }
    return info;
}

// ---- exact nongeneration ---------------------------------------------------

// True iff the listed elements generate all of G; transitivity on the moved
// points is tested first because it is much cheaper than the order.
inline bool is_generating_pair(const PermGroup& G,
                               const std::vector<Permutation>& elems) {
    detail::require_transitive(G, "generation test");
    for (const Permutation& e : elems)
        if (!G.contains(e)) user_error("generation test: element outside the group");
    std::vector<Point> mp = G.moved_points();
    if (!mp.empty()) {
        PointOrbit orb = orbit_of_point(elems, mp.front(), G.degree());
        for (Point x : mp)
            if (!orb.contains(x)) return false;
    }
    return PermGroup(elems, G.group_seed()).order() == G.order();
}

// P(g,s) = |{h in G : <g^h, s> != G}| / |G|.  The indicator is constant on
// C_G(g)·h·C_G(s), so one generation test per double coset suffices.
inline Rational ratio_of_nongeneration(const PermGroup& G, const Permutation& g,
                                       const Permutation& s,
                                       std::size_t coset_ceiling = 200000) {
    detail::require_transitive(G, "nongeneration ratio");
    if (!G.contains(g) || !G.contains(s))
        user_error("nongeneration ratio: element outside the group");
    PermGroup A = centralizer(G, g);
    PermGroup B = centralizer(G, s);
    BigInt fail = 0;
    for (const DoubleCosetRep& dc :
         double_coset_reps_and_sizes(G, A, B, coset_ceiling))
        if (!is_generating_pair(G, {g.conjugated_by(dc.representative), s}))
            fail += dc.size;
    return Rational(fail, BigInt(G.order()));
}

// Row of ratios: a fixed g-class representative against one representative
// per candidate s-class.
inline std::vector<std::pair<ClassLabel, Rational>> nongeneration_profile(
    const PermGroup& G, std::size_t g_class,
    const std::vector<std::size_t>& s_classes) {
    const auto& classes = conjugacy_classes(G);
    if (g_class >= classes.size()) user_error("nongeneration profile: bad class");
    std::vector<std::pair<ClassLabel, Rational>> out;
    for (std::size_t s : s_classes) {
        if (s >= classes.size()) user_error("nongeneration profile: bad class");
        out.emplace_back(classes[s].label(),
                         ratio_of_nongeneration(G, classes[g_class].representative(),
                                                classes[s].representative()));
    }
    return out;
}

// ---- fixed-point-ratio bounds ----------------------------------------------

// Upper bound for max over noncentral prime-order g of sum_i mu(g, G/M_i),
// where each inner list holds prime-order classes of the subgroup M_i.
// Classes are bucketed by (element order, |C_G(rep)|); every G-class lands in
// a single bucket, so the bucket sums bound the true values.  With
// exact=true, maximal buckets are split by conjugacy tests until the maximum
// is attained by a verified single G-class; the flag reports that state.
inline std::pair<Rational, bool> upper_bound_fixed_point_ratios(
    const PermGroup& G, const std::vector<std::vector<ConjugacyClass>>& maxesclasses,
    bool exact) {
    const std::uint64_t n = G.order();
    struct Item {
        Permutation rep;
        std::uint64_t weight; // |rep^{M_i}| · |C_G(rep)|
        std::uint64_t order;
        std::uint64_t cent;
        std::size_t moved;
    };
    std::vector<Item> items;
    for (const auto& list : maxesclasses)
        for (const ConjugacyClass& c : list) {
            Permutation rep = c.representative();
            std::uint64_t cent = detail::centralizer_in(G, rep).order();
            if (cent == n) continue; // central in G contributes nothing here
            std::size_t moved = rep.n_moved();
            items.push_back({std::move(rep), c.size() * cent,
                             c.element_order(), cent, moved});
        }
    if (items.empty()) return {Rational(0), true};

    struct Bucket {
        std::vector<std::size_t> members;
        bool verified = false; // known to be one G-class
    };
    // class invariants: conjugate items always share a bucket
    std::map<std::tuple<std::uint64_t, std::uint64_t, std::size_t>,
             std::vector<std::size_t>>
        keyed;
    for (std::size_t i = 0; i < items.size(); ++i)
        keyed[{items[i].order, items[i].cent, items[i].moved}].push_back(i);
    std::vector<Bucket> buckets;
    for (auto& kv : keyed) buckets.push_back({std::move(kv.second), false});

    auto bucket_sum = [&](const Bucket& b) {
        BigInt total = 0;
        for (std::size_t i : b.members) total += BigInt(items[i].weight);
        return Rational(total, BigInt(n));
    };

    for (;;) {
        std::size_t argmax = 0;
        Rational best(0);
        for (std::size_t b = 0; b < buckets.size(); ++b) {
            Rational v = bucket_sum(buckets[b]);
            if (b == 0 || best < v) {
                best = v;
                argmax = b;
            }
        }
        Bucket& top = buckets[argmax];
        if (top.members.size() == 1) top.verified = true;
        if (!exact || top.verified) return {best, top.verified};

        // split the top bucket into genuine G-classes
        std::vector<Bucket> parts;
        for (std::size_t i : top.members) {
            bool placed = false;
            for (Bucket& p : parts)
                if (are_conjugate(G, items[p.members.front()].rep, items[i].rep)) {
                    p.members.push_back(i);
                    placed = true;
                    break;
                }
            if (!placed) parts.push_back({{i}, true});
        }
        buckets.erase(buckets.begin() + static_cast<std::ptrdiff_t>(argmax));
        for (Bucket& p : parts) buckets.push_back(std::move(p));
    }
}

// ---- orbit representatives on class products --------------------------------

// R(G; g_1..g_k): representatives of the G-orbits (simultaneous conjugation)
// on the product of the classes.  Recursion: extend each (k-1)-tuple t by
// g_k^r for r running over C_G(t) \ G / C_G(g_k) double-coset representatives.
inline std::vector<std::vector<Permutation>> orbit_reps_product_of_classes(
    const PermGroup& G, const std::vector<Permutation>& classreps,
    std::size_t coset_ceiling = 200000) {
    for (const Permutation& r : classreps)
        if (!G.contains(r)) user_error("orbit representatives: element outside the group");
    struct Node {
        std::vector<Permutation> tuple;
        PermGroup cent; // pointwise centralizer of the tuple
    };
    std::vector<Node> nodes{{{}, G}};
    for (const Permutation& gk : classreps) {
        PermGroup cgk = centralizer(G, gk);
        std::vector<Node> next;
        for (const Node& node : nodes) {
            // (T, gk^u) ~ (T, gk^v) exactly when u lies in C(gk)·v·C(T)
            for (const DoubleCosetRep& dc : double_coset_reps_and_sizes(
                     G, cgk, node.cent, coset_ceiling)) {
                Permutation moved = gk.conjugated_by(dc.representative);
                Node ext{node.tuple, detail::centralizer_in(node.cent, moved)};
                ext.tuple.push_back(std::move(moved));
                next.push_back(std::move(ext));
            }
        }
        nodes = std::move(next);
    }
    std::vector<std::vector<Permutation>> out;
    out.reserve(nodes.size());
    for (Node& node : nodes) out.push_back(std::move(node.tuple));
    return out;
}

// ---- randomized uniform-spread certification ---------------------------------

struct SpreadCertificate {
    std::vector<ClassLabel> tuple_classes;
    bool success = false;
    std::vector<Permutation> failing_tuple; // set when success is false
    std::vector<std::uint64_t> trials_used; // per orbit representative
    std::uint64_t seed = 0;
};

// For every orbit representative tuple over the given classes, look for a
// conjugate of s generating with each entry, drawing at most `tries`
// conjugators from a per-tuple deterministic stream.  Successes are
// re-verified by a plain order check before the certificate is issued.
inline SpreadCertificate random_check_uniform_spread(
    const PermGroup& G, const std::vector<Permutation>& classreps,
    const Permutation& s, std::uint64_t tries,
    std::uint64_t rng_seed = kDefaultSeed) {
    detail::require_transitive(G, "spread check");
    if (tries == 0) user_error("spread check: tries must be positive");
    if (!G.contains(s)) user_error("spread check: element outside the group");

    SpreadCertificate cert;
    cert.seed = rng_seed;
    const auto& classes = conjugacy_classes(G);
    for (const Permutation& r : classreps)
        cert.tuple_classes.push_back(classes[class_index_of(G, r)].label());

    std::vector<std::vector<Permutation>> tuples =
        orbit_reps_product_of_classes(G, classreps);
    for (std::size_t ti = 0; ti < tuples.size(); ++ti) {
        detail::ProductReplacer walker(
            G.generators(), derive_stream(rng_seed, 0x5350524400 + ti));
        bool found = false;
        for (std::uint64_t t = 1; t <= tries && !found; ++t) {
            Permutation cand = s.conjugated_by(walker.draw());
            bool all = true;
            for (const Permutation& x : tuples[ti])
                if (!is_generating_pair(G, {x, cand})) {
                    all = false;
                    break;
                }
            if (!all) continue;
            // independent re-verification of every pair
            for (const Permutation& x : tuples[ti])
                check_internal(PermGroup({x, cand}, G.group_seed()).order() ==
                                   G.order(),
                               "spread certificate failed re-verification");
            cert.trials_used.push_back(t);
            found = true;
        }
        if (!found) {
            cert.success = false;
            cert.failing_tuple = tuples[ti];
            cert.trials_used.push_back(tries);
            return cert;
        }
    }
    cert.success = true;
    return cert;
}

// A conjugate of one of the class representatives that generates with every
// tuple entry, if such an element exists.
inline std::optional<Permutation> common_generator_with_given_elements(
    const PermGroup& G, const std::vector<Permutation>& classreps,
    const std::vector<Permutation>& tuple) {
    detail::require_transitive(G, "common generator");
    for (const Permutation& x : tuple)
        if (!G.contains(x)) user_error("common generator: element outside the group");
    PermGroup C = G;
    for (const Permutation& x : tuple) C = detail::centralizer_in(C, x);
    for (const Permutation& rep : classreps) {
        if (!G.contains(rep)) user_error("common generator: element outside the group");
        for (const DoubleCosetRep& dc :
             double_coset_reps_and_sizes(G, centralizer(G, rep), C)) {
            Permutation cand = rep.conjugated_by(dc.representative);
            bool all = true;
            for (const Permutation& x : tuple)
                if (!is_generating_pair(G, {cand, x})) {
                    all = false;
                    break;
                }
            if (all) return cand;
        }
    }
    return std::nullopt;
}

// ---- exhaustive tuple searches over point sets -------------------------------

enum class CoverPredicate {
    CoverAll,          // union of the tuple covers the target set
    EmptyIntersection, // intersection of the tuple is empty
    HitsEvery,         // union of the tuple meets every member of a family
};

// First tuple (lexicographic over the list orders) of one set per list
// satisfying the predicate.  All three predicates are monotone under
// extension, so a satisfied prefix is completed with the first entries of the
// remaining lists.
inline std::optional<std::vector<std::vector<Point>>> tuple_cover_search(
    const std::vector<std::vector<std::vector<Point>>>& lists, CoverPredicate pred,
    const std::vector<Point>& target = {},
    const std::vector<std::vector<Point>>& family = {}) {
    if (lists.size() < 3 || lists.size() > 4)
        user_error("tuple search: only triples and quadruples are supported");
    for (const auto& l : lists)
        if (l.empty()) user_error("tuple search: empty candidate list");

    Point degree = 0;
    auto see = [&degree](const std::vector<Point>& s) {
        for (Point x : s) degree = std::max<Point>(degree, x + 1);
    };
    for (const auto& l : lists)
        for (const auto& s : l) see(s);
    see(target);
    for (const auto& s : family) see(s);

    const std::size_t words = (degree + 63) / 64;
    auto pack = [words](const std::vector<Point>& s) {
        std::vector<std::uint64_t> b(words, 0);
        for (Point x : s) b[x >> 6] |= 1ull << (x & 63);
        return b;
    };
    std::vector<std::vector<std::vector<std::uint64_t>>> bits(lists.size());
    for (std::size_t i = 0; i < lists.size(); ++i)
        for (const auto& s : lists[i]) bits[i].push_back(pack(s));
    const std::vector<std::uint64_t> target_bits = pack(target);
    std::vector<std::vector<std::uint64_t>> family_bits;
    for (const auto& s : family) family_bits.push_back(pack(s));

    auto satisfied = [&](const std::vector<std::uint64_t>& un,
                         const std::vector<std::uint64_t>& in,
                         std::size_t depth) {
        switch (pred) {
        case CoverPredicate::CoverAll:
            for (std::size_t w = 0; w < words; ++w)
                if ((target_bits[w] & ~un[w]) != 0) return false;
            return true;
        case CoverPredicate::EmptyIntersection: {
            if (depth == 0) return false;
            for (std::size_t w = 0; w < words; ++w)
                if (in[w] != 0) return false;
            return true;
        }
        case CoverPredicate::HitsEvery:
            for (const auto& f : family_bits) {
                bool hit = false;
                for (std::size_t w = 0; w < words && !hit; ++w)
                    if ((f[w] & un[w]) != 0) hit = true;
                if (!hit) return false;
            }
            return true;
        }
        return false;
    };

    std::vector<std::size_t> pick(lists.size(), 0);
    std::vector<std::uint64_t> ones(words, ~0ull);
    auto result = [&](std::size_t depth) {
        std::vector<std::vector<Point>> out;
        for (std::size_t i = 0; i < lists.size(); ++i)
            out.push_back(lists[i][i < depth ? pick[i] : 0]);
        return out;
    };
    // depth-first lexicographic walk with running union/intersection
    std::function<std::optional<std::vector<std::vector<Point>>>(
        std::size_t, std::vector<std::uint64_t>, std::vector<std::uint64_t>)>
        walk = [&](std::size_t depth, std::vector<std::uint64_t> un,
                   std::vector<std::uint64_t> in)
        -> std::optional<std::vector<std::vector<Point>>> {
        if (satisfied(un, in, depth)) return result(depth);
        if (depth == lists.size()) return std::nullopt;
        for (std::size_t i = 0; i < bits[depth].size(); ++i) {
            pick[depth] = i;
            std::vector<std::uint64_t> u2(words), i2(words);
            for (std::size_t w = 0; w < words; ++w) {
                u2[w] = un[w] | bits[depth][i][w];
                i2[w] = in[w] & bits[depth][i][w];
            }
            if (auto hit = walk(depth + 1, std::move(u2), std::move(i2)))
                return hit;
        }
        return std::nullopt;
    };
    return walk(0, std::vector<std::uint64_t>(words, 0), ones);
}

} // namespace probgen
