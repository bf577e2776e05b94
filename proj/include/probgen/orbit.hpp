#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "probgen/error.hpp"
#include "probgen/perm.hpp"

namespace probgen {

// Breadth-first point orbit in discovery order (generators applied in list
// order), with a Schreier vector: for each orbit element, which generator
// reached it from which predecessor. Transversal elements are rebuilt on
// demand by walking the back-pointers, so memory stays linear in the orbit.
struct PointOrbit {
    std::vector<Point> elements;           // discovery order; [0] is the seed
    std::vector<std::int64_t> position;    // point -> index in elements, -1 if absent
    std::vector<std::int32_t> via_gen;     // index of generator used to reach
    std::vector<std::uint32_t> via_from;   // index (into elements) of predecessor

    bool contains(Point x) const {
        return x < position.size() && position[x] >= 0;
    }

    std::size_t size() const { return elements.size(); }

    // u with seed^u = elements[idx].
    Permutation transversal(std::size_t idx,
                            const std::vector<Permutation>& gens) const {
        std::vector<std::int32_t> path;
        std::size_t at = idx;
        while (via_gen[at] >= 0) {
            path.push_back(via_gen[at]);
            at = via_from[at];
        }
        Permutation u;
        for (auto it = path.rbegin(); it != path.rend(); ++it) u = u * gens[*it];
        return u;
    }
};

inline PointOrbit orbit_of_point(const std::vector<Permutation>& gens, Point seed,
                                 std::size_t degree_hint = 0) {
    std::size_t degree = std::max<std::size_t>(seed + 1, degree_hint);
    for (const auto& g : gens) degree = std::max(degree, g.degree());
    PointOrbit orb;
    orb.position.assign(degree, -1);
    orb.elements.push_back(seed);
    orb.position[seed] = 0;
    orb.via_gen.push_back(-1);
    orb.via_from.push_back(0);
    for (std::size_t i = 0; i < orb.elements.size(); ++i) {
        Point x = orb.elements[i];
        for (std::size_t s = 0; s < gens.size(); ++s) {
            Point y = gens[s].image(x);
            if (orb.position[y] < 0) {
                orb.position[y] = static_cast<std::int64_t>(orb.elements.size());
                orb.elements.push_back(y);
                orb.via_gen.push_back(static_cast<std::int32_t>(s));
                orb.via_from.push_back(static_cast<std::uint32_t>(i));
            }
        }
    }
    return orb;
}

// Sorted point sets under the induced action; same breadth-first discipline.
struct SetOrbit {
    std::vector<std::vector<Point>> elements;
    std::vector<std::int32_t> via_gen;
    std::vector<std::uint32_t> via_from;
    std::unordered_map<Key128, std::uint32_t, Key128Hash> index;

    std::size_t size() const { return elements.size(); }

    Permutation transversal(std::size_t idx,
                            const std::vector<Permutation>& gens) const {
        std::vector<std::int32_t> path;
        std::size_t at = idx;
        while (via_gen[at] >= 0) {
            path.push_back(via_gen[at]);
            at = via_from[at];
        }
        Permutation u;
        for (auto it = path.rbegin(); it != path.rend(); ++it) u = u * gens[*it];
        return u;
    }
};

inline std::vector<Point> apply_to_set(const std::vector<Point>& set,
                                       const Permutation& g) {
    std::vector<Point> out;
    out.reserve(set.size());
    for (Point x : set) out.push_back(g.image(x));
    std::sort(out.begin(), out.end());
    return out;
}

inline Key128 set_key(const std::vector<Point>& set) {
    return detail::hash_words(set.data(), set.size());
}

inline SetOrbit orbit_of_set(const std::vector<Permutation>& gens,
                             std::vector<Point> seed,
                             std::size_t ceiling = 200000) {
    std::sort(seed.begin(), seed.end());
    SetOrbit orb;
    orb.index.emplace(set_key(seed), 0);
    orb.elements.push_back(std::move(seed));
    orb.via_gen.push_back(-1);
    orb.via_from.push_back(0);
    for (std::size_t i = 0; i < orb.elements.size(); ++i) {
        for (std::size_t s = 0; s < gens.size(); ++s) {
            std::vector<Point> img = apply_to_set(orb.elements[i], gens[s]);
            Key128 k = set_key(img);
            if (orb.index.emplace(k, static_cast<std::uint32_t>(orb.elements.size()))
                    .second) {
                orb.elements.push_back(std::move(img));
                orb.via_gen.push_back(static_cast<std::int32_t>(s));
                orb.via_from.push_back(static_cast<std::uint32_t>(i));
                if (orb.elements.size() > ceiling)
                    ceiling_error("set orbit exceeds ceiling");
            }
        }
    }
    return orb;
}

// Schreier generators of the stabilizer of the seed: u_x * s * u_{x^s}^{-1},
// deduplicated and with identities dropped. Each orbit type gets its own
// wrapper because the transversal bookkeeping differs.
inline std::vector<Permutation> schreier_generators(
    const std::vector<Permutation>& gens, const PointOrbit& orb) {
    std::vector<Permutation> out;
    std::unordered_map<Key128, char, Key128Hash> seen;
    std::vector<Permutation> trans(orb.size());
    for (std::size_t i = 0; i < orb.size(); ++i) trans[i] = orb.transversal(i, gens);
    for (std::size_t i = 0; i < orb.size(); ++i) {
        for (std::size_t s = 0; s < gens.size(); ++s) {
            Point y = gens[s].image(orb.elements[i]);
            std::size_t j = static_cast<std::size_t>(orb.position[y]);
            Permutation sg = trans[i] * gens[s] * trans[j].inverse();
            if (sg.is_identity()) continue;
            if (seen.emplace(sg.key(), 1).second) out.push_back(std::move(sg));
        }
    }
    return out;
}

inline std::vector<Permutation> schreier_generators(
    const std::vector<Permutation>& gens, const SetOrbit& orb) {
    std::vector<Permutation> out;
    std::unordered_map<Key128, char, Key128Hash> seen;
    std::vector<Permutation> trans(orb.size());
    for (std::size_t i = 0; i < orb.size(); ++i) trans[i] = orb.transversal(i, gens);
    for (std::size_t i = 0; i < orb.size(); ++i) {
        for (std::size_t s = 0; s < gens.size(); ++s) {
            std::vector<Point> img = apply_to_set(orb.elements[i], gens[s]);
            std::size_t j = orb.index.at(set_key(img));
            Permutation sg = trans[i] * gens[s] * trans[j].inverse();
            if (sg.is_identity()) continue;
            if (seen.emplace(sg.key(), 1).second) out.push_back(std::move(sg));
        }
    }
    return out;
}

} // namespace probgen
