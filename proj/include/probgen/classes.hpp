#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <probgen/group.hpp>
#include <probgen/numeric.hpp>

namespace probgen {

// Rendered like "5A".  Letters run through classes of the same element order
// in canonical class order; sizes break ties before representatives do, so
// letter assignment is reproducible but need not match published tables.
struct ClassLabel {
    std::uint64_t element_order = 1;
    std::uint64_t class_size = 1;
    std::uint32_t ordinal = 0;

    std::string str() const {
        std::string letters;
        std::uint64_t n = ordinal;
        for (;;) {
            letters.insert(letters.begin(), char('A' + n % 26));
            if (n < 26) break;
            n = n / 26 - 1;
        }
        return std::to_string(element_order) + letters;
    }
};

class ConjugacyClass {
public:
    ConjugacyClass(Permutation rep, std::uint64_t order, std::uint64_t size,
                   ClassLabel label, PermGroup cent,
                   std::shared_ptr<const std::vector<Key128>> keys)
        : rep_(std::move(rep)),
          order_(order),
          size_(size),
          label_(label),
          cent_(std::move(cent)),
          keys_(std::move(keys)) {}

    // Lexicographically least member, so class lists are reproducible.
    const Permutation& representative() const { return rep_; }
    std::uint64_t element_order() const { return order_; }
    std::uint64_t size() const { return size_; }
    const ClassLabel& label() const { return label_; }
    const PermGroup& centralizer() const { return cent_; }
    std::uint64_t centralizer_order() const { return cent_.order(); }

    bool contains_key(const Key128& k) const {
        return std::binary_search(keys_->begin(), keys_->end(), k,
                                  [](const Key128& a, const Key128& b) {
                                      return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
                                  });
    }
    bool contains(const Permutation& p) const { return contains_key(p.key()); }

private:
    Permutation rep_;
    std::uint64_t order_;
    std::uint64_t size_;
    ClassLabel label_;
    PermGroup cent_;
    std::shared_ptr<const std::vector<Key128>> keys_;
};

namespace detail {

struct ClassTable {
    std::vector<ConjugacyClass> classes;
};

// Full conjugation orbit of `seed` under the group generated by `gens`,
// with witnesses: seed^witness[i] == elems[i].
struct ClassExpansion {
    std::vector<Permutation> elems;
    std::vector<Permutation> witness;
    std::unordered_map<Key128, std::uint32_t, Key128Hash> position;
    Permutation canonical;
};

inline ClassExpansion expand_conjugation_orbit(const std::vector<Permutation>& gens,
                                               const Permutation& seed,
                                               std::uint64_t ceiling) {
    ClassExpansion ex;
    ex.position.emplace(seed.key(), 0);
    ex.elems.push_back(seed);
    ex.witness.emplace_back();
    ex.canonical = seed;
    for (std::size_t i = 0; i < ex.elems.size(); ++i) {
        for (const Permutation& s : gens) {
            Permutation c = ex.elems[i].conjugated_by(s);
            auto ins = ex.position.emplace(c.key(),
                                           static_cast<std::uint32_t>(ex.elems.size()));
            if (!ins.second) continue;
            if (ex.elems.size() >= ceiling)
                ceiling_error("conjugacy class exceeds the element-storage ceiling");
            ex.witness.push_back(ex.witness[i] * s);
            if (c < ex.canonical) ex.canonical = c;
            ex.elems.push_back(std::move(c));
        }
    }
    return ex;
}

// Stabilizer of the seed under conjugation = its centralizer; assembled from
// Schreier generators until the known target order is reached.
inline PermGroup centralizer_from_expansion(const PermGroup& G,
                                            const ClassExpansion& ex,
                                            std::uint64_t target,
                                            bool seed_in_group = true) {
    const std::vector<Permutation>& gens = G.generators();
    std::vector<Permutation> cgens;
    // the seed centralizes itself, but only counts when it lies in G
    if (seed_in_group && ex.elems.front().n_moved() != 0)
        cgens.push_back(ex.elems.front());
    PermGroup C(cgens, G.group_seed());
    std::uint64_t ord = C.order();
    if (ord == target) return C;
    for (std::size_t i = 0; i < ex.elems.size(); ++i) {
        for (std::size_t s = 0; s < gens.size(); ++s) {
            Permutation c = ex.elems[i].conjugated_by(gens[s]);
            std::uint32_t j = ex.position.at(c.key());
            Permutation sg = ex.witness[i] * gens[s] * ex.witness[j].inverse();
            if (sg.n_moved() == 0 || C.contains(sg)) continue;
            cgens.push_back(std::move(sg));
            C = PermGroup(cgens, G.group_seed());
            ord = C.order();
            if (ord == target) return C;
        }
    }
    check_internal(ord == target, "centralizer construction left a proper subgroup");
    return C;
}

inline bool key_less(const Key128& a, const Key128& b) {
    return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
}

} // namespace detail

// Complete class list in canonical order (element order asc, size asc,
// canonical representative asc).  Cached on the group; the reference stays
// valid while any handle to the group is alive.  Discovery is seeded by the
// group's deterministic random stream plus powers of representatives already
// found, and stops exactly when the sizes sum to |G|.
inline const std::vector<ConjugacyClass>& conjugacy_classes(
    const PermGroup& G, std::uint64_t ceiling = 5000000) {
    {
        std::lock_guard<std::mutex> lock(G.cache_mutex());
        if (G.class_cache())
            return std::static_pointer_cast<const detail::ClassTable>(G.class_cache())
                ->classes;
    }

    const std::uint64_t n = G.order();
    if (n > ceiling)
        ceiling_error("group order exceeds the class element-storage ceiling");

    struct Raw {
        Permutation rep;
        std::uint64_t order;
        std::uint64_t size;
        PermGroup cent;
        std::shared_ptr<const std::vector<Key128>> keys;
    };
    std::vector<Raw> raws;
    std::uint64_t covered = 0;

    auto known = [&raws](const Permutation& p) {
        Key128 k = p.key();
        for (const Raw& r : raws)
            if (std::binary_search(r.keys->begin(), r.keys->end(), k, detail::key_less))
                return true;
        return false;
    };

    std::deque<Permutation> pending;
    pending.emplace_back(); // the identity's class goes in first
    detail::ProductReplacer walker = G.task_walker(0x434c4153); // "CLAS"
    std::uint64_t idle_draws = 0;
    while (covered < n) {
        Permutation cand;
        if (!pending.empty()) {
            cand = std::move(pending.front());
            pending.pop_front();
        } else {
            cand = walker.draw();
            check_internal(++idle_draws < 2000000, "class discovery stalled");
        }
        if (known(cand)) continue;

        detail::ClassExpansion ex =
            detail::expand_conjugation_orbit(G.generators(), cand, n);
        const std::uint64_t size = ex.elems.size();
        check_internal(n % size == 0, "class size does not divide the group order");
        PermGroup cent = detail::centralizer_from_expansion(G, ex, n / size);
        // The expansion centralizes its seed; move that to the canonical rep.
        const Permutation& to_canon = ex.witness[ex.position.at(ex.canonical.key())];
        if (to_canon.n_moved() != 0) {
            std::vector<Permutation> cgens;
            cgens.reserve(cent.generators().size());
            for (const Permutation& g : cent.generators())
                cgens.push_back(g.conjugated_by(to_canon));
            cent = PermGroup(cgens, G.group_seed());
        }

        auto keys = std::make_shared<std::vector<Key128>>();
        keys->reserve(size);
        for (const auto& kv : ex.position) keys->push_back(kv.first);
        std::sort(keys->begin(), keys->end(), detail::key_less);
        check_internal(std::adjacent_find(keys->begin(), keys->end()) == keys->end(),
                       "element key collision inside a class");

        Raw raw{ex.canonical, ex.canonical.order(), size, std::move(cent),
                std::move(keys)};
        // Powers of the representative reach every class meeting <rep>;
        // that finds the small classes without waiting on random draws.
        Permutation pw = raw.rep;
        for (std::uint64_t k = 2; k < raw.order; ++k) {
            pw = pw * raw.rep;
            pending.push_back(pw);
        }
        raws.push_back(std::move(raw));
        covered += size;
        check_internal(covered <= n, "class sizes overshoot the group order");
    }

    std::sort(raws.begin(), raws.end(), [](const Raw& a, const Raw& b) {
        if (a.order != b.order) return a.order < b.order;
        if (a.size != b.size) return a.size < b.size;
        return a.rep < b.rep;
    });

    auto table = std::make_shared<detail::ClassTable>();
    table->classes.reserve(raws.size());
    std::unordered_map<std::uint64_t, std::uint32_t> letter;
    for (Raw& r : raws) {
        ClassLabel lab{r.order, r.size, letter[r.order]++};
        table->classes.emplace_back(std::move(r.rep), r.order, r.size, lab,
                                    std::move(r.cent), std::move(r.keys));
    }

    std::lock_guard<std::mutex> lock(G.cache_mutex());
    if (!G.class_cache())
        G.class_cache() = std::static_pointer_cast<const void>(table);
    return std::static_pointer_cast<const detail::ClassTable>(G.class_cache())->classes;
}

inline std::optional<std::size_t> find_class_index(
    const std::vector<ConjugacyClass>& classes, const Permutation& p) {
    const std::uint64_t ord = p.order();
    const Key128 k = p.key();
    for (std::size_t i = 0; i < classes.size(); ++i)
        if (classes[i].element_order() == ord && classes[i].contains_key(k))
            return i;
    return std::nullopt;
}

inline std::size_t class_index_of(const PermGroup& G, const Permutation& p) {
    auto idx = find_class_index(conjugacy_classes(G), p);
    if (!idx) user_error("element does not lie in the group");
    return *idx;
}

// Centralizer of an arbitrary element, independent of the class cache.
inline PermGroup centralizer(const PermGroup& G, const Permutation& x) {
    if (!G.contains(x)) user_error("centralizer: element is not in the group");
    const std::uint64_t n = G.order();
    detail::ClassExpansion ex =
        detail::expand_conjugation_orbit(G.generators(), x, n);
    check_internal(n % ex.elems.size() == 0,
                   "class size does not divide the group order");
    return detail::centralizer_from_expansion(G, ex, n / ex.elems.size());
}

// Conjugacy test with optional witness.  Cheap filters first (cycle type,
// cached class lookup); otherwise align the moved-point sets through a set
// transversal and search inside the setwise stabilizer, which must contain
// any conjugating element once the moved sets agree.
inline bool are_conjugate(const PermGroup& G, const Permutation& x,
                          const Permutation& y, Permutation* witness = nullptr,
                          std::uint64_t ceiling = 5000000) {
    if (!G.contains(x) || !G.contains(y))
        user_error("conjugacy test: element is not in the group");
    if (x == y) {
        if (witness) *witness = Permutation();
        return true;
    }
    if (x.cycle_type() != y.cycle_type()) return false;
    if (!witness) {
        std::lock_guard<std::mutex> lock(G.cache_mutex());
        if (G.class_cache()) {
            const auto& classes =
                std::static_pointer_cast<const detail::ClassTable>(G.class_cache())
                    ->classes;
            auto ix = find_class_index(classes, x);
            auto iy = find_class_index(classes, y);
            check_internal(ix && iy, "cached class table misses a group element");
            return *ix == *iy;
        }
    }

    std::vector<Point> mx = x.moved_points();
    std::vector<Point> my = y.moved_points();
    Permutation pre;
    Permutation x1 = x;
    if (mx != my) {
        SetOrbit so = orbit_of_set(G.generators(), mx, ceiling);
        auto hit = so.index.find(set_key(my));
        if (hit == so.index.end()) return false;
        pre = so.transversal(hit->second, G.generators());
        x1 = x.conjugated_by(pre);
        check_internal(x1.moved_points() == my, "set transversal misaligned");
    }
    PermGroup H = G.set_stabilizer(my, ceiling);

    const Key128 want = y.key();
    std::vector<Permutation> elems{x1};
    std::vector<Permutation> wit{Permutation()};
    std::unordered_map<Key128, std::uint32_t, Key128Hash> seen;
    seen.emplace(x1.key(), 0);
    if (x1.key() == want) {
        if (witness) *witness = pre;
        return true;
    }
    for (std::size_t i = 0; i < elems.size(); ++i) {
        for (const Permutation& s : H.generators()) {
            Permutation c = elems[i].conjugated_by(s);
            Key128 k = c.key();
            if (!seen.emplace(k, static_cast<std::uint32_t>(elems.size())).second)
                continue;
            if (elems.size() >= ceiling)
                ceiling_error("conjugacy search exceeds the element-storage ceiling");
            Permutation w = wit[i] * s;
            if (k == want) {
                Permutation total = pre * w;
                check_internal(x.conjugated_by(total) == y,
                               "conjugacy witness fails verification");
                if (witness) *witness = total;
                return true;
            }
            wit.push_back(std::move(w));
            elems.push_back(std::move(c));
        }
    }
    return false;
}

// Class index of rep^k for each class.
inline std::vector<std::size_t> power_map(const PermGroup& G, std::uint64_t k) {
    const auto& classes = conjugacy_classes(G);
    std::vector<std::size_t> out;
    out.reserve(classes.size());
    for (const ConjugacyClass& c : classes) {
        auto idx = find_class_index(
            classes, c.representative().power(static_cast<long long>(k)));
        check_internal(idx.has_value(), "power of a representative escaped the table");
        out.push_back(*idx);
    }
    return out;
}

inline std::vector<ConjugacyClass> classes_matching_profile(
    const PermGroup& G,
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& profiles) {
    std::vector<ConjugacyClass> out;
    for (const ConjugacyClass& c : conjugacy_classes(G))
        for (const auto& pr : profiles)
            if (c.element_order() == pr.first && c.size() == pr.second) {
                out.push_back(c);
                break;
            }
    return out;
}

// One class index per class of maximally cyclic subgroups: drop proper-power
// images of smaller order, then fold classes whose cyclic subgroups are
// conjugate, keeping the canonically least index.
inline std::vector<std::size_t> maximally_cyclic_representatives(const PermGroup& G) {
    const auto& classes = conjugacy_classes(G);
    const std::size_t n = classes.size();
    std::vector<bool> keep(n, true);

    auto index_of_power = [&classes](std::size_t i, std::uint64_t k) {
        auto idx = find_class_index(classes,
                                    classes[i].representative().power(
                                        static_cast<long long>(k)));
        check_internal(idx.has_value(), "power of a representative escaped the table");
        return *idx;
    };

    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t ord = classes[i].element_order();
        for (std::uint64_t k = 2; k <= ord && ord > 1; ++k) {
            std::size_t j = index_of_power(i, k);
            if (classes[j].element_order() < ord) keep[j] = false;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!keep[i]) continue;
        const std::uint64_t ord = classes[i].element_order();
        for (std::uint64_t k = 2; k < ord; ++k) {
            if (gcd_u64(k, ord) != 1) continue;
            std::size_t j = index_of_power(i, k);
            if (j != i) keep[j] = false;
        }
    }

    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (keep[i]) out.push_back(i);
    return out;
}

} // namespace probgen
