#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <probgen/classes.hpp>
#include <probgen/gf.hpp>
#include <probgen/group.hpp>
#include <probgen/numeric.hpp>
#include <probgen/subgrp.hpp>

namespace probgen {

// Recipes describe how a subgroup is rebuilt from its parent group. A failed
// resolution (membership or declared order) means the shipped data is
// corrupt, not that the caller misused the API, hence internal errors below.
struct SubgroupRecipe {
    enum class Kind {
        Literal,
        PointStabilizer,
        SetStabilizer,
        SylowNormalizer,
        DerivedSubgroup,
        CentralizerOf,
    };

    Kind kind = Kind::Literal;
    std::vector<std::string> literal_gens;
    Point point = 0;
    std::vector<Point> set;
    std::uint64_t prime = 0;
    std::string element_word;
    std::uint64_t declared_order = 0; // 0 = no declaration
};

struct SubgroupSpec {
    std::string label;
    SubgroupRecipe recipe;
    std::string notes;
};

struct MatrixSpec {
    unsigned q = 0;
    unsigned dim = 0;
    std::vector<Matrix> gens;
    std::size_t orbit_length = 0; // 0 = smallest faithful orbit
};

struct CatalogEntry {
    std::string name;
    std::uint64_t declared_order = 0;
    std::size_t degree = 0;                // cycles variant
    std::vector<std::string> cycle_gens;   // cycles variant
    std::optional<MatrixSpec> matrices;    // matrices variant
    std::vector<SubgroupSpec> subgroups;
    std::string socle_of; // name of the almost simple entry this group is the socle of
    std::string notes;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

[[noreturn]] inline void parse_fail(const std::string& path, std::size_t line,
                                    const std::string& msg) {
    user_error(path + ":" + std::to_string(line) + ": " + msg);
}

inline std::uint64_t parse_u64(const std::string& path, std::size_t line,
                               const std::string& text, const std::string& what) {
    std::uint64_t v = 0;
    std::size_t pos = 0;
    try {
        v = std::stoull(text, &pos);
    } catch (const std::exception&) {
        parse_fail(path, line, "expected a number for " + what);
    }
    if (pos != text.size()) parse_fail(path, line, "trailing junk after " + what);
    return v;
}

// comma-separated nonnegative integers, as in set_stabilizer(1,2,3)
inline std::vector<std::uint64_t> parse_int_list(const std::string& path,
                                                 std::size_t line,
                                                 const std::string& text,
                                                 const std::string& what) {
    std::vector<std::uint64_t> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ','))
        out.push_back(parse_u64(path, line, trim(cur), what));
    if (out.empty()) parse_fail(path, line, "empty list for " + what);
    return out;
}

inline SubgroupRecipe parse_recipe(const std::string& path, std::size_t line,
                                   const std::string& value) {
    SubgroupRecipe r;
    std::string v = trim(value);
    auto arg_of = [&](const std::string& head) {
        // text between the first '(' and the matching final ')'
        if (v.size() < head.size() + 2 || v.back() != ')')
            parse_fail(path, line, "malformed " + head + " recipe");
        return trim(v.substr(head.size() + 1, v.size() - head.size() - 2));
    };
    if (v.rfind("literal", 0) == 0) {
        r.kind = SubgroupRecipe::Kind::Literal;
        r.literal_gens = split_ws(v.substr(7));
        if (r.literal_gens.empty())
            parse_fail(path, line, "literal recipe without generators");
        for (const std::string& g : r.literal_gens) {
            try {
                parse_permutation(g);
            } catch (const Error& e) {
                parse_fail(path, line, std::string("bad generator: ") + e.what());
            }
        }
    } else if (v.rfind("point_stabilizer", 0) == 0) {
        r.kind = SubgroupRecipe::Kind::PointStabilizer;
        std::uint64_t p = parse_u64(path, line, arg_of("point_stabilizer"),
                                    "stabilized point");
        if (p == 0) parse_fail(path, line, "points are numbered from 1");
        r.point = static_cast<Point>(p - 1);
    } else if (v.rfind("set_stabilizer", 0) == 0) {
        r.kind = SubgroupRecipe::Kind::SetStabilizer;
        for (std::uint64_t p : parse_int_list(path, line, arg_of("set_stabilizer"),
                                              "stabilized set")) {
            if (p == 0) parse_fail(path, line, "points are numbered from 1");
            r.set.push_back(static_cast<Point>(p - 1));
        }
    } else if (v.rfind("sylow_normalizer", 0) == 0) {
        r.kind = SubgroupRecipe::Kind::SylowNormalizer;
        r.prime = parse_u64(path, line, arg_of("sylow_normalizer"), "prime");
        if (!is_prime_u64(r.prime))
            parse_fail(path, line, "sylow_normalizer needs a prime");
    } else if (v == "derived_subgroup") {
        r.kind = SubgroupRecipe::Kind::DerivedSubgroup;
    } else if (v.rfind("centralizer_of", 0) == 0) {
        r.kind = SubgroupRecipe::Kind::CentralizerOf;
        r.element_word = arg_of("centralizer_of");
        try {
            parse_permutation(r.element_word);
        } catch (const Error& e) {
            parse_fail(path, line, std::string("bad element word: ") + e.what());
        }
    } else {
        parse_fail(path, line, "unknown recipe variant");
    }
    return r;
}

// one matrix per [...] block; rows split on ';', entries on ','
inline std::vector<Matrix> parse_matrix_gens(const std::string& path,
                                             std::size_t line,
                                             const std::string& value,
                                             unsigned q, unsigned dim) {
    const Field& F = gf(q);
    std::vector<Matrix> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t open = value.find('[', pos);
        if (open == std::string::npos) break;
        std::size_t close = value.find(']', open);
        if (close == std::string::npos)
            parse_fail(path, line, "unterminated matrix literal");
        std::string body = value.substr(open + 1, close - open - 1);
        Matrix m(q, dim);
        std::istringstream rows(body);
        std::string row;
        unsigned r = 0;
        while (std::getline(rows, row, ';')) {
            if (r >= dim) parse_fail(path, line, "too many matrix rows");
            std::vector<std::uint64_t> codes =
                parse_int_list(path, line, row, "matrix entry");
            if (codes.size() != dim)
                parse_fail(path, line, "matrix row needs " + std::to_string(dim) +
                                           " entries");
            for (unsigned c = 0; c < dim; ++c) {
                if (codes[c] > q - 1)
                    parse_fail(path, line, "exponent code out of range");
                m.at(r, c) = F.from_exponent_code(static_cast<unsigned>(codes[c]));
            }
            ++r;
        }
        if (r != dim) parse_fail(path, line, "matrix needs " + std::to_string(dim) +
                                                 " rows");
        out.push_back(std::move(m));
        pos = close + 1;
    }
    if (out.empty()) parse_fail(path, line, "no matrix generators found");
    return out;
}

struct RawSection {
    bool is_group = false;
    std::string name;
    std::size_t header_line = 0;
    std::vector<std::pair<std::string, std::string>> keys;
    std::vector<std::size_t> key_lines;
};

inline const std::string* raw_value(const RawSection& s, const std::string& key,
                                    std::size_t* line = nullptr) {
    for (std::size_t i = 0; i < s.keys.size(); ++i)
        if (s.keys[i].first == key) {
            if (line) *line = s.key_lines[i];
            return &s.keys[i].second;
        }
    return nullptr;
}

} // namespace detail

// Plain-text sectioned catalog, versioned by the "probgen-catalog 1" header.
// Validation here is syntactic; groups are built on demand by build_group.
inline std::vector<CatalogEntry> load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) user_error("cannot open catalog file " + path);

    std::vector<detail::RawSection> sections;
    bool saw_header = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!saw_header) {
            if (t != "probgen-catalog 1")
                detail::parse_fail(path, lineno,
                                   "missing 'probgen-catalog 1' header");
            saw_header = true;
            continue;
        }
        if (t.front() == '[') {
            if (t.back() != ']')
                detail::parse_fail(path, lineno, "unterminated section header");
            std::string inner = detail::trim(t.substr(1, t.size() - 2));
            detail::RawSection sec;
            sec.header_line = lineno;
            if (inner.rfind("group ", 0) == 0) {
                sec.is_group = true;
                sec.name = detail::trim(inner.substr(6));
            } else if (inner.rfind("max ", 0) == 0) {
                sec.is_group = false;
                sec.name = detail::trim(inner.substr(4));
            } else {
                detail::parse_fail(path, lineno,
                                   "section must be [group NAME] or [max LABEL]");
            }
            if (sec.name.empty())
                detail::parse_fail(path, lineno, "section name missing");
            sections.push_back(std::move(sec));
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            detail::parse_fail(path, lineno, "expected 'key = value'");
        if (sections.empty())
            detail::parse_fail(path, lineno, "key outside any section");
        std::string key = detail::trim(t.substr(0, eq));
        std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty()) detail::parse_fail(path, lineno, "empty key");
        sections.back().keys.emplace_back(key, value);
        sections.back().key_lines.push_back(lineno);
    }
    if (!saw_header && lineno > 0)
        detail::parse_fail(path, lineno, "missing 'probgen-catalog 1' header");

    std::vector<CatalogEntry> entries;
    std::set<std::string> seen_names;
    for (const detail::RawSection& sec : sections) {
        std::size_t vline = sec.header_line;
        if (sec.is_group) {
            if (!seen_names.insert(sec.name).second)
                detail::parse_fail(path, sec.header_line,
                                   "duplicate group name " + sec.name);
            CatalogEntry e;
            e.name = sec.name;
            const std::string* v = detail::raw_value(sec, "order", &vline);
            if (!v) detail::parse_fail(path, sec.header_line,
                                       "group " + e.name + " lacks an order");
            e.declared_order = detail::parse_u64(path, vline, *v, "order");
            if (e.declared_order == 0)
                detail::parse_fail(path, vline, "order must be positive");
            if (const std::string* n = detail::raw_value(sec, "notes")) e.notes = *n;
            if (const std::string* n = detail::raw_value(sec, "socle_of"))
                e.socle_of = *n;

            const std::string* gens = detail::raw_value(sec, "gens", &vline);
            if (!gens) detail::parse_fail(path, sec.header_line,
                                          "group " + e.name + " lacks generators");
            std::size_t gline = vline;
            if (const std::string* field = detail::raw_value(sec, "field", &vline)) {
                MatrixSpec ms;
                std::uint64_t q = detail::parse_u64(path, vline, *field, "field");
                if (q < 2 || q > 9 || q == 6)
                    detail::parse_fail(path, vline, "unsupported field size");
                ms.q = static_cast<unsigned>(q);
                const std::string* dim = detail::raw_value(sec, "dim", &vline);
                if (!dim) detail::parse_fail(path, sec.header_line,
                                             "matrix entry lacks a dimension");
                std::uint64_t d = detail::parse_u64(path, vline, *dim, "dim");
                if (d == 0 || d > 8)
                    detail::parse_fail(path, vline, "dimension out of range");
                ms.dim = static_cast<unsigned>(d);
                ms.gens = detail::parse_matrix_gens(path, gline, *gens, ms.q, ms.dim);
                if (const std::string* orb = detail::raw_value(sec, "orbit", &vline))
                    ms.orbit_length = detail::parse_u64(path, vline, *orb, "orbit");
                e.matrices = std::move(ms);
            } else {
                const std::string* deg = detail::raw_value(sec, "degree", &vline);
                if (!deg) detail::parse_fail(path, sec.header_line,
                                             "cycle entry lacks a degree");
                e.degree = detail::parse_u64(path, vline, *deg, "degree");
                e.cycle_gens = detail::split_ws(*gens);
                if (e.cycle_gens.empty())
                    detail::parse_fail(path, gline, "no generators listed");
                for (const std::string& g : e.cycle_gens) {
                    try {
                        parse_permutation(g, e.degree);
                    } catch (const Error& err) {
                        detail::parse_fail(path, gline,
                                           std::string("bad generator: ") +
                                               err.what());
                    }
                }
            }
            entries.push_back(std::move(e));
        } else {
            if (entries.empty())
                detail::parse_fail(path, sec.header_line,
                                   "[max] section before any [group]");
            CatalogEntry& host = entries.back();
            for (const SubgroupSpec& s : host.subgroups)
                if (s.label == sec.name)
                    detail::parse_fail(path, sec.header_line,
                                       "duplicate subgroup label " + sec.name);
            SubgroupSpec spec;
            spec.label = sec.name;
            const std::string* v = detail::raw_value(sec, "recipe", &vline);
            if (!v) detail::parse_fail(path, sec.header_line,
                                       "subgroup " + spec.label + " lacks a recipe");
            spec.recipe = detail::parse_recipe(path, vline, *v);
            if (const std::string* o = detail::raw_value(sec, "order", &vline))
                spec.recipe.declared_order =
                    detail::parse_u64(path, vline, *o, "order");
            if (const std::string* n = detail::raw_value(sec, "notes"))
                spec.notes = *n;
            host.subgroups.push_back(std::move(spec));
        }
    }
    return entries;
}

// Build the permutation group an entry describes. Cycle entries are direct;
// matrix entries act on normalized projective points (first nonzero
// coordinate 1, points in lexicographic order) and are restricted to the
// smallest orbit on which the action stays faithful, unless the entry names
// an orbit by its length. The declared order is a hard check either way.
inline PermGroup build_group(const CatalogEntry& entry) {
    PermGroup G;
    if (entry.matrices) {
        const MatrixSpec& ms = *entry.matrices;
        std::vector<std::vector<unsigned>> pts = projective_points(ms.q, ms.dim);
        std::vector<Permutation> perms;
        perms.reserve(ms.gens.size());
        for (const Matrix& m : ms.gens)
            perms.push_back(projective_permutation(m, pts));
        PermGroup full(perms);
        std::uint64_t full_order = full.order();

        std::vector<std::vector<Point>> orbits = full.orbits();
        std::stable_sort(orbits.begin(), orbits.end(),
                         [](const std::vector<Point>& a,
                            const std::vector<Point>& b) {
                             return a.size() < b.size();
                         });
        bool found = false;
        for (const std::vector<Point>& orb : orbits) {
            if (ms.orbit_length != 0 && orb.size() != ms.orbit_length) continue;
            std::vector<Point> rank(pts.size(), 0);
            for (std::size_t i = 0; i < orb.size(); ++i)
                rank[orb[i]] = static_cast<Point>(i);
            std::vector<Permutation> restricted;
            for (const Permutation& p : perms) {
                std::vector<Point> img(orb.size());
                for (std::size_t i = 0; i < orb.size(); ++i)
                    img[i] = rank[p.image(orb[i])];
                restricted.emplace_back(std::move(img));
            }
            PermGroup cand(restricted);
            if (cand.order() == full_order) {
                G = std::move(cand);
                found = true;
                break;
            }
            if (ms.orbit_length != 0)
                user_error("named orbit of " + entry.name +
                           " does not carry a faithful action");
        }
        if (!found)
            user_error(ms.orbit_length != 0
                           ? "no orbit of the named length for " + entry.name
                           : "no faithful orbit for " + entry.name);
    } else {
        G = PermGroup::from_strings(entry.cycle_gens, entry.degree);
    }
    if (G.order() != entry.declared_order)
        user_error("catalog entry " + entry.name + " declares order " +
                   std::to_string(entry.declared_order) + " but builds order " +
                   std::to_string(G.order()));
    return G;
}

inline PermGroup resolve_subgroup(const PermGroup& G,
                                  const SubgroupRecipe& recipe) {
    PermGroup S;
    switch (recipe.kind) {
        case SubgroupRecipe::Kind::Literal: {
            std::vector<Permutation> gens;
            for (const std::string& w : recipe.literal_gens) {
                try {
                    gens.push_back(parse_permutation(w, G.degree()));
                } catch (const Error& e) {
                    internal_error(std::string("corrupt literal generator: ") +
                                   e.what());
                }
            }
            S = PermGroup(std::move(gens), G.group_seed());
            break;
        }
        case SubgroupRecipe::Kind::PointStabilizer:
            if (recipe.point >= G.degree())
                internal_error("stabilized point beyond the group degree");
            S = G.point_stabilizer(recipe.point);
            break;
        case SubgroupRecipe::Kind::SetStabilizer:
            for (Point p : recipe.set)
                if (p >= G.degree())
                    internal_error("stabilized set beyond the group degree");
            S = G.set_stabilizer(recipe.set);
            break;
        case SubgroupRecipe::Kind::SylowNormalizer:
            S = normalizer(G, sylow_subgroup(G, recipe.prime));
            break;
        case SubgroupRecipe::Kind::DerivedSubgroup:
            S = derived_subgroup(G);
            break;
        case SubgroupRecipe::Kind::CentralizerOf: {
            Permutation x;
            try {
                x = parse_permutation(recipe.element_word, G.degree());
            } catch (const Error& e) {
                internal_error(std::string("corrupt element word: ") + e.what());
            }
            if (!G.contains(x))
                internal_error("centralized element lies outside the group");
            S = centralizer(G, x);
            break;
        }
    }
    if (!G.is_subgroup(S))
        internal_error("resolved subgroup escapes its parent group");
    if (recipe.declared_order != 0 && S.order() != recipe.declared_order)
        internal_error("resolved subgroup has order " +
                       std::to_string(S.order()) + ", declared " +
                       std::to_string(recipe.declared_order));
    return S;
}

inline const CatalogEntry* find_entry(const std::vector<CatalogEntry>& entries,
                                      const std::string& name) {
    for (const CatalogEntry& e : entries)
        if (e.name == name) return &e;
    return nullptr;
}

// reverse lookup over socle_of: the entry whose socle_of names `parent`
inline const CatalogEntry* socle_entry_for(
    const std::vector<CatalogEntry>& entries, const std::string& parent) {
    for (const CatalogEntry& e : entries)
        if (e.socle_of == parent) return &e;
    return nullptr;
}

} // namespace probgen
