#pragma once

#include "probgen/catalog.hpp"
#include "probgen/probgen.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

namespace probgen {

// ---- columnwise table rendering ---------------------------------------------

// Pads every column to its own widest cell (right-aligned) and joins cells
// with two spaces.  A single-row table prints with no padding at all, so
// one-line outputs stay compact.
inline std::string render_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += "  ";
            out.append(width[c] - row[c].size(), ' ');
            out += row[c];
        }
        out += '\n';
    }
    return out;
}

inline std::string bracket_list(const std::vector<std::string>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        out += items[i];
    }
    return out + "]";
}

inline std::string comma_list(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        out += items[i];
    }
    return out;
}

// ---- report rows --------------------------------------------------------------

struct ReportRow {
    std::string group;
    ProbGenInfo info;
    double seconds = 0; // wall clock; printed only on request, to keep
                        // default output reproducible byte for byte
};

// The simple groups whose published generation data the bundled catalog
// reproduces end to end.
inline std::vector<std::string> paper_small_suite() {
    return {"A5",  "A6",  "A7",  "A8",    "A9",   "L3(2)",
            "L2(11)", "M11", "M12", "U4(2)", "S6(2)"};
}

inline std::vector<PermGroup> resolve_all_subgroups(const PermGroup& G,
                                                    const CatalogEntry& e) {
    std::vector<PermGroup> out;
    out.reserve(e.subgroups.size());
    for (const SubgroupSpec& s : e.subgroups)
        out.push_back(resolve_subgroup(G, s.recipe));
    return out;
}

inline ReportRow report_row(const std::vector<CatalogEntry>& entries,
                            const std::string& name) {
    const CatalogEntry* e = find_entry(entries, name);
    if (e == nullptr) user_error("unknown group: " + name);
    if (e->subgroups.empty())
        user_error(name + " carries no maximal subgroup data");
    auto t0 = std::chrono::steady_clock::now();
    PermGroup G = build_group(*e);
    ReportRow row{name, prob_gen_info(G, resolve_all_subgroups(G, *e), name), 0};
    row.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return row;
}

inline std::vector<std::string> label_strings(const std::vector<ClassLabel>& ls) {
    std::vector<std::string> out;
    for (const ClassLabel& l : ls) out.push_back(l.str());
    return out;
}

inline std::vector<std::string> count_strings(const std::vector<std::uint64_t>& cs) {
    std::vector<std::string> out;
    for (std::uint64_t c : cs) out.push_back(std::to_string(c));
    return out;
}

inline std::string format_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2fs", s);
    return buf;
}

inline std::vector<std::string> report_cells(const ReportRow& r, bool timings) {
    std::vector<std::string> cells{
        r.group, r.info.sigma.str(), std::to_string(r.info.spread_bound),
        bracket_list(label_strings(r.info.best_classes)),
        bracket_list(count_strings(r.info.max_counts))};
    if (timings) cells.push_back(format_seconds(r.seconds));
    return cells;
}

// one-record-per-line key=value form; list fields are comma-joined
inline std::string report_record(const ReportRow& r, bool timings) {
    std::string out = "group=" + r.group + " sigma=" + r.info.sigma.str() +
                      " spread=" + std::to_string(r.info.spread_bound) +
                      " classes=" + comma_list(label_strings(r.info.best_classes)) +
                      " counts=" + comma_list(count_strings(r.info.max_counts));
    if (timings) out += " time=" + format_seconds(r.seconds);
    return out;
}

} // namespace probgen
