// Command-line front end: class tables, generation bounds, exact
// nongeneration ratios, randomized spread certificates, and the bundled
// reproduction report.  Output is deterministic for fixed seeds.

#include "probgen/report.hpp"

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

using namespace probgen;

const char* kUsage =
    "usage: probgen <command> [args]\n"
    "\n"
    "commands:\n"
    "  classes GROUP                     canonical class table: label, element\n"
    "                                    order, class size, centralizer order\n"
    "  sigma GROUP --s CLASS             sigma(GROUP, CLASS) and the full bound\n"
    "        [--outer SOCLE]             vector; with --outer, the outer-class\n"
    "                                    variant for an almost simple group\n"
    "  info GROUP                        group, sigma, spread bound, attaining\n"
    "                                    classes, subgroup counts\n"
    "  nongen GROUP --g CLASS --s CLASS  exact nongeneration proportion P(g,s)\n"
    "  spread GROUP --s CLASS [--k K]    randomized uniform-spread check over\n"
    "         [--tries N] [--seed S]     all K-multisets of nonidentity classes\n"
    "  report --suite paper-small        reproduction rows for the bundled\n"
    "         [--format text|records]    simple groups\n"
    "\n"
    "common flags: --catalog FILE overrides the bundled catalog (also via the\n"
    "PROBGEN_CATALOG environment variable); --timings appends wall-clock times\n"
    "(report only).  Class labels are the artifact's canonical letters; run\n"
    "`probgen classes GROUP` first to discover them.\n";

struct Args {
    std::string command;
    std::vector<std::string> positional;
    std::map<std::string, std::string> flags;
};

Args parse_args(int argc, char** argv) {
    Args a;
    if (argc < 2) user_error("missing command; try `probgen help`");
    a.command = argv[1];
    for (int i = 2; i < argc; ++i) {
        std::string t = argv[i];
        if (t.rfind("--", 0) == 0) {
            std::string key = t.substr(2);
            if (key == "timings" || key == "help") {
                a.flags[key] = "1";
                continue;
            }
            if (i + 1 >= argc) user_error("flag --" + key + " needs a value");
            a.flags[key] = argv[++i];
        } else {
            a.positional.push_back(t);
        }
    }
    return a;
}

std::string catalog_path(const Args& a) {
    auto it = a.flags.find("catalog");
    if (it != a.flags.end()) return it->second;
    if (const char* env = std::getenv("PROBGEN_CATALOG")) return env;
#ifdef PROBGEN_CATALOG_PATH
    return PROBGEN_CATALOG_PATH;
#else
    return "data/catalog.txt";
#endif
}

const std::string& flag_value(const Args& a, const std::string& key) {
    auto it = a.flags.find(key);
    if (it == a.flags.end()) user_error("missing required flag --" + key);
    return it->second;
}

std::uint64_t flag_u64(const Args& a, const std::string& key,
                       std::uint64_t fallback) {
    auto it = a.flags.find(key);
    if (it == a.flags.end()) return fallback;
    try {
        std::size_t used = 0;
        std::uint64_t v = std::stoull(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        user_error("flag --" + key + " wants a number, got " + it->second);
    }
}

const std::string& group_arg(const Args& a) {
    if (a.positional.size() != 1)
        user_error(a.command + " expects exactly one group name");
    return a.positional.front();
}

const CatalogEntry& entry_for(const std::vector<CatalogEntry>& entries,
                              const std::string& name) {
    const CatalogEntry* e = find_entry(entries, name);
    if (e == nullptr) user_error("unknown group: " + name);
    return *e;
}

std::size_t class_by_label(const PermGroup& G, const std::string& group,
                           const std::string& label) {
    const auto& cls = conjugacy_classes(G);
    for (std::size_t i = 0; i < cls.size(); ++i)
        if (cls[i].label().str() == label) return i;
    user_error("unknown class " + label + " for " + group + "; run `probgen classes " +
               group + "` to list the canonical labels");
}

int cmd_classes(const Args& a) {
    auto entries = load_catalog(catalog_path(a));
    PermGroup G = build_group(entry_for(entries, group_arg(a)));
    std::vector<std::vector<std::string>> rows;
    for (const ConjugacyClass& c : conjugacy_classes(G))
        rows.push_back({c.label().str(), std::to_string(c.element_order()),
                        std::to_string(c.size()),
                        std::to_string(c.centralizer_order())});
    std::cout << render_table(rows);
    return 0;
}

int cmd_sigma(const Args& a) {
    auto entries = load_catalog(catalog_path(a));
    const std::string& name = group_arg(a);
    const CatalogEntry& e = entry_for(entries, name);
    if (e.subgroups.empty()) user_error(name + " carries no maximal subgroup data");
    PermGroup G = build_group(e);
    std::size_t s = class_by_label(G, name, flag_value(a, "s"));
    std::vector<PermGroup> maxes = resolve_all_subgroups(G, e);

    PermGroup socle;
    const PermGroup* socle_ptr = nullptr;
    auto outer = a.flags.find("outer");
    if (outer != a.flags.end()) {
        socle = build_group(entry_for(entries, outer->second));
        if (!G.is_subgroup(socle))
            user_error(outer->second + " is not a subgroup of " + name +
                       " on the bundled domain");
        socle_ptr = &socle;
    }

    Rational value = sigma_from_maxes(G, s, maxes, socle_ptr);
    const auto& cls = conjugacy_classes(G);
    std::cout << (socle_ptr ? "sigma'" : "sigma") << "(" << name << ", "
              << cls[s].label().str() << ") = " << value.str() << "\n";

    std::vector<PermChar> chars;
    chars.reserve(maxes.size());
    for (const PermGroup& m : maxes) chars.push_back(permutation_character(G, m));
    SigmaVector psi = approx_p(chars, s);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < cls.size(); ++i)
        rows.push_back({cls[i].label().str(), psi.values[i].str()});
    std::cout << render_table(rows);
    return 0;
}

int cmd_info(const Args& a) {
    auto entries = load_catalog(catalog_path(a));
    ReportRow row = report_row(entries, group_arg(a));
    std::cout << render_table({report_cells(row, a.flags.count("timings") != 0)});
    return 0;
}

int cmd_nongen(const Args& a) {
    auto entries = load_catalog(catalog_path(a));
    const std::string& name = group_arg(a);
    PermGroup G = build_group(entry_for(entries, name));
    const auto& cls = conjugacy_classes(G);
    const Permutation& g = cls[class_by_label(G, name, flag_value(a, "g"))].representative();
    const Permutation& s = cls[class_by_label(G, name, flag_value(a, "s"))].representative();
    std::cout << ratio_of_nongeneration(G, g, s).str() << "\n";
    return 0;
}

// All K-multisets of nonidentity classes are certified: a multiset whose
// sigma bounds sum below 1 needs no sampling (a common good conjugate of s
// exists for every member choice); the rest are checked tuple by tuple over
// orbit representatives of the class product.
int cmd_spread(const Args& a) {
    auto entries = load_catalog(catalog_path(a));
    const std::string& name = group_arg(a);
    const CatalogEntry& e = entry_for(entries, name);
    PermGroup G = build_group(e);
    const auto& cls = conjugacy_classes(G);
    std::size_t s_idx = class_by_label(G, name, flag_value(a, "s"));
    const Permutation& s = cls[s_idx].representative();
    std::uint64_t k = flag_u64(a, "k", 2);
    std::uint64_t tries = flag_u64(a, "tries", 50);
    std::uint64_t seed = flag_u64(a, "seed", kDefaultSeed);
    if (k == 0) user_error("--k must be positive");

    std::vector<PermGroup> maxes = resolve_all_subgroups(G, e);
    SigmaVector psi;
    if (!maxes.empty()) {
        std::vector<PermChar> chars;
        chars.reserve(maxes.size());
        for (const PermGroup& m : maxes)
            chars.push_back(permutation_character(G, m));
        psi = approx_p(chars, s_idx);
    }

    std::cout << "spread " << name << " k=" << k << " s="
              << cls[s_idx].label().str() << " tries=" << tries
              << " seed=" << seed << "\n";

    // enumerate multisets i1 <= i2 <= ... <= ik of nonidentity class indices
    std::vector<std::size_t> pick(k, 1);
    std::uint64_t total = 0, bounded = 0;
    bool all_good = true;
    std::vector<std::string> lines;
    for (;;) {
        ++total;
        Rational sum(0);
        if (!psi.values.empty())
            for (std::size_t i : pick) sum += psi.values[i];
        bool analytic = !psi.values.empty() && sum < Rational(1);
        if (analytic) {
            ++bounded;
        } else {
            std::vector<Permutation> reps;
            std::vector<std::string> labels;
            for (std::size_t i : pick) {
                reps.push_back(cls[i].representative());
                labels.push_back(cls[i].label().str());
            }
            SpreadCertificate cert =
                random_check_uniform_spread(G, reps, s, tries, seed);
            std::string line = comma_list(labels) + ": ";
            if (cert.success) {
                std::uint64_t worst = 0, draws = 0;
                for (std::uint64_t t : cert.trials_used) {
                    worst = std::max(worst, t);
                    draws += t;
                }
                line += "success (orbit reps " +
                        std::to_string(cert.trials_used.size()) +
                        ", max trials " + std::to_string(worst) +
                        ", total draws " + std::to_string(draws) + ")";
            } else {
                line += "FAILED";
                all_good = false;
            }
            lines.push_back(std::move(line));
        }
        // next multiset
        std::size_t pos = k;
        while (pos > 0 && pick[pos - 1] == cls.size() - 1) --pos;
        if (pos == 0) break;
        std::size_t v = ++pick[pos - 1];
        for (std::size_t j = pos; j < k; ++j) pick[j] = v;
    }
    std::cout << "tuples: " << total << " total, " << bounded
              << " bounded by sigma, " << lines.size() << " randomized\n";
    for (const std::string& l : lines) std::cout << l << "\n";
    std::cout << "outcome: " << (all_good ? "success" : "failure") << "\n";
    return all_good ? 0 : 1;
}

int cmd_report(const Args& a) {
    if (!a.positional.empty()) user_error("report takes flags only");
    std::string suite = flag_value(a, "suite");
    if (suite != "paper-small") user_error("unknown suite: " + suite);
    std::string format = "text";
    if (auto it = a.flags.find("format"); it != a.flags.end()) format = it->second;
    if (format != "text" && format != "records")
        user_error("unknown format: " + format);
    bool timings = a.flags.count("timings") != 0;

    auto entries = load_catalog(catalog_path(a));
    std::vector<ReportRow> rows;
    for (const std::string& name : paper_small_suite())
        rows.push_back(report_row(entries, name));

    if (format == "records") {
        for (const ReportRow& r : rows) std::cout << report_record(r, timings) << "\n";
    } else {
        std::vector<std::vector<std::string>> cells;
        for (const ReportRow& r : rows) cells.push_back(report_cells(r, timings));
        std::cout << render_table(cells);
    }
    return 0;
}

int run(int argc, char** argv) {
    Args a = parse_args(argc, argv);
    if (a.command == "help" || a.command == "--help" || a.flags.count("help")) {
        std::cout << kUsage;
        return 0;
    }
    if (a.command == "classes") return cmd_classes(a);
    if (a.command == "sigma") return cmd_sigma(a);
    if (a.command == "info") return cmd_info(a);
    if (a.command == "nongen") return cmd_nongen(a);
    if (a.command == "spread") return cmd_spread(a);
    if (a.command == "report") return cmd_report(a);
    user_error("unknown command: " + a.command);
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::User: return 2;
            case ErrorKind::Ceiling: return 3;
            case ErrorKind::Internal: return 4;
        }
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
