#include <catch2/catch_amalgamated.hpp>

#include "probgen/catalog.hpp"
#include "probgen/classes.hpp"
#include "probgen/subgrp.hpp"

#include <cstdio>
#include <functional>
#include <filesystem>
#include <fstream>
#include <set>

using namespace probgen;

namespace {

std::string bundled_path() { return PROBGEN_CATALOG_PATH; }

// writes `text` to a fresh temp file and returns the path
class TempCatalog {
  public:
    explicit TempCatalog(const std::string& text) {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 ("probgen_cat_test_" + std::to_string(++counter) + ".txt"))
                    .string();
        std::ofstream out(path_);
        out << text;
    }
    ~TempCatalog() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

std::string error_text(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("bundled catalog parses and lists the shipped groups") {
    auto entries = load_catalog(bundled_path());
    std::set<std::string> names;
    for (const auto& e : entries) names.insert(e.name);
    for (const char* want :
         {"A5", "A6", "A7", "A8", "A9", "S5", "S6", "S7", "L3(2)", "L2(11)",
          "M11", "M12", "U4(2)", "S6(2)", "O8+(2)"})
        CHECK(names.count(want) == 1);

    // socle links used by the almost-simple machinery
    CHECK(socle_entry_for(entries, "S5")->name == "A5");
    CHECK(socle_entry_for(entries, "S6")->name == "A6");
    CHECK(socle_entry_for(entries, "S7")->name == "A7");
}

TEST_CASE("an empty catalog file is an empty list") {
    TempCatalog empty("");
    CHECK(load_catalog(empty.path()).empty());
    TempCatalog header_only("probgen-catalog 1\n");
    CHECK(load_catalog(header_only.path()).empty());
}

TEST_CASE("catalog parse errors carry the file position") {
    TempCatalog no_header("[group A5]\norder = 60\n");
    CHECK(error_text([&] { load_catalog(no_header.path()); }).find(":1:") !=
          std::string::npos);

    TempCatalog junk_line("probgen-catalog 1\n[group X]\norder = 60\nwat\n");
    CHECK(error_text([&] { load_catalog(junk_line.path()); }).find(":4:") !=
          std::string::npos);

    TempCatalog dup(
        "probgen-catalog 1\n"
        "[group X]\norder = 60\ndegree = 5\ngens = (1,2,3,4,5) (3,4,5)\n"
        "[group X]\norder = 60\ndegree = 5\ngens = (1,2,3,4,5) (3,4,5)\n");
    CHECK(error_text([&] { load_catalog(dup.path()); }).find("duplicate") !=
          std::string::npos);

    TempCatalog dup_max(
        "probgen-catalog 1\n"
        "[group X]\norder = 60\ndegree = 5\ngens = (1,2,3,4,5) (3,4,5)\n"
        "[max A]\nrecipe = point_stabilizer(1)\n"
        "[max A]\nrecipe = point_stabilizer(2)\n");
    CHECK(error_text([&] { load_catalog(dup_max.path()); }).find("duplicate") !=
          std::string::npos);

    TempCatalog bad_recipe(
        "probgen-catalog 1\n"
        "[group X]\norder = 60\ndegree = 5\ngens = (1,2,3,4,5) (3,4,5)\n"
        "[max A]\nrecipe = frobnicate(7)\n");
    CHECK(error_text([&] { load_catalog(bad_recipe.path()); }).find(":7:") !=
          std::string::npos);

    TempCatalog bad_gen(
        "probgen-catalog 1\n"
        "[group X]\norder = 60\ndegree = 5\ngens = (1,2,3,4,5) (3,4\n");
    CHECK(error_text([&] { load_catalog(bad_gen.path()); })
              .find("bad generator") != std::string::npos);
}

TEST_CASE("declared order is a hard check when the group is built") {
    TempCatalog wrong(
        "probgen-catalog 1\n"
        "[group X]\norder = 61\ndegree = 5\ngens = (1,2,3,4,5) (3,4,5)\n");
    auto entries = load_catalog(wrong.path()); // parsing is lazy, no error yet
    REQUIRE(entries.size() == 1);
    std::string msg = error_text([&] { build_group(entries[0]); });
    CHECK(msg.find("61") != std::string::npos);
    CHECK(msg.find("60") != std::string::npos);
}

TEST_CASE("U4(2) builds on its 40-point orbit") {
    auto entries = load_catalog(bundled_path());
    const CatalogEntry* e = find_entry(entries, "U4(2)");
    REQUIRE(e != nullptr);
    REQUIRE(e->matrices.has_value());

    // the full projective action splits 85 = 45 + 40
    auto pts = projective_points(e->matrices->q, e->matrices->dim);
    REQUIRE(pts.size() == 85);
    std::vector<Permutation> perms;
    for (const Matrix& m : e->matrices->gens)
        perms.push_back(projective_permutation(m, pts));
    std::multiset<std::size_t> lens;
    for (const auto& orb : PermGroup(perms).orbits()) lens.insert(orb.size());
    CHECK(lens == std::multiset<std::size_t>{45, 40});

    PermGroup G = build_group(*e);
    CHECK(G.degree() == 40);
    CHECK(G.order() == 25920);
}

TEST_CASE("O8+(2) builds on its 120-point orbit") {
    auto entries = load_catalog(bundled_path());
    const CatalogEntry* e = find_entry(entries, "O8+(2)");
    REQUIRE(e != nullptr);
    PermGroup G = build_group(*e);
    CHECK(G.degree() == 120);
    CHECK(G.order() == 174182400);
}

TEST_CASE("group construction is deterministic") {
    auto entries = load_catalog(bundled_path());
    const CatalogEntry* e = find_entry(entries, "U4(2)");
    PermGroup a = build_group(*e);
    PermGroup b = build_group(*e);
    REQUIRE(a.generators().size() == b.generators().size());
    for (std::size_t i = 0; i < a.generators().size(); ++i)
        CHECK(a.generators()[i] == b.generators()[i]);
}

TEST_CASE("single recipes resolve to their published orders") {
    auto entries = load_catalog(bundled_path());

    PermGroup A5 = build_group(*find_entry(entries, "A5"));
    SubgroupRecipe syl5;
    syl5.kind = SubgroupRecipe::Kind::SylowNormalizer;
    syl5.prime = 5;
    CHECK(resolve_subgroup(A5, syl5).order() == 10);

    PermGroup M11 = build_group(*find_entry(entries, "M11"));
    SubgroupRecipe stab;
    stab.kind = SubgroupRecipe::Kind::PointStabilizer;
    stab.point = 0;
    CHECK(resolve_subgroup(M11, stab).order() == 720);

    for (const SubgroupSpec& s : find_entry(entries, "M11")->subgroups)
        if (s.label == "L2(11)") {
            PermGroup L = resolve_subgroup(M11, s.recipe);
            CHECK(L.order() == 660);
            CHECK(M11.order() / L.order() == 12);
        }
}

TEST_CASE("every bundled recipe resolves with its declared order") {
    auto entries = load_catalog(bundled_path());
    for (const CatalogEntry& e : entries) {
        PermGroup G = build_group(e);
        CHECK(G.order() == e.declared_order);
        for (const SubgroupSpec& s : e.subgroups) {
            INFO(e.name << " / " << s.label);
            REQUIRE(s.recipe.declared_order != 0);
            PermGroup S = resolve_subgroup(G, s.recipe);
            CHECK(S.order() == s.recipe.declared_order);
            CHECK(G.is_subgroup(S));
        }
    }
}

TEST_CASE("frobenius additivity holds in every supported field") {
    for (unsigned q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
        const Field& F = gf(q);
        unsigned p = F.characteristic();
        for (unsigned a = 0; a < q; ++a)
            for (unsigned b = 0; b < q; ++b) {
                unsigned lhs = F.add(a, b);
                for (unsigned k = 1; k < p; ++k) lhs = F.mul(lhs, F.add(a, b));
                unsigned ap = a, bp = b;
                for (unsigned k = 1; k < p; ++k) {
                    ap = F.mul(ap, a);
                    bp = F.mul(bp, b);
                }
                CHECK(lhs == F.add(ap, bp));
            }
    }
}

TEST_CASE("projective normalization ignores scalar factors") {
    for (unsigned q : {2u, 3u, 4u, 5u}) {
        const Field& F = gf(q);
        auto pts = projective_points(q, 3);
        for (const auto& v : pts)
            for (unsigned lambda = 1; lambda < q; ++lambda) {
                std::vector<unsigned> w(v.size());
                for (std::size_t i = 0; i < v.size(); ++i)
                    w[i] = F.mul(v[i], lambda);
                CHECK(normalize_projective(F, w) == v);
            }
    }
}

TEST_CASE("class data of catalog-built groups matches published values") {
    auto entries = load_catalog(bundled_path());

    SECTION("U4(2) class orders") {
        PermGroup G = build_group(*find_entry(entries, "U4(2)"));
        const auto& cls = conjugacy_classes(G);
        std::vector<std::uint64_t> orders;
        for (const auto& c : cls) orders.push_back(c.element_order());
        CHECK(orders == std::vector<std::uint64_t>{1, 2, 2, 3, 3, 3, 3, 4, 4, 5,
                                                   6, 6, 6, 6, 6, 6, 9, 9, 12,
                                                   12});
    }

    SECTION("U4(2) cube of the first order-9 class") {
        PermGroup G = build_group(*find_entry(entries, "U4(2)"));
        const auto& cls = conjugacy_classes(G);
        std::size_t nine = 0;
        while (cls[nine].element_order() != 9) ++nine;
        auto pm = power_map(G, 3);
        const auto& target = cls[pm[nine]];
        CHECK(target.element_order() == 3);
        CHECK(target.size() == 40);
    }

    SECTION("M12 classes matched by order and size") {
        PermGroup G = build_group(*find_entry(entries, "M12"));
        const auto& cls = conjugacy_classes(G);
        std::uint64_t size10A = 0;
        for (const auto& c : cls)
            if (c.element_order() == 10) size10A = c.size();
        REQUIRE(size10A != 0);
        auto hits = classes_matching_profile(G, {{10, size10A}});
        REQUIRE(hits.size() == 1);
        CHECK(hits[0].element_order() == 10);
        CHECK(hits[0].size() == size10A);
    }
}

TEST_CASE("S6(2) class and sylow data matches published values", "[slow]") {
    auto entries = load_catalog(bundled_path());
    PermGroup G = build_group(*find_entry(entries, "S6(2)"));

    CHECK(sylow_subgroup(G, 2).order() == 512);

    const auto& cls = conjugacy_classes(G);
    bool found = false;
    for (const auto& c : cls)
        if (c.label().str() == "12C") {
            found = true;
            CHECK(G.order() / c.size() == 12);
            CHECK(centralizer(G, c.representative()).order() == 12);
        }
    CHECK(found);
}
