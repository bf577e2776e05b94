#include <catch2/catch_amalgamated.hpp>

#include "probgen/classes.hpp"

#include "oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

using namespace probgen;

namespace {

PermGroup A5(std::uint64_t seed = kDefaultSeed) {
    return PermGroup(PermGroup::from_strings({"(1,2,3,4,5)", "(3,4,5)"}).generators(),
                     seed);
}

PermGroup A6() {
    return PermGroup::from_strings({"(1,2,3,4,5)", "(4,5,6)"});
}

PermGroup A7() {
    return PermGroup::from_strings({"(1,2,3,4,5,6,7)", "(5,6,7)"});
}

PermGroup S4() {
    return PermGroup::from_strings({"(1,2,3,4)", "(1,2)"});
}

PermGroup M11() {
    return PermGroup::from_strings(
        {"(2,10)(4,11)(5,7)(8,9)", "(1,4,3,8)(2,5,6,9)"}, 11);
}

PermGroup M12() {
    return PermGroup::from_strings({"(1,2,3,4,5,6,7,8,9,10,11)",
                                    "(3,7,11,8)(4,10,5,6)",
                                    "(1,12)(2,11)(3,6)(4,8)(5,9)(7,10)"});
}

std::vector<std::uint64_t> class_orders(const PermGroup& g) {
    std::vector<std::uint64_t> out;
    for (const auto& c : conjugacy_classes(g)) out.push_back(c.element_order());
    return out;
}

std::vector<std::uint64_t> class_sizes(const PermGroup& g) {
    std::vector<std::uint64_t> out;
    for (const auto& c : conjugacy_classes(g)) out.push_back(c.size());
    return out;
}

// Match the computed list against the brute-force partition: same number of
// classes, and each brute class is exactly one computed class (membership,
// size, and the lexicographically-least representative).
void check_against_oracle(const PermGroup& g) {
    auto mine = conjugacy_classes(g);
    auto brute = oracle::conjugacy_classes(oracle::closure(g.generators()));
    REQUIRE(mine.size() == brute.size());
    std::set<std::size_t> used;
    for (const auto& cls : brute) {
        auto idx = find_class_index(mine, cls.front());
        REQUIRE(idx.has_value());
        CHECK(used.insert(*idx).second);
        CHECK(mine[*idx].size() == cls.size());
        for (const auto& x : cls) CHECK(mine[*idx].contains(x));
        auto least = *std::min_element(cls.begin(), cls.end());
        CHECK(mine[*idx].representative() == least);
    }
}

} // namespace

TEST_CASE("class list of A5 in canonical order") {
    PermGroup g = A5();
    const auto& cls = conjugacy_classes(g);
    CHECK(class_orders(g) == std::vector<std::uint64_t>{1, 2, 3, 5, 5});
    CHECK(class_sizes(g) == std::vector<std::uint64_t>{1, 15, 20, 12, 12});
    std::vector<std::string> labels;
    for (const auto& c : cls) labels.push_back(c.label().str());
    CHECK(labels == std::vector<std::string>{"1A", "2A", "3A", "5A", "5B"});
    std::uint64_t total = 0;
    for (const auto& c : cls) {
        total += c.size();
        CHECK(c.size() * c.centralizer_order() == 60);
        CHECK(c.contains(c.representative()));
    }
    CHECK(total == 60);
}

TEST_CASE("class lists match the brute-force partition") {
    check_against_oracle(A5());
    check_against_oracle(S4());
    check_against_oracle(PermGroup::from_strings({"(1,2,3,4,5)", "(2,5)(3,4)"}));
}

TEST_CASE("canonical class order does not depend on the sampling seed") {
    PermGroup a = A5(1);
    PermGroup b = A5(99);
    const auto& ca = conjugacy_classes(a);
    const auto& cb = conjugacy_classes(b);
    REQUIRE(ca.size() == cb.size());
    for (std::size_t i = 0; i < ca.size(); ++i) {
        CHECK(ca[i].representative() == cb[i].representative());
        CHECK(ca[i].label().str() == cb[i].label().str());
    }
}

TEST_CASE("M11 class data") {
    PermGroup g = M11();
    CHECK(class_orders(g) ==
          std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 8, 8, 11, 11});
    CHECK(class_sizes(g) == std::vector<std::uint64_t>{1, 165, 440, 990, 1584,
                                                       1320, 990, 990, 720, 720});
}

TEST_CASE("M12 has fifteen classes") {
    PermGroup g = M12();
    const auto& cls = conjugacy_classes(g);
    CHECK(cls.size() == 15);
    std::uint64_t total = 0;
    for (const auto& c : cls) {
        total += c.size();
        CHECK(c.size() * c.centralizer_order() == 95040);
    }
    CHECK(total == 95040);
}

TEST_CASE("centralizers") {
    PermGroup g = A5();
    CHECK(centralizer(g, Permutation()).order() == 60);

    PermGroup a7 = A7();
    for (const auto& c : conjugacy_classes(a7))
        if (c.element_order() == 7) CHECK(c.centralizer_order() == 7);

    // brute-force agreement, including the element sets
    PermGroup s4 = S4();
    auto elems = oracle::closure(s4.generators());
    for (std::size_t i = 0; i < elems.size(); i += 5) {
        auto brute = oracle::centralizer(elems, elems[i]);
        PermGroup c = centralizer(s4, elems[i]);
        REQUIRE(c.order() == brute.size());
        for (const auto& h : brute) CHECK(c.contains(h));
    }

    CHECK_THROWS_AS(centralizer(g, parse_permutation("(1,2)")), Error);
}

TEST_CASE("conjugacy tests with witnesses") {
    PermGroup a6 = A6();
    Permutation x = parse_permutation("(1,2,3)");

    Permutation w;
    CHECK(are_conjugate(a6, x, x, &w));
    CHECK(w == Permutation());

    CHECK_FALSE(are_conjugate(a6, x, parse_permutation("(1,2,3)(4,5,6)")));

    CHECK(are_conjugate(a6, x, parse_permutation("(1,3,2)"), &w));
    CHECK(x.conjugated_by(w) == parse_permutation("(1,3,2)"));

    // distinct moved-point sets go through the set-transversal branch
    CHECK(are_conjugate(a6, x, parse_permutation("(4,5,6)"), &w));
    CHECK(x.conjugated_by(w) == parse_permutation("(4,5,6)"));

    CHECK_THROWS_AS(are_conjugate(a6, x, parse_permutation("(1,2)")), Error);
}

TEST_CASE("conjugacy agrees with brute force on all of S4") {
    PermGroup s4 = S4();
    auto elems = oracle::closure(s4.generators());
    conjugacy_classes(s4); // warm the cache so the no-witness path uses it
    for (const auto& x : elems)
        for (const auto& y : elems) {
            bool expect = oracle::are_conjugate(elems, x, y);
            CHECK(are_conjugate(s4, x, y) == expect);
            Permutation w;
            bool got = are_conjugate(s4, x, y, &w);
            CHECK(got == expect);
            if (got) CHECK(x.conjugated_by(w) == y);
        }
}

TEST_CASE("power maps") {
    PermGroup g = A5();
    const auto n = conjugacy_classes(g).size();
    std::vector<std::size_t> identity(n);
    for (std::size_t i = 0; i < n; ++i) identity[i] = i;
    CHECK(power_map(g, 1) == identity);
    // squaring swaps the two order-5 classes and fixes the rest
    CHECK(power_map(g, 2) == std::vector<std::size_t>{0, 0, 2, 4, 3});

    for (const PermGroup& h : {A6(), M11()}) {
        auto pm2 = power_map(h, 2);
        auto pm3 = power_map(h, 3);
        auto pm6 = power_map(h, 6);
        auto pm4 = power_map(h, 4);
        auto pm5 = power_map(h, 5);
        auto pm20 = power_map(h, 20);
        for (std::size_t i = 0; i < pm2.size(); ++i) {
            CHECK(pm6[i] == pm2[pm3[i]]);
            CHECK(pm20[i] == pm4[pm5[i]]);
        }
    }
}

TEST_CASE("maximally cyclic classes") {
    PermGroup c6 = PermGroup::from_strings({"(1,2,3,4,5,6)"});
    auto kept6 = maximally_cyclic_representatives(c6);
    REQUIRE(kept6.size() == 1);
    CHECK(conjugacy_classes(c6)[kept6[0]].element_order() == 6);

    auto check_orders = [](const PermGroup& g) {
        auto expect = oracle::maximal_cyclic_class_orders(
            oracle::closure(g.generators()));
        std::vector<std::uint64_t> got;
        const auto& cls = conjugacy_classes(g);
        for (auto i : maximally_cyclic_representatives(g))
            got.push_back(cls[i].element_order());
        std::sort(got.begin(), got.end());
        CHECK(got == expect);
        return got;
    };
    CHECK(check_orders(A5()) == std::vector<std::uint64_t>{2, 3, 5});

    auto a7 = A7();
    CHECK(check_orders(a7) == std::vector<std::uint64_t>{3, 4, 5, 6, 7});
    const auto& cls = conjugacy_classes(a7);
    for (auto i : maximally_cyclic_representatives(a7))
        if (cls[i].element_order() == 3) CHECK(cls[i].size() == 280);
}

TEST_CASE("profile filtering") {
    PermGroup g = A5();
    auto both = classes_matching_profile(g, {{5, 12}});
    REQUIRE(both.size() == 2);
    for (const auto& c : both) CHECK(c.element_order() == 5);
    CHECK(classes_matching_profile(g, {{7, 1}}).empty());

    PermGroup m12 = M12();
    std::uint64_t size10 = 0;
    for (const auto& c : conjugacy_classes(m12))
        if (c.element_order() == 10) size10 = c.size();
    REQUIRE(size10 > 0);
    auto hits = classes_matching_profile(m12, {{10, size10}});
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].element_order() == 10);
    CHECK(hits[0].size() == size10);
}
