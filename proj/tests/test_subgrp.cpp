#include <catch2/catch_amalgamated.hpp>

#include "probgen/subgrp.hpp"

#include "oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

using namespace probgen;

namespace {

PermGroup A5() {
    return PermGroup::from_strings({"(1,2,3,4,5)", "(3,4,5)"});
}

PermGroup S4() {
    return PermGroup::from_strings({"(1,2,3,4)", "(1,2)"});
}

PermGroup S6() {
    return PermGroup::from_strings({"(1,2,3,4,5,6)", "(1,2)"});
}

PermGroup S7() {
    return PermGroup::from_strings({"(1,2,3,4,5,6,7)", "(1,2)"});
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

bool is_p_group(const PermGroup& g, std::uint64_t p) {
    for (const auto& x : g.generators())
        if (p_part(x.order(), p) != x.order()) return false;
    return true;
}

} // namespace

TEST_CASE("sylow subgroup orders") {
    std::vector<std::tuple<PermGroup, std::uint64_t, std::uint64_t>> cases = {
        {A5(), 2, 4},  {A5(), 3, 3},  {A5(), 5, 5},   {M11(), 2, 16},
        {M11(), 3, 9}, {M11(), 11, 11}, {M12(), 2, 64}, {M12(), 3, 27},
        {S7(), 7, 7},  {S7(), 2, 16},
    };
    for (auto& [g, p, expect] : cases) {
        PermGroup s = sylow_subgroup(g, p);
        CHECK(s.order() == expect);
        CHECK(is_p_group(s, p));
        CHECK(g.is_subgroup(s));
    }
    CHECK(sylow_subgroup(A5(), 13).order() == 1);
    CHECK_THROWS_AS(sylow_subgroup(A5(), 4), Error);
}

TEST_CASE("sylow construction is deterministic per group") {
    PermGroup g = M12();
    PermGroup a = sylow_subgroup(g, 2);
    PermGroup b = sylow_subgroup(g, 2);
    REQUIRE(a.generators().size() == b.generators().size());
    for (std::size_t i = 0; i < a.generators().size(); ++i)
        CHECK(a.generators()[i] == b.generators()[i]);
}

TEST_CASE("normalizers") {
    PermGroup a5 = A5();
    CHECK(normalizer(a5, a5).order() == 60);

    PermGroup n5 = normalizer(a5, sylow_subgroup(a5, 5));
    CHECK(n5.order() == 10);

    PermGroup m11 = M11();
    PermGroup n3 = normalizer(m11, sylow_subgroup(m11, 3));
    CHECK(n3.order() == 144);
    CHECK(m11.order() / n3.order() == 55);

    // brute-force agreement on assorted subgroups of S4 and A5
    for (const PermGroup& g : {S4(), A5()}) {
        auto elems = oracle::closure(g.generators());
        std::vector<PermGroup> subs = {
            PermGroup::from_strings({"(1,2)(3,4)"}),
            PermGroup::from_strings({"(1,2,3)"}),
            PermGroup::from_strings({"(1,2)(3,4)", "(1,3)(2,4)"}),
            sylow_subgroup(g, 2),
        };
        for (const PermGroup& s : subs) {
            if (!g.is_subgroup(s)) continue;
            std::uint64_t expect =
                oracle::normalizer_order(elems, oracle::closure(s.generators()));
            CHECK(normalizer(g, s).order() == expect);
        }
    }

    CHECK_THROWS_AS(normalizer(A5(), PermGroup::from_strings({"(1,2)"})), Error);
}

TEST_CASE("double coset extremes") {
    PermGroup g = A5();
    auto whole = double_coset_reps_and_sizes(g, g, g);
    REQUIRE(whole.size() == 1);
    CHECK(whole[0].size == 60);

    PermGroup triv;
    auto singles = double_coset_reps_and_sizes(g, triv, triv);
    CHECK(singles.size() == 60);
    for (const auto& dc : singles) CHECK(dc.size == 1);
}

TEST_CASE("double cosets match the brute-force partition") {
    PermGroup a5 = A5();
    auto elems = oracle::closure(a5.generators());

    PermGroup A = centralizer(a5, parse_permutation("(1,2)(3,4)"));
    PermGroup B = centralizer(a5, parse_permutation("(1,2,3,4,5)"));
    REQUIRE(A.order() == 4);
    REQUIRE(B.order() == 5);

    std::vector<std::pair<PermGroup, PermGroup>> cases = {
        {A, B},
        {B, A},
        {PermGroup::from_strings({"(1,2,3)"}), A},
        {a5.point_stabilizer(0), B},
        {a5.point_stabilizer(0), a5.point_stabilizer(1)},
    };
    for (const auto& [X, Y] : cases) {
        auto mine = double_coset_reps_and_sizes(a5, X, Y);
        std::vector<std::uint64_t> sizes;
        std::uint64_t total = 0;
        for (const auto& dc : mine) {
            sizes.push_back(dc.size);
            total += dc.size;
            CHECK(a5.contains(dc.representative));
        }
        CHECK(total == 60);
        std::sort(sizes.begin(), sizes.end());
        CHECK(sizes == oracle::double_coset_sizes(
                           elems, oracle::closure(X.generators()),
                           oracle::closure(Y.generators())));
    }
}

TEST_CASE("double coset membership is stable under the factors") {
    PermGroup g = S4();
    PermGroup A = g.point_stabilizer(0);
    PermGroup B = PermGroup::from_strings({"(1,2,3)"});
    auto parts = double_coset_reps_and_sizes(g, A, B);

    CosetSpace cosets(g, A);
    std::vector<std::set<Point>> orbits;
    std::vector<Permutation> bimg;
    for (const auto& b : B.generators()) bimg.push_back(cosets.image_of(b));
    for (const auto& dc : parts) {
        PointOrbit orb = orbit_of_point(bimg, cosets.point_of(dc.representative),
                                        static_cast<Point>(cosets.size()));
        orbits.emplace_back(orb.elements.begin(), orb.elements.end());
    }
    auto part_of = [&](const Permutation& x) {
        Point pt = cosets.point_of(x);
        std::size_t hit = orbits.size();
        for (std::size_t i = 0; i < orbits.size(); ++i)
            if (orbits[i].count(pt)) {
                CHECK(hit == orbits.size()); // exactly one part
                hit = i;
            }
        REQUIRE(hit < orbits.size());
        return hit;
    };
    detail::ProductReplacer wa = A.task_walker(7);
    detail::ProductReplacer wb = B.task_walker(7);
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (int t = 0; t < 10; ++t)
            CHECK(part_of(wa.draw() * parts[i].representative * wb.draw()) == i);
}

TEST_CASE("prime-order class representatives") {
    PermGroup a5 = A5();
    auto cls = classes_of_prime_order(a5, {2, 3, 5}, PermGroup());
    std::vector<std::uint64_t> orders, sizes;
    for (const auto& c : cls) {
        orders.push_back(c.element_order());
        sizes.push_back(c.size());
    }
    CHECK(orders == std::vector<std::uint64_t>{2, 3, 5, 5});
    CHECK(sizes == std::vector<std::uint64_t>{15, 20, 12, 12});

    PermGroup s6 = S6();
    PermGroup a6 = PermGroup::from_strings({"(1,2,3,4,5)", "(4,5,6)"});
    CHECK(classes_of_prime_order(a6, {2}, a6).empty());

    auto odd2 = classes_of_prime_order(s6, {2}, a6);
    REQUIRE(odd2.size() == 2);
    for (const auto& c : odd2) {
        CHECK(c.element_order() == 2);
        CHECK(c.size() == 15);
        CHECK_FALSE(a6.contains(c.representative()));
    }

    // brute-force filter agreement on S4 with N = V4
    PermGroup s4 = S4();
    PermGroup v4 = PermGroup::from_strings({"(1,2)(3,4)", "(1,3)(2,4)"});
    auto got = classes_of_prime_order(s4, {2, 3}, v4);
    std::multiset<std::pair<std::uint64_t, std::uint64_t>> mine, brute;
    for (const auto& c : got) mine.insert({c.element_order(), c.size()});
    auto v4e = oracle::closure(v4.generators());
    for (const auto& cls : oracle::conjugacy_classes(oracle::closure(s4.generators()))) {
        std::uint64_t ord = cls.front().order();
        if ((ord != 2 && ord != 3) || oracle::contains(v4e, cls.front())) continue;
        brute.insert({ord, cls.size()});
    }
    CHECK(mine == brute);

    CHECK_THROWS_AS(
        classes_of_prime_order(s4, {2}, PermGroup::from_strings({"(1,2)"})), Error);
}
