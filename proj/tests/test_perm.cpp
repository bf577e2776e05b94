#include <catch2/catch_amalgamated.hpp>

#include "probgen/perm.hpp"
#include "probgen/rational.hpp"
#include "probgen/rng.hpp"

#include "oracle.hpp"

using namespace probgen;

TEST_CASE("cycle parsing round-trips") {
    Permutation a = parse_permutation("(2,10)(4,11)(5,7)(8,9)", 11);
    CHECK(a.cycle_string() == "(2,10)(4,11)(5,7)(8,9)");
    CHECK(a.order() == 2);
    CHECK(a.n_moved() == 8);

    Permutation b = parse_permutation("(1,4,3,8)(2,5,6,9)", 11);
    CHECK(b.order() == 4);
    CHECK(b.image(0) == 3); // 1 -> 4, zero-based

    CHECK(parse_permutation("()").is_identity());
    CHECK(parse_permutation("( 1 , 2 ) (4,5)") == parse_permutation("(1,2)(4,5)"));
}

TEST_CASE("cycle parsing rejects bad input") {
    CHECK_THROWS_AS(parse_permutation("(1,2)(2,3)"), Error);   // repeated point
    CHECK_THROWS_AS(parse_permutation("(1,2,3]"), Error);      // malformed
    CHECK_THROWS_AS(parse_permutation("(1,2,12)", 11), Error); // beyond degree
    CHECK_THROWS_AS(parse_permutation("(0,1)"), Error);        // 0 is not a point
    CHECK_THROWS_AS(parse_permutation("(5)"), Error);          // length-1 cycle
    CHECK_THROWS_AS(parse_permutation(""), Error);
}

TEST_CASE("composition applies left factor first") {
    Permutation a = parse_permutation("(1,2)");
    Permutation b = parse_permutation("(2,3)");
    // 1 -> 2 under a, then 2 -> 3 under b.
    CHECK((a * b).image(0) == 2);
    CHECK((a * b).cycle_string() == "(1,3,2)");
    CHECK((b * a).cycle_string() == "(1,2,3)");
}

TEST_CASE("degree padding makes equal permutations equal") {
    Permutation a = parse_permutation("(1,2)", 2);
    Permutation b = parse_permutation("(1,2)", 9);
    CHECK(a == b);
    CHECK(a.key() == b.key());
    Permutation c = parse_permutation("(8,9)");
    CHECK((a * c).cycle_string() == "(1,2)(8,9)");
}

TEST_CASE("inverse, conjugate, power, order") {
    Permutation g = parse_permutation("(1,2,3,4,5)");
    CHECK((g * g.inverse()).is_identity());
    CHECK(g.power(5).is_identity());
    CHECK(g.power(-2) == g.power(3));
    CHECK(g.order() == 5);

    Permutation h = parse_permutation("(1,2)");
    // (1,2,3,4,5) conjugated by (1,2) relabels 1<->2 in the cycle.
    CHECK(g.conjugated_by(h) == parse_permutation("(2,1,3,4,5)"));
    CHECK(g.conjugated_by(h) == h.inverse() * g * h);

    Permutation m = parse_permutation("(1,2)(3,4,5)(6,7,8,9)");
    CHECK(m.order() == 12);
    std::vector<std::uint32_t> want{2, 3, 4};
    CHECK(m.cycle_type() == want);
}

TEST_CASE("lexicographic comparison on padded images") {
    Permutation a = parse_permutation("(1,2)");
    Permutation b = parse_permutation("(2,3)");
    CHECK(b < a);            // images start 1,3,2 vs 2,1,3
    CHECK(Permutation() < a); // identity is least
}

TEST_CASE("rational arithmetic is exact and reduced") {
    Rational r(BigInt(6), BigInt(-8));
    CHECK(r.num() == -3);
    CHECK(r.den() == 4);
    CHECK(r.str() == "-3/4");
    CHECK((Rational(1, 3) + Rational(1, 6)).str() == "1/2");
    CHECK((Rational(21, 40) * Rational(40, 21)).str() == "1");
    CHECK(Rational(334, 315).inverse().floor() == 0);
    CHECK(Rational(3, 1).is_integer());
    CHECK(parse_rational("7/55") == Rational(7, 55));
    CHECK(parse_rational("-2") == Rational(-2));
    CHECK_THROWS_AS(parse_rational("x/y"), Error);
    CHECK_THROWS_AS(Rational(1, 0), Error);
    CHECK(Rational(1, 3) < Rational(2, 5));
}

TEST_CASE("seeded streams are reproducible and split cleanly") {
    SplitMix64 a(42), b(42);
    for (int i = 0; i < 100; ++i) REQUIRE(a.next() == b.next());
    CHECK(derive_stream(42, 1) != derive_stream(42, 2));
    CHECK(derive_stream(42, 1) == derive_stream(42, 1));
    SplitMix64 c(7);
    for (int i = 0; i < 1000; ++i) {
        auto v = c.below(11);
        REQUIRE(v < 11);
    }
}

TEST_CASE("oracle closure agrees with hand counts") {
    auto a5 = std::vector<Permutation>{parse_permutation("(1,2,3,4,5)"),
                                       parse_permutation("(3,4,5)")};
    CHECK(oracle::order(a5) == 60);
    auto s4 = std::vector<Permutation>{parse_permutation("(1,2,3,4)"),
                                       parse_permutation("(1,2)")};
    CHECK(oracle::order(s4) == 24);
}
