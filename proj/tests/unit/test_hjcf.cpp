#include "cqs/hjcf.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <numeric>

using namespace cqs;

TEST_CASE("hj_expand of 19/7") {
    CHECK(hj_expand(Fraction(19, 7)) == Chain{3, 4, 2});
    CHECK(hj_expand(Fraction(4, 1)) == Chain{4});
    CHECK(hj_expand(Fraction(5, 4)) == Chain{2, 2, 2, 2});
}

TEST_CASE("hj_expand agrees with the continued fraction value") {
    for (std::int64_t n = 2; n <= 120; ++n)
        for (std::int64_t a = 1; a < n; ++a) {
            if (std::gcd(n, a) != 1) continue;
            auto c = hj_expand(Fraction(n, a));
            for (auto b : c) REQUIRE(b >= 2);
            auto [p, q] = oracle::chain_value(c);
            REQUIRE(p == n);
            REQUIRE(q == a);
            auto v = hj_eval(c);
            REQUIRE(v.p == n);
            REQUIRE(v.q == a);
        }
}

TEST_CASE("hj_eval handles zero and infinity") {
    CHECK(hj_eval({1, 1}).is_zero());
    CHECK(hj_eval({}).is_infinite());
    CHECK(hj_eval({2, 1}) == ProjectiveValue{1, 1});
}

TEST_CASE("dual fraction") {
    CHECK(dual(Fraction(19, 7)) == Fraction(19, 12));
    CHECK(hj_expand(dual(Fraction(19, 7))) == Chain{2, 3, 2, 3});
}

TEST_CASE("fraction validation") {
    CHECK_THROWS_AS(Fraction(4, 2), std::invalid_argument);
    CHECK_THROWS_AS(Fraction(3, 3), std::invalid_argument);
    CHECK_THROWS_AS(Fraction(3, 0), std::invalid_argument);
}

TEST_CASE("zero continued fractions are counted by Catalan numbers") {
    CHECK(zero_fractions(1).empty());
    for (int e = 2; e <= 8; ++e) {
        auto z = zero_fractions(e);
        CHECK(static_cast<std::int64_t>(z.size()) == oracle::catalan(e - 1));
        for (const auto& c : z) {
            CHECK(c.size() == static_cast<std::size_t>(e));
            CHECK(oracle::chain_value(c).first == 0);
            CHECK(is_admissible(c));
        }
    }
}

TEST_CASE("admissibility") {
    CHECK(is_admissible({1, 2, 2, 1}));
    CHECK(is_admissible({2, 3}));
    CHECK_FALSE(is_admissible({1, 1, 1}));
    CHECK_FALSE(is_admissible({0, 0}));
}

TEST_CASE("k-sequences of 1/19(1,7)") {
    auto ks = k_of_x(Fraction(19, 7));
    std::set<Chain> got(ks.begin(), ks.end());
    CHECK(got == std::set<Chain>{{1, 2, 2, 1}, {1, 3, 1, 2}, {2, 2, 1, 3}});
}

TEST_CASE("k-sequences are bounded zero continued fractions") {
    for (std::int64_t n = 3; n <= 30; ++n)
        for (std::int64_t a = 1; a < n - 1; ++a) {
            if (std::gcd(n, a) != 1) continue;
            Chain bound = hj_expand(dual(Fraction(n, a)));
            for (const auto& k : k_of_x(Fraction(n, a))) {
                REQUIRE(k.size() == bound.size());
                for (std::size_t i = 0; i < k.size(); ++i) REQUIRE((1 <= k[i] && k[i] <= bound[i]));
                REQUIRE(oracle::chain_value(k).first == 0);
            }
        }
}

TEST_CASE("blow up and blow down") {
    CHECK(blow_up({2, 3}, 1) == Chain{3, 1, 4});
    CHECK(blow_up({2, 3}, 0) == Chain{1, 3, 3});
    CHECK(blow_down_at({3, 1, 4}, 1) == Chain{2, 3});
    CHECK(blow_down({3, 1, 4}) == Chain{2, 3});
    CHECK(blow_down({1, 1}) == Chain{0});
    CHECK_THROWS_AS(blow_down_at({3, 2}, 1), std::invalid_argument);
}
