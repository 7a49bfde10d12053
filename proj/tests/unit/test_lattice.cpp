#include "cqs/lattice.hpp"

#include <doctest.h>

#include <numeric>

using namespace cqs;

TEST_CASE("exceptional classes realise the dual graph") {
    for (std::int64_t n = 2; n <= 40; ++n)
        for (std::int64_t a = 1; a < n; ++a) {
            if (std::gcd(n, a) != 1) continue;
            Fraction f(n, a);
            Chain b = hj_expand(f);
            for (std::size_t i = 1; i <= b.size(); ++i)
                for (std::size_t k = 1; k <= b.size(); ++k) {
                    std::int64_t expect = i == k ? -b[i - 1] : (i + 1 == k || k + 1 == i ? 1 : 0);
                    REQUIRE(class_E(f, i).dot(class_E(f, k)) == expect);
                }
        }
}

TEST_CASE("curvettas miss the exceptional curves and meet their last blow-up once") {
    for (auto f : {Fraction(19, 7), Fraction(4, 1), Fraction(31, 12)}) {
        DotLayout layout = DotLayout::of(f);
        for (const auto& d : curvetta_dots(f)) {
            HClass c = class_C(f, d.row, d.pos, 1);
            for (std::size_t i = 1; i <= layout.b.size(); ++i) CHECK(c.dot(class_E(f, i)) == 0);
            HClass last;
            last.e_coeffs[layout.label(d.row, d.pos)] = 1;
            CHECK(c.dot(last) == 1);
        }
    }
}

TEST_CASE("C_j = A_1 + ... + A_j up to multiples of l") {
    for (std::int64_t n = 2; n <= 40; ++n)
        for (std::int64_t a = 1; a < n; ++a) {
            if (std::gcd(n, a) != 1) continue;
            auto rep = verify_c_equals_sum_a(Fraction(n, a));
            REQUIRE(rep.ok);
            REQUIRE_FALSE(rep.failing);
        }
}

TEST_CASE("class arithmetic and rendering") {
    HClass x;
    x.l_coeff = 2;
    x.e_coeffs = {{1, -1}, {2, -1}};
    HClass y;
    y.l_coeff = 1;
    y.e_coeffs = {{1, -1}};
    CHECK(x.dot(y) == 1);
    CHECK(x.dot(x) == 2);
    CHECK((x - y).render() == "l - e2");
    CHECK((x - x).render() == "0");
    CHECK(shared_base_points(x, y) == 1);
}

TEST_CASE("dot layout of [3,4,2]") {
    auto d = DotLayout::of(Fraction(19, 7));
    CHECK(d.b == Chain{3, 4, 2});
    CHECK(d.column_labels.size() == 4);
    CHECK(d.extra == 7);
    CHECK_THROWS_AS(d.label(4, 0), std::out_of_range);
    CHECK_THROWS_AS(class_E(Fraction(19, 7), 4), std::out_of_range);
}
