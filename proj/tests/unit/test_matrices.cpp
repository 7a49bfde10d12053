#include "cqs/matrices.hpp"
#include "cqs/surface.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <numeric>
#include <set>

using namespace cqs;

namespace {

Matrix rows(std::vector<std::vector<std::int64_t>> r) { return Matrix{std::move(r)}; }

// The three incidence matrices of 1/19(1,7).
const Matrix m1 = rows({{0, 0, 0, 0, 0, 1, 1}, {0, 0, 0, 1, 1, 0, 1}, {0, 0, 1, 0, 1, 0, 1}, {1, 1, 0, 0, 1, 0, 1}});
const Matrix m2 = rows({{0, 0, 0, 0, 1, 1}, {0, 0, 1, 1, 0, 1}, {0, 1, 0, 1, 0, 1}, {1, 1, 1, 0, 0, 1}});
const Matrix m3 = rows({{0, 0, 0, 1, 1}, {0, 1, 1, 0, 1}, {1, 0, 1, 0, 1}, {1, 1, 1, 1, 0}});

const Matrix h1 = rows({{0, 0, 0, 1}, {0, 0, 1, 0}, {0, 0, 0, 0}, {1, 1, 0, 0}});
const Matrix h2 = rows({{0, 0, 1}, {0, 0, 0}, {0, 1, 0}, {1, 0, 0}});
const Matrix h3 = rows({{0, 0}, {0, 1}, {1, 0}, {0, 0}});

const Chain a_19_7{2, 3, 2, 3};

}  // namespace

TEST_CASE("incidence matrices of 1/19(1,7)") {
    auto data = build_sandwiched_cqss(Fraction(19, 7)).data;
    auto ms = enumerate_incidence(data);
    std::set<Matrix> got(ms.begin(), ms.end());
    CHECK(got == std::set<Matrix>{canonical(m1), canonical(m2), canonical(m3)});
    for (const auto& m : {m1, m2, m3}) CHECK(validate_incidence(m, data).ok);
}

TEST_CASE("incidence matrices of 1/4(1,1)") {
    auto ms = enumerate_incidence(build_sandwiched_cqss(Fraction(4, 1)).data);
    std::set<Matrix> got(ms.begin(), ms.end());
    const Matrix minimal = rows({{1, 0, 0, 1}, {0, 1, 0, 1}, {0, 0, 1, 1}});
    const Matrix wahl = rows({{1, 1, 0}, {1, 0, 1}, {0, 1, 1}});
    CHECK(got == std::set<Matrix>{canonical(minimal), canonical(wahl)});
}

TEST_CASE("homology matrices, k-sequences and Milnor numbers of 1/19(1,7)") {
    CHECK(phi_ih_cyclic(m1) == canonical(h1));
    CHECK(phi_ih_cyclic(m2) == canonical(h2));
    CHECK(phi_ih_cyclic(m3) == canonical(h3));
    CHECK(phi_hk(h1, a_19_7) == Chain{1, 2, 2, 1});
    CHECK(phi_hk(h2, a_19_7) == Chain{1, 3, 1, 2});
    CHECK(phi_hk(h3, a_19_7) == Chain{2, 2, 1, 3});
    CHECK(phi_ik(m1, a_19_7) == Chain{1, 2, 2, 1});
    CHECK(phi_ik(m2, a_19_7) == Chain{1, 3, 1, 2});
    CHECK(phi_ik(m3, a_19_7) == Chain{2, 2, 1, 3});
    CHECK(milnor_number(m1) == 3);
    CHECK(milnor_number(m2) == 2);
    CHECK(milnor_number(m3) == 1);
}

TEST_CASE("enumeration agrees with an exhaustive column search") {
    for (std::int64_t n = 2; n <= 11; ++n)
        for (std::int64_t a = 1; a < n; ++a) {
            if (std::gcd(n, a) != 1) continue;
            auto data = build_sandwiched_cqss(Fraction(n, a)).data;
            if (data.size() > 6) continue;
            std::size_t bound = 0;
            for (auto l : data.l) bound += static_cast<std::size_t>(l);
            auto ms = enumerate_incidence(data);
            std::set<Matrix> got(ms.begin(), ms.end());
            CHECK(got.size() == ms.size());
            CHECK(got == oracle::incidence_by_search(data, bound));
        }
}

TEST_CASE("cyclic decorated data follows the free blow-up model") {
    // Curvettas through the free points on E_i and E_k share the first min(i, k)
    // centres of the blow-up sequence, so l = i + 1 and C_i.C_k = min(i, k).
    for (std::int64_t n = 2; n <= 40; ++n)
        for (std::int64_t a = 1; a < n; ++a) {
            if (std::gcd(n, a) != 1) continue;
            auto data = build_sandwiched_cqss(Fraction(n, a)).data;
            for (std::size_t i = 0; i < data.size(); ++i)
                for (std::size_t k = 0; k < data.size(); ++k)
                    if (i != k) REQUIRE(data.inter[i][k] == std::min(data.l[i], data.l[k]) - 1);
        }
}

TEST_CASE("validation reports broken rows and pairs") {
    auto data = build_sandwiched_cqss(Fraction(19, 7)).data;
    Matrix bad = m1;
    bad.rows[0][0] = 1;
    auto rep = validate_incidence(bad, data);
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.failures.empty());
    CHECK_THROWS_AS(validate_incidence(rows({{1}}), data), DimensionMismatch);
}

TEST_CASE("canonical form drops zero columns and sorts") {
    Matrix m = rows({{0, 1, 0}, {1, 0, 0}});
    CHECK(canonical(m) == rows({{0, 1}, {1, 0}}));
    CHECK(canonical(rows({{1, 0}, {0, 1}})) == canonical(rows({{0, 1}, {1, 0}})));
}

TEST_CASE("difference and positive part") {
    Matrix m = rows({{1, 0, 1}, {1, 1, 0}});
    CHECK(difference(m) == rows({{1, 0, 1}, {0, 1, -1}}));
    CHECK(positive_part(difference(m)) == canonical(rows({{1, 0}, {0, 1}})));
}

TEST_CASE("weighted homology needs branches") {
    DecoratedCurveData d;
    d.l = {1};
    d.delta = {0};
    d.inter = {{1}};
    CHECK_THROWS_AS(phi_ih_weighted(rows({{1}}), d), MissingBranchAssignment);
    d.branch = std::vector<int>{0, 1};
    CHECK_THROWS_AS(phi_ih_weighted(rows({{1}}), d), DimensionMismatch);
}

TEST_CASE("k-sequence maps reject matrices of the wrong height") {
    CHECK_THROWS_AS(phi_ik(m1, Chain{2, 3}), DimensionMismatch);
    CHECK_THROWS_AS(phi_hk(h1, Chain{2, 3}), DimensionMismatch);
}
