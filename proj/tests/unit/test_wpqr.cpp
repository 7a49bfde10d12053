#include "cqs/surface.hpp"
#include "cqs/wpqr.hpp"

#include <doctest.h>

#include <set>

using namespace cqs;

namespace {

std::set<std::string> labels(const WpqrParams& w) {
    std::set<std::string> out;
    for (const auto& f : wpqr_families(w)) out.insert(f.label());
    return out;
}

std::set<Matrix> family_matrices(const WpqrParams& w) {
    std::set<Matrix> out;
    for (const auto& f : wpqr_families(w)) out.insert(f.matrix);
    return out;
}

// Reorders the row blocks A, B, C of w into the blocks of w.rotated().
Matrix rotate_blocks(const WpqrParams& w, const Matrix& m) {
    const std::size_t a = w.p + 2, b = w.q + 2;
    Matrix out;
    out.rows.insert(out.rows.end(), m.rows.begin() + a, m.rows.begin() + a + b);
    out.rows.insert(out.rows.end(), m.rows.begin() + a + b, m.rows.end());
    out.rows.insert(out.rows.end(), m.rows.begin(), m.rows.begin() + a);
    return canonical(out);
}

std::vector<WpqrParams> small_params() {
    std::vector<WpqrParams> out;
    for (std::int64_t p = 0; p <= 2; ++p)
        for (std::int64_t q = 0; q <= 2; ++q)
            for (std::int64_t r = 0; r <= 2; ++r) out.push_back({p, q, r});
    return out;
}

}  // namespace

TEST_CASE("W(p,q,r) graphs") {
    auto g = wpqr_graph({0, 0, 0});
    CHECK(g.central == 4);
    CHECK(g.arms == std::vector<Chain>{{3}, {3}, {3}});
    g = wpqr_graph({1, 0, 0});
    CHECK(g.arms == std::vector<Chain>{{4}, {3}, {2, 3}});
    CHECK_THROWS(wpqr_graph({-1, 0, 0}));
}

TEST_CASE("W(p,q,r) is sandwiched") {
    for (const auto& w : small_params()) {
        auto s = build_sandwiched_wpqr(w.p, w.q, w.r);
        CHECK(s.data.size() == static_cast<std::size_t>(w.p + w.q + w.r + 6));
        DualGraph g = s.config.exceptional_graph();
        auto [down, ids] = blow_down_graph(g);
        CHECK(down.size() == 0);
    }
}

TEST_CASE("families of W(0,0,0)") {
    CHECK(labels({0, 0, 0}) == std::set<std::string>{"M1 A(I) B(I) C(I)", "M2 A(I) B(I) C(I)", "M6", "M7"});
}

TEST_CASE("families of W(0,0,1)") {
    auto l = labels({0, 0, 1});
    CHECK(l.count("M3 B(I)") == 1);
    CHECK(l.count("M7") == 0);
    CHECK(l.count("M6") == 1);
}

TEST_CASE("every family matrix is an incidence matrix") {
    for (const auto& w : small_params()) {
        auto s = build_sandwiched_wpqr(w.p, w.q, w.r);
        for (const auto& f : wpqr_families(w)) {
            CAPTURE(f.label());
            auto rep = validate_incidence(f.matrix, s.data);
            CHECK(rep.ok);
            if (f.tag == "M6" || f.tag == "M7")
                CHECK(milnor_number(f.matrix) == 0);
            else
                CHECK(milnor_number(f.matrix) > 0);
        }
    }
}

TEST_CASE("family P-resolutions are P-resolutions of W(p,q,r)") {
    for (const auto& w : small_params()) {
        DualGraph target = wpqr_graph(w).to_graph();
        auto pres = wpqr_p_resolutions(w);
        CHECK(pres.size() + 1 + (w.p == w.q && w.q == w.r ? 1 : 0) == wpqr_families(w).size());
        for (const auto& x : pres) {
            CAPTURE(x.label);
            CHECK(is_p_resolution(x.graph.to_marked(), target));
        }
    }
}

TEST_CASE("families respect the cyclic symmetry") {
    for (const auto& w : small_params()) {
        std::set<Matrix> rotated;
        for (const auto& m : family_matrices(w)) rotated.insert(rotate_blocks(w, m));
        CHECK(rotated == family_matrices(w.rotated()));
    }
}

TEST_CASE("Kollar check on symmetric parameters") {
    for (WpqrParams w : {WpqrParams{0, 0, 0}, WpqrParams{1, 1, 1}, WpqrParams{2, 2, 2}}) {
        auto rep = kollar_check(w);
        CHECK(rep.ok());
        CHECK(rep.enumerated == rep.families);
        CHECK(rep.qhd.size() == 2);
    }
}

TEST_CASE("the extra matrix of W(0,1,1) is an incidence matrix outside the families") {
    WpqrParams w{0, 1, 1};
    auto rep = kollar_check(w);
    REQUIRE(rep.unclassified.size() == 1);
    auto s = build_sandwiched_wpqr(0, 1, 1);
    const Matrix& m = rep.unclassified.front();
    CHECK(validate_incidence(m, s.data).ok);
    CHECK(family_matrices(w).count(canonical(m)) == 0);
    CHECK(describe_unclassified(w, m) == "AB=2 BC=1 CA=3 ABC=0 columns=10");
    CHECK_THROWS_AS(kollar_check(w, true), MismatchReport);
}

TEST_CASE("family conditions") {
    CHECK_FALSE(subtype_allowed({0, 0, 0}, 0, SubType::II));
    CHECK(subtype_allowed({1, 0, 0}, 0, SubType::II));
    CHECK_THROWS_AS(wpqr_family_matrix({0, 0, 1}, "M7", {}), ConditionViolated);
    CHECK_THROWS_AS(wpqr_p_resolution({0, 0, 0}, "M6", {}), ConditionViolated);
    CHECK_THROWS_AS(wpqr_family_matrix({0, 0, 0}, "M1", {SubType::II, SubType::I, SubType::I}), ConditionViolated);
    CHECK_THROWS_AS(wpqr_family_matrix({0, 0, 0}, "M9", {}), std::invalid_argument);
}

TEST_CASE("M3 P-resolution of W(0,0,1)") {
    auto x = wpqr_p_resolution({0, 0, 1}, "M3", {SubType::I, SubType::I, SubType::I});
    auto mg = x.graph.to_marked();
    std::multiset<Chain> runs;
    for (const auto& run : mg.runs) {
        Chain c;
        for (auto v : run.vertices) c.push_back(mg.graph.b[v]);
        runs.insert(c);
    }
    CHECK(runs == std::multiset<Chain>{{4}, {5, 2}});
}
