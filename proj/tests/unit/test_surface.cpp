#include "cqs/format.hpp"
#include "cqs/surface.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

using namespace cqs;

namespace {

std::set<Matrix> phi_pi_images(const Fraction& f, bool reverse = false) {
    auto s = build_sandwiched_cqss(f);
    std::set<Matrix> out;
    RunOptions opt;
    opt.reverse_worklist = reverse;
    for (const auto& p : enumerate_p_resolutions(f)) out.insert(canonical(run_phi_pi(m_resolution_of(p), s, opt)));
    return out;
}

std::set<Matrix> enumerated(const Fraction& f) {
    auto s = build_sandwiched_cqss(f);
    std::set<Matrix> out;
    for (const auto& m : enumerate_incidence(s.data)) out.insert(canonical(m));
    return out;
}

}  // namespace

TEST_CASE("phi_pi of 4/1 gives both matrices") {
    auto images = phi_pi_images(Fraction(4, 1));
    CHECK(images.size() == 2);
    CHECK(images == enumerated(Fraction(4, 1)));
}

TEST_CASE("phi_pi of 19/7 matches the enumeration") {
    auto images = phi_pi_images(Fraction(19, 7));
    CHECK(images.size() == 3);
    CHECK(images == enumerated(Fraction(19, 7)));
    auto s = build_sandwiched_cqss(Fraction(19, 7));
    for (const auto& m : images) CHECK(validate_incidence(m, s.data).ok);
}

TEST_CASE("phi_pi is a bijection onto the incidence matrices for n <= 30") {
    for (std::int64_t n = 2; n <= 30; ++n)
        for (std::int64_t a = 1; a < n; ++a) {
            if (std::gcd(n, a) != 1) continue;
            Fraction f(n, a);
            CAPTURE(n);
            CAPTURE(a);
            auto images = phi_pi_images(f);
            CHECK(images.size() == enumerate_p_resolutions(f).size());
            CHECK(images == enumerated(f));
        }
}

TEST_CASE("worklist order does not change phi_pi") {
    for (auto f : {Fraction(19, 7), Fraction(25, 7), Fraction(30, 11), Fraction(16, 5)})
        CHECK(phi_pi_images(f) == phi_pi_images(f, true));
}

TEST_CASE("trace records one step per contraction") {
    auto s = build_sandwiched_cqss(Fraction(19, 7));
    auto p = enumerate_p_resolutions(Fraction(19, 7));
    for (const auto& x : p) {
        std::vector<TraceStep> trace;
        RunOptions opt;
        opt.trace = &trace;
        Matrix m = canonical(run_phi_pi(m_resolution_of(x), s, opt));
        std::size_t contracts = std::count_if(trace.begin(), trace.end(), [](const TraceStep& t) { return t.op == "contract"; });
        CHECK(contracts == m.col_count());
    }
}

TEST_CASE("non-T flip gives coefficient two") {
    auto fx = non_t_fixture();
    CHECK(fx.config.k_degree(fx.eminus) == Rational(-2, 5));
    CHECK(is_flipping_curve(fx.config, fx.eminus));
    auto rec = apply_flip(fx.config, fx.eminus);
    CHECK(rec.rewrite == "[2]-2-[2,3,4]");
    REQUIRE(rec.beta.size() == 1);
    CHECK(rec.beta.begin()->second == 2);
}

TEST_CASE("flip of [3,5*,2] gives coefficient two") {
    auto x = parse_mk1a("[3,5*,2]");
    auto fx = mk1a_fixture(x);
    auto rec = apply_flip(fx.config, fx.eminus);
    CHECK(rec.beta.at(0) == 2);
}

TEST_CASE("usual flips degenerate with coefficient one") {
    std::mt19937 rng(20240611);
    int cases = 0;
    while (cases < 200) {
        std::int64_t m = std::uniform_int_distribution<std::int64_t>(2, 40)(rng);
        std::int64_t a = std::uniform_int_distribution<std::int64_t>(1, m - 1)(rng);
        if (std::gcd(m, a) != 1) continue;
        Chain c = wahl_chain({m, a});
        Mk1A x{c, c.size()};
        CAPTURE(to_string(c));
        auto fx = mk1a_fixture(x);
        CHECK(fx.config.k_degree(fx.eminus) < 0);
        auto rec = apply_flip(fx.config, fx.eminus);
        CHECK(rec.beta.at(0) == 1);
        auto u = usual_flip(x);
        CHECK(flip(x).same_up_to_reversal(u));
        ++cases;
    }
}

TEST_CASE("curve configuration blow up and down are inverse") {
    CurveConfig c;
    auto u = c.add_curve(-2, CurveKind::Exceptional, "u");
    auto v = c.add_curve(-3, CurveKind::Exceptional, "v");
    c.add_meet(u, v, 1);
    auto e = c.blow_up_node(u, v);
    CHECK(c.curves[u].self_int == -3);
    CHECK(c.curves[v].self_int == -4);
    CHECK(c.meet(u, v) == 0);
    CHECK(c.meet(u, e) == 1);
    CHECK(c.curves[e].self_int == -1);
    c.blow_down_curve(e);
    CHECK(c.curves[u].self_int == -2);
    CHECK(c.curves[v].self_int == -3);
    CHECK(c.meet(u, v) == 1);
    CHECK(c.curves[u].kdeg == 0);
    CHECK(c.alive_count() == 2);
    CHECK_THROWS_AS(c.blow_down_curve(u), NotContractible);
    CHECK_THROWS_AS(c.blow_up_node(u, u), InternalInconsistency);
}

TEST_CASE("sandwiched structure of 19/7") {
    auto s = build_sandwiched_cqss(Fraction(19, 7));
    CHECK(s.exceptional.size() == 3);
    CHECK(s.sandwich.size() == s.data.size());
    DualGraph g = s.config.exceptional_graph();
    // The minimal resolution with the added (-1)-curves blows down to a smooth point.
    CHECK(g.size() == s.exceptional.size() + s.sandwich.size());
    auto [down, ids] = blow_down_graph(g);
    CHECK(down.size() == 0);
}
