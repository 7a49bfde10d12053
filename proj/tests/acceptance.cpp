#include "cqs/format.hpp"
#include "cqs/lattice.hpp"
#include "cqs/report.hpp"
#include "cqs/surface.hpp"
#include "cqs/wpqr.hpp"

#include "unit/oracles.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

using namespace cqs;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

class Checker {
public:
    void expect(bool cond, const std::string& what) {
        if (!cond && out_.ok) out_.detail = what;
        out_.ok = out_.ok && cond;
    }
    void note(const std::string& s) {
        if (out_.ok) out_.detail = s;
    }
    Outcome result() const { return out_; }

private:
    Outcome out_;
};

Matrix rows(std::vector<std::vector<std::int64_t>> r) { return Matrix{std::move(r)}; }

std::set<std::string> rendered(const std::vector<AnnotatedChain>& xs) {
    std::set<std::string> out;
    for (const auto& x : xs) out.insert(x.render());
    return out;
}

// Entries and run positions, read in both directions.
bool same_chain_up_to_reversal(const AnnotatedChain& x, const std::string& text) {
    AnnotatedChain y = parse_annotated(text);
    auto shape = [](const AnnotatedChain& c, bool rev) {
        const std::size_t n = c.entries.size();
        Chain e = c.entries;
        std::set<std::pair<std::size_t, std::size_t>> runs;
        for (const auto& r : c.runs) runs.insert(rev ? std::pair{n - r.end, n - r.begin} : std::pair{r.begin, r.end});
        if (rev) std::reverse(e.begin(), e.end());
        return std::pair{e, runs};
    };
    return shape(x, false) == shape(y, false) || shape(x, false) == shape(y, true);
}

Outcome criterion_1() {
    Checker c;
    std::size_t pairs = 0;
    for (std::int64_t n = 2; n <= 200; ++n)
        for (std::int64_t a = 1; a < n; ++a) {
            if (std::gcd(n, a) != 1) continue;
            ++pairs;
            c.expect(hj_eval(hj_expand(Fraction(n, a))) == make_projective(n, a),
                     "round trip fails for " + std::to_string(n) + "/" + std::to_string(a));
        }
    c.note(std::to_string(pairs) + " pairs");
    return c.result();
}

Outcome criterion_2() {
    Checker c;
    for (std::int64_t N = 2; N <= 30 * 30; ++N)
        for (std::int64_t Q = 1; Q < N; ++Q) {
            if (std::gcd(N, Q) != 1) continue;
            std::optional<WahlData> expect;
            for (std::int64_t m = 2; m * m <= N; ++m)
                if (m * m == N && (Q + 1) % m == 0 && std::gcd(m, (Q + 1) / m) == 1) expect = WahlData{m, (Q + 1) / m};
            c.expect(wahl_recognize(hj_expand(Fraction(N, Q))) == expect,
                     "Wahl mismatch at " + std::to_string(N) + "/" + std::to_string(Q));
        }
    std::size_t t_count = 0;
    for (std::int64_t N = 2; N <= 8 * 12 * 12; ++N)
        for (std::int64_t Q = 1; Q < N; ++Q) {
            if (std::gcd(N, Q) != 1) continue;
            auto expect = oracle::t_by_definition(N, Q);
            auto got = t_recognize(hj_expand(Fraction(N, Q)));
            bool same = got.has_value() == expect.has_value() &&
                        (!got || (got->d == expect->d && got->n == expect->n && got->a == expect->a));
            c.expect(same, "T mismatch at " + std::to_string(N) + "/" + std::to_string(Q));
            if (expect && expect->d <= 8 && expect->n <= 12) ++t_count;
        }
    c.note(std::to_string(t_count) + " T points with d <= 8, n <= 12");
    return c.result();
}

Outcome criterion_3() {
    Checker c;
    const std::int64_t expected[] = {1, 2, 5, 14, 42, 132, 429};
    for (int e = 2; e <= 8; ++e) {
        auto z = zero_fractions(e);
        c.expect(static_cast<std::int64_t>(z.size()) == expected[e - 2], "count for e = " + std::to_string(e));
        c.expect(static_cast<std::int64_t>(z.size()) == oracle::catalan(e - 1), "Catalan for e = " + std::to_string(e));
        std::set<Chain> distinct(z.begin(), z.end());
        c.expect(distinct.size() == z.size(), "duplicates for e = " + std::to_string(e));
        for (const auto& k : z) c.expect(hj_eval(k).is_zero() && is_admissible(k), "not a zero fraction: " + to_string(k));
    }
    return c.result();
}

const Matrix m19_1 = rows({{0, 0, 0, 0, 0, 1, 1}, {0, 0, 0, 1, 1, 0, 1}, {0, 0, 1, 0, 1, 0, 1}, {1, 1, 0, 0, 1, 0, 1}});
const Matrix m19_2 = rows({{0, 0, 0, 0, 1, 1}, {0, 0, 1, 1, 0, 1}, {0, 1, 0, 1, 0, 1}, {1, 1, 1, 0, 0, 1}});
const Matrix m19_3 = rows({{0, 0, 0, 1, 1}, {0, 1, 1, 0, 1}, {1, 0, 1, 0, 1}, {1, 1, 1, 1, 0}});

// Reference table for 1/19(1,7): P-resolution, incidence matrix, homology matrix, k-sequence.
struct TableRow {
    std::string presolution;
    Matrix incidence, homology;
    Chain k;
    std::int64_t milnor;
};

std::vector<TableRow> reference_table() {
    return {
        {"3-4-[2]", m19_1, rows({{0, 0, 0, 1}, {0, 0, 1, 0}, {0, 0, 0, 0}, {1, 1, 0, 0}}), {1, 2, 2, 1}, 3},
        {"3-[4]-2", m19_2, rows({{0, 0, 1}, {0, 0, 0}, {0, 1, 0}, {1, 0, 0}}), {1, 3, 1, 2}, 2},
        {"[4]-1-[5,2]", m19_3, rows({{0, 0}, {0, 1}, {1, 0}, {0, 0}}), {2, 2, 1, 3}, 1},
    };
}

Outcome criterion_4() {
    Checker c;
    Fraction f(19, 7);
    c.expect(rendered(enumerate_p_resolutions(f)) == std::set<std::string>{"3-4-[2]", "3-[4]-2", "[4]-1-[5,2]"},
             "P-resolutions");
    auto ms = enumerate_incidence(build_sandwiched_cqss(f).data);
    c.expect(std::set<Matrix>(ms.begin(), ms.end()) ==
                 std::set<Matrix>{canonical(m19_1), canonical(m19_2), canonical(m19_3)},
             "incidence matrices");
    const Chain a = hj_expand(dual(f));
    std::size_t cells = 0;
    Report rep = correspondence_table(f);
    for (const auto& t : reference_table()) {
        Matrix h = phi_ih_cyclic(t.incidence);
        cells += h == canonical(t.homology);
        cells += phi_hk(h, a) == t.k;
        cells += phi_ik(t.incidence, a) == t.k;
        bool row_found = false;
        for (const auto& r : rep.rows)
            if (r.presolution.render() == t.presolution)
                row_found = r.incidence == canonical(t.incidence) && r.homology == canonical(t.homology) && r.kseq == t.k;
        cells += row_found;
        c.expect(milnor_number(t.incidence) == t.milnor, "Milnor number of " + t.presolution);
    }
    c.expect(cells == 12, std::to_string(cells) + " of 12 table cells");
    if (cells == 12) c.note("12 of 12 table cells");
    return c.result();
}

Outcome criterion_5() {
    Checker c;
    auto x = parse_mk2a("[(50,37)]-1-[(19,5)]");
    c.expect(classify(x) == NbhdType::Flipping, "[(50,37)]-1-[(19,5)] not flipping");
    c.expect(same_chain_up_to_reversal(flip(x).annotated(), "[4]-3"), "flip of [(50,37)]-1-[(19,5)]");

    auto y = parse_mk2a("[2,5]-1-[2,2,6]");
    c.expect(classify(y) == NbhdType::Flipping, "[2,5]-1-[2,2,6] not flipping");
    c.expect(same_chain_up_to_reversal(flip(y).annotated(), "[5,2]-2"), "flip of [2,5]-1-[2,2,6]");

    auto z = parse_mk2a("[8,2,2,2,2]-1-[6,2,2]");
    c.expect(classify(z) == NbhdType::Divisorial, "[8,2,2,2,2]-1-[6,2,2] not divisorial");
    auto [init, steps] = to_initial(z);
    const BigInt delta = mk2a_invariants(z).delta;
    c.expect(init.right.m == delta && init.left.m == delta * delta, "initial pair is not (delta, delta^2)");
    c.expect(delta == 2, "delta of the divisorial fixture");

    auto w = parse_mk1a("[3,5*,2]");
    c.expect(classify(w) == NbhdType::Flipping, "[3,5*,2] not flipping");
    c.expect(same_chain_up_to_reversal(flip(w).annotated(), "[4]-1-[5,2]"), "flip of [3,5*,2]");
    return c.result();
}

Outcome criterion_6() {
    Checker c;
    c.expect(discrepancies(Chain{4}) == std::vector<Rational>{Rational(1, 2)}, "[4]");
    c.expect(discrepancies(Chain{5, 2}) == std::vector<Rational>{Rational(2, 3), Rational(1, 3)}, "[5,2]");
    c.expect(discrepancies(Chain{2, 3, 4}) == std::vector<Rational>{Rational(1, 3), Rational(2, 3), Rational(2, 3)},
             "[2,3,4]");
    return c.result();
}

Outcome criterion_7() {
    Checker c;
    std::mt19937 rng(7);
    int cases = 0;
    while (cases < 50) {
        std::int64_t m = std::uniform_int_distribution<std::int64_t>(2, 40)(rng);
        std::int64_t a = std::uniform_int_distribution<std::int64_t>(1, m - 1)(rng);
        if (std::gcd(m, a) != 1) continue;
        Chain chain = wahl_chain({m, a});
        Mk1A x{chain, chain.size()};
        auto fx = mk1a_fixture(x);
        auto rec = apply_flip(fx.config, fx.eminus);
        c.expect(rec.beta.at(0) == 1, "beta of the usual flip of " + to_string(chain));
        c.expect(flip(x).same_up_to_reversal(usual_flip(x)), "usual flip formula for " + to_string(chain));
        ++cases;
    }
    auto fx = mk1a_fixture(parse_mk1a("[3,5*,2]"));
    c.expect(apply_flip(fx.config, fx.eminus).beta.at(0) == 2, "beta of [3,5*,2]");
    auto nt = non_t_fixture();
    auto rec = apply_flip(nt.config, nt.eminus);
    c.expect(rec.rewrite == "[2]-2-[2,3,4]", "non-T flip rewrite " + rec.rewrite);
    c.expect(rec.beta.size() == 1 && rec.beta.begin()->second == 2, "beta of the [2,3,4] pattern");
    return c.result();
}

Outcome criterion_8() {
    Checker c;
    {
        Fraction f(4, 1);
        auto s = build_sandwiched_cqss(f);
        const Matrix minimal = rows({{1, 0, 0, 1}, {0, 1, 0, 1}, {0, 0, 1, 1}});
        const Matrix wahl = rows({{1, 1, 0}, {1, 0, 1}, {0, 1, 1}});
        const std::map<std::string, Matrix> expect{{"4", canonical(minimal)}, {"[4]", canonical(wahl)}};
        const Chain a = hj_expand(dual(f));
        std::set<Chain> ks;
        auto kx = k_of_x(f);
        for (const auto& p : enumerate_p_resolutions(f)) {
            Matrix m = canonical(run_phi_pi(m_resolution_of(p), s));
            c.expect(expect.count(p.render()) && expect.at(p.render()) == m, "1/4(1,1) from " + p.render());
            Chain k = phi_ik(m, a);
            c.expect(std::find(kx.begin(), kx.end(), k) != kx.end(), "k-sequence outside K(X) for " + p.render());
            ks.insert(k);
        }
        c.expect(ks.size() == 2, "1/4(1,1) k-sequences not distinct");
    }
    {
        Fraction f(19, 7);
        auto s = build_sandwiched_cqss(f);
        const Chain a = hj_expand(dual(f));
        std::size_t matched = 0;
        for (const auto& t : reference_table()) {
            for (const auto& p : enumerate_p_resolutions(f)) {
                if (p.render() != t.presolution) continue;
                Matrix m = canonical(run_phi_pi(m_resolution_of(p), s));
                c.expect(m == canonical(t.incidence), "1/19(1,7) matrix from " + t.presolution);
                c.expect(phi_ik(m, a) == t.k, "1/19(1,7) k-sequence from " + t.presolution);
                ++matched;
            }
        }
        c.expect(matched == 3, "1/19(1,7) P-resolutions");
    }
    return c.result();
}

Outcome criterion_9() {
    Checker c;
    std::size_t pairs = 0;
    for (std::int64_t n = 2; n <= 50; ++n)
        for (std::int64_t a = 1; a < n; ++a) {
            if (std::gcd(n, a) != 1) continue;
            Fraction f(n, a);
            const std::string tag = std::to_string(n) + "/" + std::to_string(a);
            auto p = enumerate_p_resolutions(f).size();
            auto i = enumerate_incidence(build_sandwiched_cqss(f).data).size();
            c.expect(p == i, "P-resolutions vs incidence matrices at " + tag);
            // For a = n-1 the dual chain has a single entry and K(X) is not defined.
            if (a != n - 1) c.expect(k_of_x(f).size() == p, "k-sequences at " + tag);
            ++pairs;
        }
    c.note(std::to_string(pairs) + " pairs");
    return c.result();
}

Outcome criterion_10() {
    Checker c;
    for (std::int64_t n = 2; n <= 60; ++n)
        for (std::int64_t a = 1; a < n; ++a) {
            if (std::gcd(n, a) != 1) continue;
            c.expect(verify_c_equals_sum_a(Fraction(n, a)).ok,
                     "fails at " + std::to_string(n) + "/" + std::to_string(a));
        }
    return c.result();
}

Outcome criterion_11() {
    Checker c;
    std::size_t mismatched = 0;
    std::string first;
    for (std::int64_t p = 0; p <= 2; ++p)
        for (std::int64_t q = 0; q <= 2; ++q)
            for (std::int64_t r = 0; r <= 2; ++r) {
                WpqrParams w{p, q, r};
                auto rep = kollar_check(w);
                const std::string tag = "W(" + std::to_string(p) + "," + std::to_string(q) + "," + std::to_string(r) + ")";
                c.expect(rep.missing.empty(), "family not enumerated in " + tag);
                c.expect(rep.failed_presolutions.empty(), "P-resolution check fails in " + tag);
                for (const auto& f : wpqr_families(w))
                    if (f.tag == "M6" || f.tag == "M7") c.expect(milnor_number(f.matrix) == 0, f.label() + " not QHD");
                if (!rep.unclassified.empty()) {
                    ++mismatched;
                    if (first.empty()) first = tag + " " + describe_unclassified(w, rep.unclassified.front());
                }
            }
    c.expect(mismatched == 0, std::to_string(mismatched) + " of 27 parameter sets have unclassified matrices, first " + first);
    return c.result();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks"};
    std::vector<int> known;
    app.add_option("--known-failure", known, "criterion expected to fail; reported but not gating");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::function<Outcome()>, double>> checks{
        {criterion_1, 1},  {criterion_2, 5},  {criterion_3, 10}, {criterion_4, 5},
        {criterion_5, 0},  {criterion_6, 0},  {criterion_7, 0},  {criterion_8, 10},
        {criterion_9, 600}, {criterion_10, 0}, {criterion_11, 300},
    };
    int gating_failures = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = checks[i].first();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double limit = checks[i].second;
        if (limit > 0 && secs > limit) o = {false, "took " + std::to_string(secs) + " s, limit " + std::to_string(limit)};
        const bool expected = std::find(known.begin(), known.end(), id) != known.end();
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.2fs", secs);
        std::cout << "criterion " << id << ": " << (o.ok ? "PASS" : "FAIL") << " (" << timing << ")";
        if (!o.detail.empty()) std::cout << " " << o.detail;
        if (!o.ok && expected) std::cout << " [known failure]";
        std::cout << "\n";
        if (!o.ok && !expected) ++gating_failures;
    }
    return gating_failures == 0 ? 0 : 1;
}
