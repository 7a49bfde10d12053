#include "cqs/hjcf.hpp"

#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

namespace cqs {

Fraction::Fraction(std::int64_t n_, std::int64_t a_) : n(n_), a(a_) {
    if (!(0 < a && a < n) || std::gcd(n, a) != 1)
        throw std::invalid_argument("fraction " + std::to_string(n) + "/" + std::to_string(a) +
                                    " needs 0 < a < n and gcd(n,a) = 1");
}

ProjectiveValue make_projective(std::int64_t p, std::int64_t q) {
    if (p == 0 && q == 0) throw std::invalid_argument("projective value 0/0");
    std::int64_t g = std::gcd(p, q);
    p /= g;
    q /= g;
    if (q < 0 || (q == 0 && p < 0)) {
        p = checked_sub(0, p);
        q = -q;
    }
    return {p, q};
}

Chain hj_expand(const Fraction& f) {
    Chain out;
    std::int64_t n = f.n, a = f.a;
    while (a > 0) {
        std::int64_t b = (n + a - 1) / a;
        out.push_back(b);
        std::int64_t next = checked_sub(checked_mul(b, a), n);
        n = a;
        a = next;
    }
    return out;
}

ProjectiveValue hj_eval(const Chain& c) {
    std::int64_t p = 1, q = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        std::int64_t np = checked_sub(checked_mul(*it, p), q);
        q = p;
        p = np;
    }
    return make_projective(p, q);
}

Fraction dual(const Fraction& f) { return Fraction(f.n, f.n - f.a); }

// M(c) has k_i on the diagonal and -1 beside it. Eliminating a diagonal 1 is
// a congruence M ~ (1) + M', and M' is the tridiagonal matrix of the chain
// with that entry blown down, so PSD-ness and corank survive the reduction.
bool is_admissible(const Chain& c) {
    Chain w = c;
    while (w.size() >= 2) {
        std::size_t i = 0;
        while (i < w.size() && w[i] != 1) ++i;
        if (i == w.size()) break;
        w = blow_down_at(w, i);
    }
    if (w.empty()) return true;
    if (w.size() == 1) return w[0] >= 0;
    for (auto x : w)
        if (x <= 0) return false;
    return true;
}

std::vector<Chain> zero_fractions(int e) {
    if (e < 1) throw std::invalid_argument("zero_fractions: e must be positive");
    if (e == 1) return {};
    std::set<Chain> level{{1, 1}};
    for (int len = 2; len < e; ++len) {
        std::set<Chain> next;
        for (const auto& c : level)
            for (std::size_t s = 0; s <= c.size(); ++s) next.insert(blow_up(c, s));
        level = std::move(next);
    }
    return {level.begin(), level.end()};
}

namespace {

// Prefixes [k_1..k_j] that close the tail value v = p/q to 0, keeping every
// intermediate tail positive.
struct KSearch {
    const Chain& bound;
    std::map<std::tuple<std::size_t, std::int64_t, std::int64_t>, std::vector<Chain>> memo;

    const std::vector<Chain>& prefixes(std::size_t j, std::int64_t p, std::int64_t q) {
        auto key = std::make_tuple(j, p, q);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        std::vector<Chain> out;
        for (std::int64_t k = 1; k <= bound[j - 1]; ++k) {
            auto v = make_projective(checked_sub(checked_mul(k, p), q), p);
            if (j == 1) {
                if (v.is_zero()) out.push_back({k});
                continue;
            }
            if (v.p <= 0 || v.q <= 0) continue;
            for (const auto& pre : prefixes(j - 1, v.p, v.q)) {
                Chain c = pre;
                c.push_back(k);
                out.push_back(std::move(c));
            }
        }
        return memo.emplace(key, std::move(out)).first->second;
    }
};

}  // namespace

std::vector<Chain> k_of_x(const Fraction& f) {
    Chain a = hj_expand(dual(f));
    if (a.size() < 2) return {};
    KSearch s{a, {}};
    std::set<Chain> out;
    for (const auto& c : s.prefixes(a.size(), 1, 0))
        if (is_admissible(c)) out.insert(c);
    return {out.begin(), out.end()};
}

Chain blow_down_at(const Chain& c, std::size_t i) {
    if (i >= c.size() || c[i] != 1) throw std::invalid_argument("blow_down_at: entry is not 1");
    Chain out;
    out.reserve(c.size() - 1);
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (k == i) continue;
        std::int64_t v = c[k];
        if (k + 1 == i || k == i + 1) v = checked_sub(v, 1);
        out.push_back(v);
    }
    return out;
}

Chain blow_down(const Chain& c) {
    Chain w = c;
    for (;;) {
        std::size_t i = 0;
        while (i < w.size() && w[i] != 1) ++i;
        if (i == w.size()) return w;
        w = blow_down_at(w, i);
    }
}

Chain blow_up(const Chain& c, std::size_t slot) {
    if (slot > c.size()) throw std::out_of_range("blow_up: slot out of range");
    Chain out;
    out.reserve(c.size() + 1);
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (k == slot) out.push_back(1);
        std::int64_t v = c[k];
        if (k + 1 == slot || k == slot) v = checked_add(v, 1);
        out.push_back(v);
    }
    if (slot == c.size()) out.push_back(1);
    return out;
}

}  // namespace cqs
