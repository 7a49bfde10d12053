#include "cqs/mmp.hpp"

#include <algorithm>
#include <stdexcept>

namespace cqs {

namespace {

BigInt mod_pos(const BigInt& x, const BigInt& m) {
    BigInt r = x % m;
    if (r < 0) r += m;
    return r;
}

Chain displayed_left(const BigWahl& w) {
    Chain c = wahl_chain(w.narrow());
    std::reverse(c.begin(), c.end());
    return c;
}

Chain displayed_right(const BigWahl& w) { return wahl_chain(w.narrow()); }

void check_wahl(const BigWahl& w) {
    if (w.smooth()) {
        if (w.a != 1) throw std::invalid_argument("smooth marker must be (1,1)");
        return;
    }
    if (!(0 < w.a && w.a < w.m) || boost::multiprecision::gcd(w.m, w.a) != 1)
        throw std::invalid_argument("Wahl data needs 0 < a < m and gcd(m,a) = 1");
}

// The chain contracts to 1/Delta(1,Omega) read in its own direction. Omega
// only matters modulo Delta because an end (-1)-curve shifts it.
bool contracts_to(const Chain& c, const BigInt& Delta, const BigInt& Omega) {
    auto v = hj_eval(c);
    return BigInt(v.p) == Delta && (BigInt(v.q) - Omega) % Delta == 0;
}

// Checks hj_eval of the displayed chain against Delta/Omega when the chains
// are small enough to write out.
bool small(const BigWahl& w) { return w.m <= 2000; }

}  // namespace

BigWahl wahl_of_chain(const Chain& c) {
    auto w = wahl_recognize(c);
    if (!w) throw NotWahl(to_string(c) + " is not a Wahl chain");
    return {w->m, w->a};
}

std::string render(const Mk2A& x) {
    auto side = [](const BigWahl& w) { return "[(" + w.m.str() + "," + w.a.str() + ")]"; };
    return side(x.left) + "-1-" + side(x.right);
}

Chain ExtremalPRes::chain() const {
    Chain c = displayed_left(left);
    c.push_back(to_int64(this->c));
    Chain r = displayed_right(right);
    c.insert(c.end(), r.begin(), r.end());
    return c;
}

std::size_t ExtremalPRes::c_index() const { return displayed_left(left).size(); }

AnnotatedChain ExtremalPRes::annotated() const {
    AnnotatedChain out;
    out.entries = chain();
    const std::size_t k = c_index();
    if (!left.smooth()) out.runs.push_back({0, k, RunKind::T, t_recognize(displayed_left(left))});
    if (!right.smooth())
        out.runs.push_back({k + 1, out.entries.size(), RunKind::T, t_recognize(displayed_right(right))});
    return out;
}

std::string ExtremalPRes::render() const { return annotated().render(); }

bool ExtremalPRes::same_up_to_reversal(const ExtremalPRes& o) const {
    if (*this == o) return true;
    return c == o.c && left == o.right && right == o.left;
}

NbhdInvariants mk1a_invariants(const Mk1A& x) {
    auto w = wahl_recognize(x.chain);
    if (!w) throw NotWahl(to_string(x.chain) + " is not a Wahl chain");
    const std::size_t s = x.chain.size();
    const std::size_t i = x.marked;
    if (i < 1 || i > s) throw std::invalid_argument("marked index out of range");
    const BigInt m = w->m, a = w->a;

    std::vector<BigInt> beta(s + 2), alpha(s + 2), gamma(s + 2);
    beta[s + 1] = 0;
    beta[s] = 1;
    for (std::size_t j = s; j >= 1; --j) beta[j - 1] = x.chain[j - 1] * beta[j] - beta[j + 1];
    alpha[0] = 0;
    alpha[1] = 1;
    gamma[0] = -1;
    gamma[1] = 0;
    for (std::size_t j = 1; j <= s; ++j) {
        alpha[j + 1] = x.chain[j - 1] * alpha[j] - alpha[j - 1];
        gamma[j + 1] = x.chain[j - 1] * gamma[j] - gamma[j - 1];
    }
    if (beta[0] != m * m) throw InternalInconsistency("beta_0 differs from m^2");

    NbhdInvariants out;
    BigInt num = beta[i] + alpha[i];
    if (num % m != 0) throw InternalInconsistency("delta is not an integer");
    out.delta = num / m;
    out.Delta = m * m - beta[i] * alpha[i];
    out.Omega = (m * a - 1) - gamma[i] * beta[i];
    out.kc = -Rational(out.delta, m);
    out.cc = -Rational(out.Delta, m * m);

    Chain dec = x.chain;
    dec[i - 1] -= 1;
    if (hj_eval(dec) != make_projective(to_int64(out.Delta), to_int64(out.Omega)))
        throw InternalInconsistency("Delta/Omega disagrees with the decremented chain");
    return out;
}

NbhdInvariants mk2a_invariants(const Mk2A& x) {
    check_wahl(x.left);
    check_wahl(x.right);
    if (x.left.smooth() && x.right.smooth()) throw std::invalid_argument("mk2A needs a Wahl point on one side");
    const BigInt &m2 = x.left.m, &a2 = x.left.a, &m1 = x.right.m, &a1 = x.right.a;
    NbhdInvariants out;
    out.delta = m1 * a2 + m2 * a1 - m1 * m2;
    if (out.delta <= 0) throw NonPositiveDelta("delta = " + out.delta.str() + " for " + render(x));
    out.Delta = m1 * m1 + m2 * m2 - out.delta * m1 * m2;
    if (out.Delta <= 0) throw NonPositiveDelta("Delta = " + out.Delta.str() + " for " + render(x) + ", C is not contractible");
    out.Omega = (m2 - out.delta * m1) * (m2 - a2) + m1 * a1 - 1;
    out.kc = -Rational(out.delta, m1 * m2);
    out.cc = -Rational(out.Delta, m1 * m1 * m2 * m2);
    if (small(x.left) && small(x.right)) {
        Chain c = displayed_left(x.left);
        c.push_back(1);
        Chain r = displayed_right(x.right);
        c.insert(c.end(), r.begin(), r.end());
        // Omega is only defined modulo Delta once a side is smooth.
        const ProjectiveValue v = hj_eval(blow_down(c));
        if (BigInt(v.p) != out.Delta || (BigInt(v.q) - out.Omega) % out.Delta != 0)
            throw InternalInconsistency("Delta/Omega disagrees with the chain of " + render(x));
    }
    return out;
}

namespace {

// One step of the reverse Mori recursion, keeping the orientation in which
// the left side comes from the larger d.
Mk2A predecessor(const Mk2A& x, const BigInt& delta) {
    const BigInt &M2 = x.left.m, &A2 = x.left.a, &M1 = x.right.m, &A1 = x.right.a;
    Mk2A p;
    p.left = {M1, M1 - A1};
    if (p.left.smooth()) p.left.a = 1;
    BigInt d = delta * M1 - M2;
    p.right = {d, delta * A1 - M2 + A2};
    if (d == 1) p.right.a = 1;
    else p.right.a = mod_pos(p.right.a, d);
    return p;
}

Mk2A swapped(const Mk2A& x) { return {x.right, x.left}; }

}  // namespace

namespace {

struct Walk {
    Mk2A init;
    std::size_t steps = 0;
    std::size_t swaps = 0;
};

Walk walk_to_initial(const Mk2A& x) {
    const BigInt delta = mk2a_invariants(x).delta;
    Walk w{x};
    Mk2A& cur = w.init;
    for (;;) {
        BigInt d = delta * cur.right.m - cur.left.m;
        if (d <= 0) return w;
        BigInt ds = delta * cur.left.m - cur.right.m;
        if (ds <= 0) {
            cur = swapped(cur);
            ++w.swaps;
            return w;
        }
        if (d < cur.right.m) {
            cur = predecessor(cur, delta);
        } else if (ds < cur.left.m) {
            cur = predecessor(swapped(cur), delta);
            ++w.swaps;
        } else {
            throw InternalInconsistency("no decreasing Mori step from " + render(cur));
        }
        ++w.steps;
        if (mk2a_invariants(cur).delta != delta) throw InternalInconsistency("delta changed along the recursion");
    }
}

}  // namespace

std::pair<Mk2A, std::size_t> to_initial(const Mk2A& x) {
    Walk w = walk_to_initial(x);
    return {w.init, w.steps};
}

NbhdType classify(const Mk2A& x) {
    auto [init, steps] = to_initial(x);
    BigInt delta = mk2a_invariants(init).delta;
    return delta * init.right.m - init.left.m < 0 ? NbhdType::Flipping : NbhdType::Divisorial;
}

std::pair<std::optional<Mk2A>, std::optional<Mk2A>> mk1a_to_mk2a(const Mk1A& x) {
    BigWahl w = wahl_of_chain(x.chain);
    const std::size_t s = x.chain.size(), i = x.marked;
    if (i < 1 || i > s) throw std::invalid_argument("marked index out of range");
    std::optional<Mk2A> left, right;
    if (i > 1) {
        auto v = hj_eval(Chain(x.chain.begin(), x.chain.begin() + static_cast<std::ptrdiff_t>(i - 1)));
        left = Mk2A{{v.p, v.p - v.q}, w};
    }
    if (i < s) {
        auto v = hj_eval(Chain(x.chain.rbegin(), x.chain.rend() - static_cast<std::ptrdiff_t>(i)));
        right = Mk2A{{w.m, w.m - w.a}, {v.p, v.p - v.q}};
    }
    return {left, right};
}

Mk2A mk1a_representative(const Mk1A& x) {
    auto [l, r] = mk1a_to_mk2a(x);
    if (l) return *l;
    if (r) return *r;
    BigWahl w = wahl_of_chain(x.chain);
    return Mk2A{{w.m, w.m - w.a}, {1, 1}};
}

NbhdType classify(const Mk1A& x) {
    mk1a_invariants(x);
    return classify(mk1a_representative(x));
}

ExtremalPRes flip(const Mk2A& x) {
    const auto inv = mk2a_invariants(x);
    const Walk walk = walk_to_initial(x);
    const Mk2A& init = walk.init;
    const BigInt& delta = inv.delta;
    const BigInt &m2 = init.left.m, &a2 = init.left.a, &m1 = init.right.m, &a1 = init.right.a;
    if (delta * m1 - m2 >= 0) throw NotFlipping(render(x) + " is of divisorial type");

    ExtremalPRes out;
    out.left = {m1, init.right.smooth() ? BigInt(1) : m1 - a1};
    BigInt m1p = m2 - delta * m1;
    out.right = {m1p, m1p == 1 ? BigInt(1) : mod_pos(m2 - a2 - delta * a1, m1p)};
    BigInt num = delta + m1p * out.left.a + out.left.m * out.right.a;
    BigInt den = m1p * out.left.m;
    if (num % den != 0) throw InternalInconsistency("flip curve degree is not an integer");
    out.c = num / den;
    if (out.c < 1) throw InternalInconsistency("flip curve has nonpositive degree");

    // Each side swap on the way to the initial member reverses the reading
    // direction; undo them so the flip contracts to the same oriented point.
    if (walk.swaps % 2 == 1) std::swap(out.left, out.right);
    if (small(out.left) && small(out.right) &&
        !contracts_to(out.chain(), inv.Delta, inv.Omega))
        throw InternalInconsistency("flip " + to_string(out.chain()) + " changes Delta/Omega");
    return out;
}

ExtremalPRes flip(const Mk1A& x) {
    auto inv = mk1a_invariants(x);
    ExtremalPRes out = flip(mk1a_representative(x));
    if (!contracts_to(out.chain(), inv.Delta, inv.Omega))
        throw InternalInconsistency("flip changes Delta/Omega of the mk1A");
    return out;
}

std::vector<Mk2A> mori_sequence(const Mk2A& initial, std::size_t count) {
    const BigInt delta = mk2a_invariants(initial).delta;
    if (delta * initial.right.m - initial.left.m > 0) throw NotInitial(render(initial) + " is not initial");
    std::vector<BigInt> d{initial.right.m, initial.left.m};
    std::vector<BigInt> c{initial.right.a, initial.left.m - initial.left.a};
    std::vector<Mk2A> out{initial};
    while (out.size() < count) {
        BigInt dn = delta * d.back() - d[d.size() - 2];
        BigInt cn = delta * c.back() - c[c.size() - 2];
        if (dn <= 0) break;
        d.push_back(dn);
        c.push_back(cn);
        const std::size_t k = d.size() - 1;
        BigWahl lw{d[k], d[k] == 1 ? BigInt(1) : mod_pos(d[k] - c[k], d[k])};
        BigWahl rw{d[k - 1], d[k - 1] == 1 ? BigInt(1) : mod_pos(c[k - 1], d[k - 1])};
        Mk2A z{lw, rw};
        if (mk2a_invariants(z).delta != delta) throw InternalInconsistency("Mori member with a different delta");
        out.push_back(z);
        if (delta == 1) break;
    }
    return out;
}

ExtremalPRes usual_flip(const Mk1A& x) {
    const std::size_t s = x.chain.size();
    if (x.marked != s) throw NotEndMarked("usual flips need the mark on the last curve");
    wahl_of_chain(x.chain);
    std::size_t i = s;
    while (i >= 1 && x.chain[i - 1] < 3) --i;
    if (i == 0) throw InternalInconsistency("Wahl chain without an entry >= 3");
    ExtremalPRes out;
    if (i == 1) {
        out.c = x.chain[0] - 1;
        return out;
    }
    Chain rest(x.chain.begin() + 1, x.chain.begin() + static_cast<std::ptrdiff_t>(i));
    rest.back() -= 1;
    out.c = x.chain[0];
    out.right = wahl_of_chain(rest);
    return out;
}

std::int64_t degeneration_beta(const Rational& k_before, const Rational& k_after, const Rational& eplus_k) {
    if (eplus_k == 0) throw NonIntegralBeta("E+.K vanishes");
    Rational b = (k_before - k_after) / eplus_k;
    if (denominator(b) != 1 || b < 0) throw NonIntegralBeta("beta = " + to_string(b));
    return to_int64(numerator(b));
}

}  // namespace cqs
