#include "cqs/tclass.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace cqs {

namespace {

std::int64_t isqrt_exact(std::int64_t v) {
    if (v < 0) return -1;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r * r == v ? r : -1;
}

bool all_at_least_two(const Chain& c) {
    return !c.empty() && std::all_of(c.begin(), c.end(), [](std::int64_t x) { return x >= 2; });
}

// Undo T-algorithm moves [b..] -> [2,b_1..,b_r+1] and [b_1+1,..,b_r,2] until
// neither applies.
Chain strip_to_seed(Chain c) {
    while (c.size() > 1) {
        if (c.front() == 2 && c.back() >= 3) {
            c.erase(c.begin());
            c.back() -= 1;
        } else if (c.back() == 2 && c.front() >= 3) {
            c.pop_back();
            c.front() -= 1;
        } else {
            break;
        }
    }
    return c;
}

// d for the seeds [4], [3,3], [3,2,..,2,3]; 0 if c is not a seed.
std::int64_t seed_d(const Chain& c) {
    if (c == Chain{4}) return 1;
    if (c.size() < 2 || c.front() != 3 || c.back() != 3) return 0;
    for (std::size_t i = 1; i + 1 < c.size(); ++i)
        if (c[i] != 2) return 0;
    return static_cast<std::int64_t>(c.size());
}

// det of the tridiagonal form with diagonal c and off-diagonal -1; empty = 1.
std::vector<std::int64_t> left_continuants(const Chain& c) {
    std::vector<std::int64_t> L(c.size() + 1);
    L[0] = 1;
    std::int64_t prev = 0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        L[k + 1] = checked_sub(checked_mul(c[k], L[k]), prev);
        prev = L[k];
    }
    return L;
}

std::vector<std::int64_t> right_continuants(const Chain& c) {
    Chain r(c.rbegin(), c.rend());
    auto L = left_continuants(r);
    std::reverse(L.begin(), L.end());
    return L;  // R[k] = det of c[k..]
}

// Discrepancy numerators over the common denominator n = det(c).
std::pair<std::vector<std::int64_t>, std::int64_t> discrepancy_numerators(const Chain& c) {
    auto L = left_continuants(c);
    auto R = right_continuants(c);
    std::int64_t n = L.back();
    if (n == 0) throw SingularSystem("chain " + to_string(c) + " has determinant 0");
    std::vector<std::int64_t> num(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) num[j] = checked_sub(checked_sub(n, L[j]), R[j + 1]);
    return {num, n};
}

std::vector<Rational> solve_rational(std::vector<std::vector<Rational>> A, std::vector<Rational> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && A[piv][col] == 0) ++piv;
        if (piv == n) throw SingularSystem("intersection matrix is singular");
        std::swap(A[piv], A[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col] == 0) continue;
            Rational f = A[r][col] / A[col][col];
            for (std::size_t k = col; k < n; ++k) A[r][k] -= f * A[col][k];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / A[i][i];
    return x;
}

DualGraph induced(const DualGraph& g, const std::vector<std::size_t>& vs) {
    DualGraph out;
    std::map<std::size_t, std::size_t> idx;
    for (auto v : vs) {
        idx[v] = out.b.size();
        out.b.push_back(g.b.at(v));
    }
    for (auto [i, k, m] : g.edges) {
        auto a = idx.find(i), b = idx.find(k);
        if (a != idx.end() && b != idx.end()) out.edges.emplace_back(a->second, b->second, m);
    }
    return out;
}

// Orders the vertices of a path graph end to end; empty when g is not a path.
std::vector<std::size_t> path_order(const DualGraph& g) {
    const std::size_t n = g.size();
    if (n == 0) return {};
    if (g.edges.size() != n - 1) return {};
    for (auto [i, k, m] : g.edges)
        if (m != 1 || i == k) return {};
    std::vector<std::vector<std::size_t>> adj(n);
    for (auto [i, k, m] : g.edges) {
        adj[i].push_back(k);
        adj[k].push_back(i);
    }
    std::size_t start = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (adj[v].size() > 2) return {};
        if (adj[v].size() <= 1) {
            start = v;
            break;
        }
    }
    std::vector<std::size_t> order{start};
    std::vector<bool> seen(n, false);
    seen[start] = true;
    while (order.size() < n) {
        std::size_t cur = order.back(), nxt = n;
        for (auto w : adj[cur])
            if (!seen[w]) nxt = w;
        if (nxt == n) return {};
        seen[nxt] = true;
        order.push_back(nxt);
    }
    return order;
}

}  // namespace

Fraction TData::fraction() const {
    std::int64_t N = checked_mul(d, checked_mul(n, n));
    return Fraction(N, checked_sub(checked_mul(d, checked_mul(n, a)), 1));
}

std::optional<WahlData> wahl_recognize(const Chain& c) {
    if (!all_at_least_two(c)) return std::nullopt;
    if (strip_to_seed(c) != Chain{4}) return std::nullopt;
    auto v = hj_eval(c);
    std::int64_t m = isqrt_exact(v.p);
    if (m < 2 || (v.q + 1) % m != 0) throw InternalInconsistency("Wahl chain with non-Wahl value");
    return WahlData{m, (v.q + 1) / m};
}

std::optional<TData> t_recognize(const Chain& c) {
    if (!all_at_least_two(c)) return std::nullopt;
    std::int64_t d = seed_d(strip_to_seed(c));
    if (d == 0) return std::nullopt;
    auto v = hj_eval(c);
    if (v.p % d != 0) throw InternalInconsistency("T chain with non-T value");
    std::int64_t n = isqrt_exact(v.p / d);
    if (n < 2 || (v.q + 1) % (d * n) != 0) throw InternalInconsistency("T chain with non-T value");
    return TData{d, n, (v.q + 1) / (d * n)};
}

Chain wahl_chain(const WahlData& w) {
    if (w.smooth()) return {};
    return hj_expand(Fraction(checked_mul(w.m, w.m), checked_sub(checked_mul(w.m, w.a), 1)));
}

std::vector<std::pair<std::int64_t, std::int64_t>> DotDiagram::dots() const {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    std::int64_t col = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::int64_t k = 0; k < rows[i]; ++k) out.emplace_back(static_cast<std::int64_t>(i), col + k);
        col += rows[i] - 1;
    }
    if (extended && !rows.empty()) out.emplace_back(static_cast<std::int64_t>(rows.size()), col + 1);
    return out;
}

DotDiagram dot_diagram(const Chain& c, bool extended) {
    DotDiagram d;
    d.extended = extended;
    for (auto b : c) {
        if (b < 2) throw std::invalid_argument("dot diagram needs entries >= 2");
        d.rows.push_back(b - 1);
    }
    return d;
}

DotPosition delta_dot(const Chain& c) {
    if (!wahl_recognize(c)) throw NotWahl(to_string(c) + " is not a Wahl chain");
    auto dots = dot_diagram(c).dots();
    auto [row, col] = dots[dots.size() / 2];
    return {static_cast<std::size_t>(row) + 1, col + 1};
}

bool AnnotatedChain::marked(std::size_t i) const {
    for (const auto& r : runs)
        if (r.begin <= i && i < r.end) return true;
    return false;
}

std::string AnnotatedChain::render() const {
    std::string s;
    std::size_t i = 0;
    while (i < entries.size()) {
        if (!s.empty()) s += "-";
        const MarkedRun* run = nullptr;
        for (const auto& r : runs)
            if (r.begin == i) run = &r;
        if (run) {
            s += "[";
            for (std::size_t k = run->begin; k < run->end; ++k) {
                if (k > run->begin) s += ",";
                s += std::to_string(entries[k]);
            }
            s += "]";
            i = run->end;
        } else {
            s += std::to_string(entries[i]);
            ++i;
        }
    }
    return s;
}

AnnotatedChain crepant_m_resolution(const TData& t) {
    Chain w = wahl_chain(WahlData{t.n, t.a});
    AnnotatedChain out;
    for (std::int64_t k = 0; k < t.d; ++k) {
        if (k) out.entries.push_back(1);
        MarkedRun r{out.entries.size(), out.entries.size() + w.size(), RunKind::T, TData{1, t.n, t.a}};
        out.entries.insert(out.entries.end(), w.begin(), w.end());
        out.runs.push_back(r);
    }
    return out;
}

std::int64_t DualGraph::meet(std::size_t i, std::size_t k) const {
    std::int64_t s = 0;
    for (auto [x, y, m] : edges)
        if ((x == i && y == k) || (x == k && y == i)) s += m;
    return s;
}

std::vector<std::size_t> DualGraph::neighbours(std::size_t i) const {
    std::set<std::size_t> out;
    for (auto [x, y, m] : edges) {
        if (x == i && y != i) out.insert(y);
        if (y == i && x != i) out.insert(x);
    }
    return {out.begin(), out.end()};
}

DualGraph DualGraph::from_chain(const Chain& c) {
    DualGraph g;
    g.b = c;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) g.edges.emplace_back(i, i + 1, 1);
    return g;
}

std::size_t StarGraph::arm_vertex(std::size_t arm, std::size_t pos) const {
    std::size_t v = 1;
    for (std::size_t k = 0; k < arm; ++k) v += arms.at(k).size();
    if (pos >= arms.at(arm).size()) throw std::out_of_range("arm position");
    return v + pos;
}

MarkedGraph StarGraph::to_marked() const {
    MarkedGraph mg;
    mg.graph.b.push_back(central);
    for (const auto& arm : arms) {
        std::size_t prev = 0;
        for (auto x : arm) {
            std::size_t v = mg.graph.b.size();
            mg.graph.b.push_back(x);
            mg.graph.edges.emplace_back(prev, v, 1);
            prev = v;
        }
    }
    mg.runs = runs;
    return mg;
}

std::vector<Rational> discrepancies(const Chain& c) {
    auto [num, n] = discrepancy_numerators(c);
    std::vector<Rational> out;
    out.reserve(num.size());
    for (auto x : num) out.emplace_back(x, n);
    return out;
}

std::vector<Rational> discrepancies(const DualGraph& g) {
    const std::size_t n = g.size();
    std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n));
    std::vector<Rational> rhs(n);
    for (std::size_t k = 0; k < n; ++k) {
        A[k][k] = -g.b[k];
        rhs[k] = 2 - g.b[k];
    }
    for (auto [i, k, m] : g.edges) {
        if (i == k) throw std::invalid_argument("self-loops are not supported");
        A[i][k] += m;
        A[k][i] += m;
    }
    return solve_rational(std::move(A), std::move(rhs));
}

std::vector<Rational> discrepancies_by_elimination(const Chain& c) {
    return discrepancies(DualGraph::from_chain(c));
}

Rational canonical_degree(const DualGraph& g, const std::vector<std::size_t>& contracted,
                          const Rational& k_tilde, const std::map<std::size_t, std::int64_t>& mult) {
    Rational out = k_tilde;
    if (contracted.empty()) return out;
    auto a = discrepancies(induced(g, contracted));
    for (std::size_t j = 0; j < contracted.size(); ++j) {
        auto it = mult.find(contracted[j]);
        if (it != mult.end()) out += a[j] * it->second;
    }
    return out;
}

std::pair<DualGraph, std::vector<std::size_t>> blow_down_graph(const DualGraph& g,
                                                               const std::vector<bool>& protect) {
    const std::size_t n = g.size();
    std::vector<bool> alive(n, true);
    std::vector<std::int64_t> b = g.b;
    std::map<std::pair<std::size_t, std::size_t>, std::int64_t> E;
    for (auto [i, k, m] : g.edges) E[{std::min(i, k), std::max(i, k)}] += m;
    auto nbrs = [&](std::size_t v) {
        std::vector<std::pair<std::size_t, std::int64_t>> out;
        for (auto& [key, m] : E) {
            if (m == 0) continue;
            if (key.first == v && alive[key.second]) out.emplace_back(key.second, m);
            if (key.second == v && alive[key.first]) out.emplace_back(key.first, m);
        }
        return out;
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t v = 0; v < n; ++v) {
            if (!alive[v] || b[v] != 1 || (!protect.empty() && protect[v])) continue;
            auto nb = nbrs(v);
            if (nb.size() > 2) continue;
            alive[v] = false;
            for (auto [w, m] : nb) b[w] -= m * m;
            if (nb.size() == 2) {
                auto [w1, m1] = nb[0];
                auto [w2, m2] = nb[1];
                E[{std::min(w1, w2), std::max(w1, w2)}] += m1 * m2;
            }
            changed = true;
            break;
        }
    }
    DualGraph out;
    std::vector<std::size_t> ids;
    std::map<std::size_t, std::size_t> idx;
    for (std::size_t v = 0; v < n; ++v)
        if (alive[v]) {
            idx[v] = out.b.size();
            ids.push_back(v);
            out.b.push_back(b[v]);
        }
    for (auto& [key, m] : E)
        if (m && alive[key.first] && alive[key.second]) out.edges.emplace_back(idx[key.first], idx[key.second], m);
    return {out, ids};
}

namespace {

std::string tree_code(const std::vector<std::vector<std::size_t>>& adj, const DualGraph& g, std::size_t v,
                      std::size_t parent) {
    std::vector<std::string> kids;
    for (auto w : adj[v])
        if (w != parent) kids.push_back(tree_code(adj, g, w, v));
    std::sort(kids.begin(), kids.end());
    std::string s = "(" + std::to_string(g.b[v]);
    for (auto& k : kids) s += k;
    return s + ")";
}

std::string tree_canonical(const DualGraph& g) {
    const std::size_t n = g.size();
    if (n == 0) return "";
    if (g.edges.size() != n - 1) throw std::invalid_argument("graph is not a tree");
    std::vector<std::vector<std::size_t>> adj(n);
    for (auto [i, k, m] : g.edges) {
        if (m != 1) throw std::invalid_argument("graph has a multiple edge");
        adj[i].push_back(k);
        adj[k].push_back(i);
    }
    std::string best;
    for (std::size_t r = 0; r < n; ++r) {
        auto code = tree_code(adj, g, r, n);
        if (best.empty() || code < best) best = code;
    }
    return best;
}

}  // namespace

bool isomorphic_trees(const DualGraph& x, const DualGraph& y) {
    if (x.size() != y.size()) return false;
    return tree_canonical(x) == tree_canonical(y);
}

namespace {

// Shared K-positivity check. `run_of[v]` is the run index or -1.
bool runs_and_positivity_ok(const DualGraph& g, const std::vector<GraphRun>& runs) {
    const std::size_t n = g.size();
    std::vector<int> run_of(n, -1);
    for (std::size_t r = 0; r < runs.size(); ++r)
        for (auto v : runs[r].vertices) {
            if (v >= n || run_of[v] != -1) return false;
            run_of[v] = static_cast<int>(r);
        }
    for (auto [i, k, m] : g.edges)
        if (run_of[i] != -1 && run_of[k] != -1 && run_of[i] != run_of[k]) return false;

    std::vector<Rational> a(n);
    for (std::size_t r = 0; r < runs.size(); ++r) {
        if (runs[r].kind == RunKind::NonT) return false;
        DualGraph sub = induced(g, runs[r].vertices);
        if (runs[r].kind == RunKind::DuVal) {
            if (!std::all_of(sub.b.begin(), sub.b.end(), [](std::int64_t x) { return x == 2; })) return false;
            continue;
        }
        auto order = path_order(sub);
        if (order.empty()) return false;
        Chain c;
        for (auto v : order) c.push_back(sub.b[v]);
        if (!t_recognize(c)) return false;
        auto d = discrepancies(sub);
        for (std::size_t j = 0; j < runs[r].vertices.size(); ++j) a[runs[r].vertices[j]] = d[j];
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (run_of[v] != -1) continue;
        Rational k = g.b[v] - 2;
        for (auto [i, j, m] : g.edges) {
            if (i == v && run_of[j] != -1) k += a[j] * m;
            if (j == v && run_of[i] != -1) k += a[i] * m;
        }
        if (k > 0) continue;
        if (k == 0 && g.b[v] == 2) continue;
        return false;
    }
    return true;
}

}  // namespace

bool is_p_resolution(const MarkedGraph& candidate, const DualGraph& target) {
    auto [down, ids] = blow_down_graph(candidate.graph);
    if (!isomorphic_trees(down, target)) throw BlowDownMismatch("candidate does not blow down to the target graph");
    return runs_and_positivity_ok(candidate.graph, candidate.runs);
}

bool is_p_resolution(const AnnotatedChain& candidate, const Fraction& target) {
    auto expect = hj_expand(target);
    Chain down = blow_down(candidate.entries);
    if (down != expect)
        throw BlowDownMismatch(to_string(candidate.entries) + " blows down to " + to_string(down) + ", not " +
                               to_string(expect));
    MarkedGraph mg{DualGraph::from_chain(candidate.entries), {}};
    for (const auto& r : candidate.runs) {
        if (r.begin >= r.end || r.end > candidate.entries.size()) return false;
        GraphRun gr;
        gr.kind = r.kind;
        for (auto v = r.begin; v < r.end; ++v) gr.vertices.push_back(v);
        mg.runs.push_back(gr);
    }
    return runs_and_positivity_ok(mg.graph, mg.runs);
}

namespace {

struct RunInfo {
    TData t;
    std::int64_t n;                  // det of the run
    std::int64_t first_num, last_num;  // end discrepancies over n
};

class PresolSearch {
public:
    explicit PresolSearch(const Chain& c) : c_(c), e_(c.size()) {}

    std::vector<AnnotatedChain> run() {
        std::vector<MarkedRun> runs;
        rec(0, runs);
        return std::move(out_);
    }

private:
    const Chain& c_;
    std::size_t e_;
    std::map<Chain, std::optional<RunInfo>> cache_;
    std::vector<AnnotatedChain> out_;

    const std::optional<RunInfo>& info(std::size_t i, std::size_t j) {
        Chain key(c_.begin() + static_cast<std::ptrdiff_t>(i), c_.begin() + static_cast<std::ptrdiff_t>(j));
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        std::optional<RunInfo> v;
        if (auto t = t_recognize(key)) {
            auto [num, n] = discrepancy_numerators(key);
            v = RunInfo{*t, n, num.front(), num.back()};
        }
        return cache_.emplace(std::move(key), v).first->second;
    }

    const RunInfo* run_at(const std::vector<MarkedRun>& runs, std::size_t pos) {
        for (const auto& r : runs)
            if (r.begin <= pos && pos < r.end) return &*info(r.begin, r.end);
        return nullptr;
    }

    bool minus_one_curves_ok(const std::vector<MarkedRun>& runs) {
        for (std::size_t k = 0; k < e_; ++k) {
            if (c_[k] != 1) continue;
            if (k == 0 || k + 1 == e_) return false;
            const RunInfo* L = nullptr;
            const RunInfo* R = nullptr;
            std::int64_t ln = 0, rn = 0;
            for (const auto& r : runs) {
                if (r.end == k) {
                    L = &*info(r.begin, r.end);
                    ln = L->last_num;
                }
                if (r.begin == k + 1) {
                    R = &*info(r.begin, r.end);
                    rn = R->first_num;
                }
            }
            if (!L || !R) return false;
            // -1 + ln/L.n + rn/R.n > 0
            if (checked_add(checked_mul(ln, R->n), checked_mul(rn, L->n)) <= checked_mul(L->n, R->n)) return false;
        }
        return true;
    }

    void emit(const std::vector<MarkedRun>& runs) {
        if (!minus_one_curves_ok(runs)) return;
        AnnotatedChain ac{c_, runs};
        // Unmarked (-2)-curves with K.E = 0 are contracted to Du Val points.
        std::vector<bool> zero(e_, false);
        for (std::size_t k = 0; k < e_; ++k) {
            if (ac.marked(k) || c_[k] != 2) continue;
            bool left = k > 0 && run_at(runs, k - 1);
            bool right = k + 1 < e_ && run_at(runs, k + 1);
            zero[k] = !left && !right;
        }
        for (std::size_t k = 0; k < e_;) {
            if (!zero[k]) {
                ++k;
                continue;
            }
            std::size_t j = k;
            while (j < e_ && zero[j]) ++j;
            ac.runs.push_back(MarkedRun{k, j, RunKind::DuVal, std::nullopt});
            k = j;
        }
        std::sort(ac.runs.begin(), ac.runs.end(),
                  [](const MarkedRun& x, const MarkedRun& y) { return x.begin < y.begin; });
        out_.push_back(std::move(ac));
    }

    void rec(std::size_t pos, std::vector<MarkedRun>& runs) {
        if (pos >= e_) {
            emit(runs);
            return;
        }
        // A (-1)-curve needs runs on both sides, so the curve before it
        // cannot stay unmarked.
        bool next_is_one = pos + 1 < e_ && c_[pos + 1] == 1;
        if (!(next_is_one && c_[pos] != 1)) rec(pos + 1, runs);
        if (c_[pos] == 1) return;
        for (std::size_t j = pos + 1; j <= e_ && c_[j - 1] >= 2; ++j) {
            const auto& inf = info(pos, j);
            if (!inf) continue;
            runs.push_back(MarkedRun{pos, j, RunKind::T, inf->t});
            // The curve after a run is unmarked.
            rec(j + 1, runs);
            runs.pop_back();
        }
    }
};

}  // namespace

std::vector<AnnotatedChain> enumerate_p_resolutions(const Fraction& f, std::size_t depth_bound) {
    Chain minimal = hj_expand(f);
    Chain dual_chain = hj_expand(dual(f));
    if (depth_bound == 0)
        for (auto x : dual_chain) depth_bound += static_cast<std::size_t>(x);

    // Chains dominated by the maximal resolution: blow up nodes whose new
    // curve keeps a nonnegative discrepancy over X.
    std::set<Chain> seen{minimal};
    std::vector<Chain> stack{minimal};
    while (!stack.empty()) {
        Chain c = std::move(stack.back());
        stack.pop_back();
        if (c.size() - minimal.size() >= depth_bound) continue;
        auto [num, n] = discrepancy_numerators(c);
        for (std::size_t i = 0; i + 1 < c.size(); ++i) {
            if (checked_add(num[i], num[i + 1]) - n < 0) continue;
            Chain nc = blow_up(c, i + 1);
            if (seen.insert(nc).second) stack.push_back(std::move(nc));
        }
    }

    std::vector<AnnotatedChain> out;
    for (const auto& c : seen) {
        auto part = PresolSearch(c).run();
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    std::sort(out.begin(), out.end(),
              [](const AnnotatedChain& x, const AnnotatedChain& y) { return x.render() < y.render(); });

    if (dual_chain.size() >= 2) {
        auto k = k_of_x(f);
        if (out.size() < k.size())
            throw DepthBoundTooSmall("found " + std::to_string(out.size()) + " P-resolutions but |K(X)| = " +
                                     std::to_string(k.size()));
    }
    return out;
}

AnnotatedChain m_resolution_of(const AnnotatedChain& p) {
    AnnotatedChain out;
    std::size_t i = 0;
    while (i < p.entries.size()) {
        const MarkedRun* run = nullptr;
        for (const auto& r : p.runs)
            if (r.begin == i) run = &r;
        if (!run) {
            out.entries.push_back(p.entries[i++]);
            continue;
        }
        if (run->kind == RunKind::DuVal) {
            for (auto k = run->begin; k < run->end; ++k) out.entries.push_back(p.entries[k]);
        } else {
            Chain slice(p.entries.begin() + static_cast<std::ptrdiff_t>(run->begin),
                        p.entries.begin() + static_cast<std::ptrdiff_t>(run->end));
            auto t = t_recognize(slice);
            if (!t) throw InternalInconsistency("marked run " + to_string(slice) + " is not T");
            auto m = crepant_m_resolution(*t);
            for (auto r : m.runs) {
                r.begin += out.entries.size();
                r.end += out.entries.size();
                out.runs.push_back(r);
            }
            out.entries.insert(out.entries.end(), m.entries.begin(), m.entries.end());
        }
        i = run->end;
    }
    return out;
}

}  // namespace cqs
