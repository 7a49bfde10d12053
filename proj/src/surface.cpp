#include "cqs/surface.hpp"

#include "cqs/lattice.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cqs {

namespace {

std::pair<std::size_t, std::size_t> key(std::size_t i, std::size_t k) { return {std::min(i, k), std::max(i, k)}; }

struct Reduction {
    Chain minimal;
    std::vector<std::size_t> steps;  // position of each blown-down curve
};

Reduction reduce_chain(Chain c) {
    Reduction r;
    while (c.size() > 1) {
        auto it = std::find(c.begin(), c.end(), 1);
        if (it == c.end()) break;
        std::size_t i = static_cast<std::size_t>(it - c.begin());
        if (i > 0) c[i - 1] -= 1;
        if (i + 1 < c.size()) c[i + 1] -= 1;
        c.erase(it);
        r.steps.push_back(i);
    }
    r.minimal = std::move(c);
    return r;
}

Chain entries_of(const CurveConfig& c, const std::vector<std::size_t>& ids) {
    Chain out;
    for (auto v : ids) out.push_back(-c.curves[v].self_int);
    return out;
}

void check_exceptional_minus_one(const CurveConfig& c, std::size_t id) {
    if (id >= c.curves.size() || !c.curves[id].alive) throw std::out_of_range("no live curve " + std::to_string(id));
    const Curve& e = c.curves[id];
    if (e.kind != CurveKind::Exceptional || e.self_int != -1)
        throw NotContractible(e.name + " is not an exceptional (-1)-curve");
    if (c.run_of(id)) throw NotContractible(e.name + " lies in a contracted run");
}

bool meets_run(const CurveConfig& c, std::size_t id) {
    for (const auto& r : c.runs)
        for (auto v : r.ids)
            if (c.meet(id, v) != 0) return true;
    return false;
}

bool in_ledger(const CurveConfig& c, std::size_t id) {
    for (const auto& [row, l] : c.ledger)
        if (l.count(id)) return true;
    return false;
}

std::vector<Rational> ledger_degrees(const CurveConfig& c) {
    std::vector<Rational> out;
    for (std::size_t i = 0; i < c.rows.size(); ++i) out.push_back(c.ledger_k_degree(i));
    return out;
}

// Adds beta E+ to every row whose degeneration needs it and records the
// coefficients.
std::map<std::size_t, std::int64_t> degenerate(CurveConfig& c, const std::vector<Rational>& before,
                                               std::size_t eplus) {
    const Rational ke = c.k_degree(eplus);
    if (ke <= 0) throw InternalInconsistency("flipped curve has K.E+ = " + to_string(ke));
    std::map<std::size_t, std::int64_t> beta;
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
        std::int64_t b = degeneration_beta(before[i], c.ledger_k_degree(i), ke);
        if (b != 0) {
            c.ledger[c.rows[i]][eplus] += b;
            beta[i] = b;
        }
    }
    for (const auto& [row, l] : c.ledger)
        for (const auto& [v, coef] : l)
            if (c.run_of(v)) throw OutOfCatalog("degeneration of " + c.curves[row].name + " enters a contracted run");
    return beta;
}

void check_flip_preconditions(const CurveConfig& c, std::size_t id) {
    if (id >= c.curves.size() || !c.curves[id].alive) throw std::out_of_range("no live curve " + std::to_string(id));
    if (!is_flipping_curve(c, id)) throw NotFlipping(c.curves[id].name + " is not a flipping curve");
}

// E- leaves every degenerated decorated curve; the K-degree balance then
// fixes the multiple of E+ that replaces it.
void drop_from_ledgers(CurveConfig& c, std::size_t id) {
    for (auto& [row, l] : c.ledger) l.erase(id);
}

FlipRecord flip_non_t(CurveConfig& c, std::size_t id, std::size_t run) {
    const auto ids = c.runs[run].ids;
    std::set<std::size_t> in_run(ids.begin(), ids.end());
    auto run_nbrs = [&](std::size_t v) {
        std::vector<std::size_t> out;
        for (auto u : ids)
            if (u != v && c.meet(u, v) != 0) out.push_back(u);
        return out;
    };
    std::optional<std::size_t> centre;
    for (auto v : ids)
        if (run_nbrs(v).size() == 4 && c.curves[v].self_int == -4) centre = v;
    if (!centre || ids.size() != 6) throw OutOfCatalog("non-T run outside the catalog");
    std::vector<std::vector<std::size_t>> arms;
    for (auto first : run_nbrs(*centre)) {
        std::vector<std::size_t> arm{first};
        std::size_t prev = *centre;
        while (true) {
            std::vector<std::size_t> next;
            for (auto u : run_nbrs(arm.back()))
                if (u != prev) next.push_back(u);
            if (next.empty()) break;
            if (next.size() > 1) throw OutOfCatalog("non-T run outside the catalog");
            prev = arm.back();
            arm.push_back(next[0]);
        }
        arms.push_back(arm);
    }
    std::optional<std::size_t> long_arm, four_arm;
    std::vector<std::size_t> short_arms;
    for (std::size_t k = 0; k < arms.size(); ++k) {
        Chain e = entries_of(c, arms[k]);
        if (e == Chain{2, 2}) long_arm = k;
        else if (e == Chain{4}) four_arm = k;
        else if (e == Chain{2}) short_arms.push_back(k);
    }
    if (!long_arm || !four_arm || short_arms.size() != 2) throw OutOfCatalog("non-T run outside the catalog");

    std::vector<std::size_t> met;
    for (auto v : ids)
        for (std::int64_t m = c.meet(id, v); m > 0; --m) met.push_back(v);
    if (met.size() != 1) throw OutOfCatalog("flipping curve meets the non-T run more than once");
    std::size_t hit = short_arms.size();
    for (std::size_t k = 0; k < short_arms.size(); ++k)
        if (arms[short_arms[k]][0] == met[0]) hit = k;
    if (hit == short_arms.size()) throw OutOfCatalog("flipping curve meets the non-T run off a (-2)-arm");
    const std::size_t arm_curve = met[0];
    const std::size_t other = arms[short_arms[1 - hit]][0];

    const auto before = ledger_degrees(c);
    drop_from_ledgers(c, id);
    c.runs.erase(c.runs.begin() + static_cast<std::ptrdiff_t>(run));
    c.blow_down_curve(id);
    if (c.curves[arm_curve].self_int != -1) throw InternalInconsistency("non-T flip cascade");
    c.blow_down_curve(arm_curve);

    const std::size_t eplus = arms[*long_arm][0];
    const std::size_t outer = arms[*long_arm][1];
    const std::size_t four = arms[*four_arm][0];
    ConfigRun t{{other, *centre, four}, RunKind::T, t_recognize(entries_of(c, {other, *centre, four}))};
    if (!t.t) throw InternalInconsistency("non-T flip did not produce a T-singularity");
    c.runs.push_back(t);
    c.runs.push_back({{outer}, RunKind::DuVal, std::nullopt});

    FlipRecord rec;
    rec.eminus = id;
    rec.eplus = eplus;
    rec.rewrite = "[2]-2-" + to_string(entries_of(c, t.ids));
    rec.beta = degenerate(c, before, eplus);
    return rec;
}

}  // namespace

std::size_t CurveConfig::add_curve(std::int64_t self_int, CurveKind kind, std::string name) {
    Curve cv;
    cv.self_int = self_int;
    cv.kind = kind;
    cv.kdeg = -2 - self_int;
    cv.name = name.empty() ? "v" + std::to_string(curves.size()) : std::move(name);
    curves.push_back(std::move(cv));
    return curves.size() - 1;
}

std::int64_t CurveConfig::meet(std::size_t i, std::size_t k) const {
    if (i == k) return curves.at(i).self_int;
    auto it = edges.find(key(i, k));
    return it == edges.end() ? 0 : it->second;
}

void CurveConfig::add_meet(std::size_t i, std::size_t k, std::int64_t m) {
    if (i == k) throw std::invalid_argument("add_meet on a single curve");
    auto& e = edges[key(i, k)];
    e += m;
    if (e < 0) throw InternalInconsistency("negative intersection between " + curves[i].name + " and " + curves[k].name);
    if (e == 0) edges.erase(key(i, k));
}

std::vector<std::size_t> CurveConfig::neighbours(std::size_t i) const {
    std::vector<std::size_t> out;
    for (const auto& [p, m] : edges) {
        if (m == 0) continue;
        if (p.first == i) out.push_back(p.second);
        else if (p.second == i) out.push_back(p.first);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::size_t> CurveConfig::run_of(std::size_t i) const {
    for (std::size_t r = 0; r < runs.size(); ++r)
        if (std::find(runs[r].ids.begin(), runs[r].ids.end(), i) != runs[r].ids.end()) return r;
    return std::nullopt;
}

std::size_t CurveConfig::alive_count() const {
    return static_cast<std::size_t>(std::count_if(curves.begin(), curves.end(), [](const Curve& c) { return c.alive; }));
}

std::vector<Rational> CurveConfig::run_discrepancies(std::size_t run) const {
    const auto& ids = runs.at(run).ids;
    if (runs[run].kind == RunKind::DuVal) return std::vector<Rational>(ids.size(), Rational(0));
    DualGraph g;
    for (auto v : ids) g.b.push_back(-curves[v].self_int);
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t k = i + 1; k < ids.size(); ++k)
            if (auto m = meet(ids[i], ids[k])) g.edges.emplace_back(i, k, m);
    return discrepancies(g);
}

Rational CurveConfig::k_degree(std::size_t id) const {
    if (run_of(id)) return 0;
    Rational k = curves.at(id).kdeg;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        std::vector<Rational> a;
        for (std::size_t j = 0; j < runs[r].ids.size(); ++j) {
            if (auto m = meet(id, runs[r].ids[j])) {
                if (a.empty()) a = run_discrepancies(r);
                k += a[j] * m;
            }
        }
    }
    return k;
}

Rational CurveConfig::ledger_k_degree(std::size_t row) const {
    Rational k = 0;
    for (const auto& [v, coef] : ledger.at(rows.at(row))) k += k_degree(v) * coef;
    return k;
}

void CurveConfig::blow_down_curve(std::size_t id) {
    Curve& e = curves.at(id);
    if (!e.alive || e.self_int != -1) throw NotContractible(e.name + " is not a (-1)-curve");
    std::vector<std::pair<std::size_t, std::int64_t>> nb;
    for (auto x : neighbours(id)) nb.emplace_back(x, meet(id, x));
    for (auto [x, m] : nb) {
        curves[x].self_int += m * m;
        curves[x].kdeg -= m;
        edges.erase(key(id, x));
    }
    for (std::size_t i = 0; i < nb.size(); ++i)
        for (std::size_t k = i + 1; k < nb.size(); ++k) add_meet(nb[i].first, nb[k].first, nb[i].second * nb[k].second);
    e.alive = false;
}

std::size_t CurveConfig::blow_up_node(std::size_t u, std::size_t v) {
    if (meet(u, v) < 1) throw InternalInconsistency(curves[u].name + " and " + curves[v].name + " do not meet");
    std::size_t n = add_curve(-1, CurveKind::Exceptional);
    for (auto w : {u, v}) {
        curves[w].self_int -= 1;
        curves[w].kdeg += 1;
        add_meet(w, n, 1);
    }
    add_meet(u, v, -1);
    return n;
}

DualGraph CurveConfig::exceptional_graph(std::vector<std::size_t>* ids) const {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < curves.size(); ++i)
        if (curves[i].alive && curves[i].kind == CurveKind::Exceptional) keep.push_back(i);
    DualGraph g;
    for (auto v : keep) g.b.push_back(-curves[v].self_int);
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t k = i + 1; k < keep.size(); ++k)
            if (auto m = meet(keep[i], keep[k])) g.edges.emplace_back(i, k, m);
    if (ids) *ids = keep;
    return g;
}

std::string CurveConfig::describe_ledger(std::size_t row) const {
    const std::size_t id = rows.at(row);
    std::string s = curves[id].name + " ~> ";
    bool first = true;
    for (const auto& [v, coef] : ledger.at(id)) {
        if (!first) s += " + ";
        first = false;
        if (coef != 1) s += std::to_string(coef);
        s += curves[v].name;
    }
    return s;
}

SandwichedStructure build_sandwiched_cqss(const Fraction& f) {
    SandwichedStructure s;
    CurveConfig& c = s.config;
    const Chain b = hj_expand(f);
    const std::size_t r = b.size();
    for (std::size_t i = 0; i < r; ++i) {
        s.exceptional.push_back(c.add_curve(-b[i], CurveKind::Exceptional, "E" + std::to_string(i + 1)));
        if (i > 0) c.add_meet(s.exceptional[i - 1], s.exceptional[i], 1);
    }
    std::vector<std::int64_t> attach;
    for (std::size_t i = 0; i < r; ++i) {
        std::int64_t count = b[i] - 2 + (i + 1 == r ? 1 : 0);
        for (std::int64_t k = 0; k < count; ++k) {
            const std::string idx = std::to_string(s.sandwich.size() + 1);
            std::size_t fv = c.add_curve(-1, CurveKind::Exceptional, "F" + idx);
            std::size_t cv = c.add_curve(0, CurveKind::Decorated, "C" + idx);
            c.add_meet(s.exceptional[i], fv, 1);
            c.add_meet(fv, cv, 1);
            s.sandwich.push_back(fv);
            c.rows.push_back(cv);
            c.ledger[cv] = {{cv, 1}};
            attach.push_back(static_cast<std::int64_t>(i + 1));
        }
    }
    c.add_curve(1, CurveKind::Infinity, "L");

    auto dots = curvetta_dots(f);
    if (dots.size() != c.rows.size()) throw InternalInconsistency("curvetta count differs from the dot diagram");
    std::vector<HClass> cls;
    for (const auto& d : dots) cls.push_back(class_C(f, d.row, d.pos));
    const std::size_t n = c.rows.size();
    s.data.delta.assign(n, 0);
    s.data.inter.assign(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<std::int64_t>(dots[i].row) != attach[i])
            throw InternalInconsistency("curvetta order differs from the dot-column order");
        s.data.l.push_back(1 + attach[i]);
        for (std::size_t k = 0; k < n; ++k) s.data.inter[i][k] = shared_base_points(cls[i], cls[k]);
    }
    return s;
}

SandwichedStructure build_sandwiched_wpqr(std::int64_t p, std::int64_t q, std::int64_t r) {
    if (p < 0 || q < 0 || r < 0) throw std::invalid_argument("W(p,q,r) needs p,q,r >= 0");
    SandwichedStructure s;
    CurveConfig& c = s.config;
    const std::size_t centre = c.add_curve(-4, CurveKind::Exceptional, "E0");
    s.exceptional.push_back(centre);
    const std::int64_t twos[3] = {q, r, p};
    const std::int64_t ends[3] = {p + 3, q + 3, r + 3};
    const char* arm_name[3] = {"A", "B", "C"};
    std::vector<std::vector<std::size_t>> path_of_row;
    std::vector<int> branch;
    for (int a = 0; a < 3; ++a) {
        std::vector<std::size_t> path{centre};
        std::size_t prev = centre;
        for (std::int64_t k = 0; k <= twos[a]; ++k) {
            std::int64_t self = k == twos[a] ? -ends[a] : -2;
            std::size_t v = c.add_curve(self, CurveKind::Exceptional,
                                        std::string("E") + arm_name[a] + std::to_string(k + 1));
            c.add_meet(prev, v, 1);
            s.exceptional.push_back(v);
            path.push_back(v);
            prev = v;
        }
        for (std::int64_t k = 0; k < ends[a] - 1; ++k) {
            const std::string idx = std::string(arm_name[a]) + std::to_string(k + 1);
            std::size_t fv = c.add_curve(-1, CurveKind::Exceptional, "F" + idx);
            std::size_t cv = c.add_curve(0, CurveKind::Decorated, idx);
            c.add_meet(prev, fv, 1);
            c.add_meet(fv, cv, 1);
            s.sandwich.push_back(fv);
            c.rows.push_back(cv);
            c.ledger[cv] = {{cv, 1}};
            path_of_row.push_back(path);
            branch.push_back(a);
        }
    }
    c.add_curve(1, CurveKind::Infinity, "L");

    const std::size_t n = c.rows.size();
    s.data.delta.assign(n, 0);
    s.data.inter.assign(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        s.data.l.push_back(static_cast<std::int64_t>(path_of_row[i].size()) + 1);
        for (std::size_t k = 0; k < n; ++k) {
            const auto& x = path_of_row[i];
            const auto& y = path_of_row[k];
            std::size_t common = 0;
            while (common < x.size() && common < y.size() && x[common] == y[common]) ++common;
            s.data.inter[i][k] = static_cast<std::int64_t>(common);
        }
    }
    s.data.branch = branch;
    return s;
}

CurveConfig compactify_m_resolution(const AnnotatedChain& m_res, const SandwichedStructure& s) {
    const CurveConfig& base = s.config;
    std::vector<std::size_t> ids = s.exceptional;
    const Chain minimal = entries_of(base, ids);
    for (std::size_t i = 1; i < ids.size(); ++i)
        if (base.meet(ids[i - 1], ids[i]) != 1)
            throw IncompatibleResolution("structure is not a cyclic quotient chain");

    AnnotatedChain z = m_res;
    for (const auto& r : z.runs) {
        Chain part(z.entries.begin() + static_cast<std::ptrdiff_t>(r.begin),
                   z.entries.begin() + static_cast<std::ptrdiff_t>(r.end));
        if (r.kind != RunKind::T || !wahl_recognize(part))
            throw IncompatibleResolution(to_string(part) + " is not a Wahl singularity");
    }
    Reduction red = reduce_chain(z.entries);
    if (red.minimal != minimal) {
        Chain rev(red.minimal.rbegin(), red.minimal.rend());
        if (rev != minimal)
            throw IncompatibleResolution(z.render() + " does not blow down to " + to_string(minimal));
        std::reverse(z.entries.begin(), z.entries.end());
        const std::size_t len = z.entries.size();
        for (auto& r : z.runs) r = {len - r.end, len - r.begin, r.kind, r.t};
        red = reduce_chain(z.entries);
    }

    CurveConfig c = base;
    for (auto it = red.steps.rbegin(); it != red.steps.rend(); ++it) {
        const std::size_t i = *it;
        if (i == 0 || i >= ids.size())
            throw IncompatibleResolution(z.render() + " needs a blow-up off the chain nodes");
        ids.insert(ids.begin() + static_cast<std::ptrdiff_t>(i), c.blow_up_node(ids[i - 1], ids[i]));
    }
    if (entries_of(c, ids) != z.entries) throw InternalInconsistency("compactified chain mismatch");
    for (const auto& r : z.runs) {
        std::vector<std::size_t> run_ids(ids.begin() + static_cast<std::ptrdiff_t>(r.begin),
                                         ids.begin() + static_cast<std::ptrdiff_t>(r.end));
        c.runs.push_back({run_ids, RunKind::T, t_recognize(entries_of(c, run_ids))});
    }
    return c;
}

std::vector<std::size_t> find_minus_one(const CurveConfig& c) {
    std::vector<std::size_t> near, far;
    for (std::size_t i = 0; i < c.curves.size(); ++i) {
        const Curve& cv = c.curves[i];
        if (!cv.alive || cv.kind != CurveKind::Exceptional || cv.self_int != -1 || c.run_of(i)) continue;
        bool adjacent = false;
        for (auto x : c.neighbours(i))
            if (c.curves[x].kind == CurveKind::Decorated) adjacent = true;
        (adjacent ? near : far).push_back(i);
    }
    near.insert(near.end(), far.begin(), far.end());
    return near;
}

std::vector<std::int64_t> divisorial_contract(CurveConfig& c, std::size_t id) {
    check_exceptional_minus_one(c, id);
    if (meets_run(c, id)) throw NotContractible(c.curves[id].name + " meets a contracted run");
    std::vector<std::int64_t> col;
    for (auto row : c.rows) {
        std::int64_t x = 0;
        for (const auto& [v, coef] : c.ledger.at(row)) x += coef * c.meet(v, id);
        col.push_back(x);
    }
    c.blow_down_curve(id);
    for (auto& [row, l] : c.ledger) l.erase(id);
    return col;
}

bool is_flipping_curve(const CurveConfig& c, std::size_t id) {
    if (id >= c.curves.size()) return false;
    const Curve& e = c.curves[id];
    if (!e.alive || e.kind != CurveKind::Exceptional || e.self_int != -1 || c.run_of(id)) return false;
    bool hits = false;
    for (const auto& r : c.runs)
        if (r.kind != RunKind::DuVal)
            for (auto v : r.ids)
                if (c.meet(id, v) != 0) hits = true;
    return hits && c.k_degree(id) < 0;
}

FlipRecord apply_flip(CurveConfig& c, std::size_t id) {
    check_flip_preconditions(c, id);

    struct Hit {
        std::size_t run;
        std::size_t pos;
    };
    std::vector<Hit> hits;
    for (std::size_t r = 0; r < c.runs.size(); ++r) {
        std::int64_t total = 0;
        std::size_t pos = 0;
        for (std::size_t j = 0; j < c.runs[r].ids.size(); ++j)
            if (auto m = c.meet(id, c.runs[r].ids[j])) {
                total += m;
                pos = j;
            }
        if (total == 0) continue;
        if (c.runs[r].kind == RunKind::NonT) return flip_non_t(c, id, r);
        if (total != 1) throw OutOfCatalog(c.curves[id].name + " meets a run more than once");
        if (c.runs[r].kind != RunKind::T || !c.runs[r].t || c.runs[r].t->d != 1)
            throw OutOfCatalog(c.curves[id].name + " meets a run that is not a Wahl singularity");
        hits.push_back({r, pos});
    }

    ExtremalPRes res;
    std::vector<std::size_t> local;
    if (hits.size() == 1) {
        local = c.runs[hits[0].run].ids;
        Mk1A x{entries_of(c, local), hits[0].pos + 1};
        if (classify(x) != NbhdType::Flipping) throw OutOfCatalog("divisorial extremal neighbourhood");
        res = flip(x);
    } else if (hits.size() == 2) {
        std::vector<std::size_t> left = c.runs[hits[0].run].ids;
        std::vector<std::size_t> right = c.runs[hits[1].run].ids;
        if (hits[0].pos == 0 && left.size() > 1) std::reverse(left.begin(), left.end());
        else if (hits[0].pos + 1 != left.size()) throw OutOfCatalog("flipping curve meets a run off its ends");
        if (hits[1].pos + 1 == right.size() && right.size() > 1) std::reverse(right.begin(), right.end());
        else if (hits[1].pos != 0) throw OutOfCatalog("flipping curve meets a run off its ends");
        Chain le = entries_of(c, left);
        Mk2A x{wahl_of_chain(Chain(le.rbegin(), le.rend())), wahl_of_chain(entries_of(c, right))};
        if (classify(x) != NbhdType::Flipping) throw OutOfCatalog("divisorial extremal neighbourhood");
        res = flip(x);
        local = left;
        local.insert(local.end(), right.begin(), right.end());
    } else {
        throw OutOfCatalog(c.curves[id].name + " meets " + std::to_string(hits.size()) + " runs");
    }

    const auto before = ledger_degrees(c);
    drop_from_ledgers(c, id);
    std::vector<std::size_t> drop;
    for (const auto& h : hits) drop.push_back(h.run);
    std::sort(drop.rbegin(), drop.rend());
    for (auto r : drop) c.runs.erase(c.runs.begin() + static_cast<std::ptrdiff_t>(r));

    // Curves through the image point of E-, with their multiplicity there.
    std::map<std::size_t, std::int64_t> through;
    for (auto x : c.neighbours(id)) through[x] = c.meet(id, x);
    c.blow_down_curve(id);
    std::set<std::size_t> local_set(local.begin(), local.end());
    while (true) {
        std::optional<std::size_t> w;
        for (auto v : local)
            if (c.curves[v].alive && c.curves[v].self_int == -1) {
                w = v;
                break;
            }
        if (!w) break;
        if (!through.count(*w)) throw OutOfCatalog("flip contracts a curve away from the flipped point");
        if (in_ledger(c, *w)) throw OutOfCatalog("flip contracts part of a degenerated decorated curve");
        std::map<std::size_t, std::int64_t> next;
        for (auto x : c.neighbours(*w)) next[x] = c.meet(*w, x);
        c.blow_down_curve(*w);
        through = std::move(next);
    }

    std::vector<std::size_t> ids;
    for (auto v : local)
        if (c.curves[v].alive) ids.push_back(v);
    if (ids.empty()) throw OutOfCatalog("flip contracts the whole chain");
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (c.curves[ids[i]].self_int > -2) throw OutOfCatalog("flipped point is not a cyclic quotient");
        for (std::size_t k = i + 1; k < ids.size(); ++k)
            if (c.meet(ids[i], ids[k]) != (k == i + 1 ? 1 : 0)) throw OutOfCatalog("flipped point is not a chain");
    }
    const Chain ymin = entries_of(c, ids);

    Chain z = res.chain();
    std::size_t c_idx = res.c_index();
    Reduction red = reduce_chain(z);
    if (red.minimal != ymin) {
        std::reverse(z.begin(), z.end());
        c_idx = z.size() - 1 - c_idx;
        red = reduce_chain(z);
        if (red.minimal != ymin)
            throw InternalInconsistency("flip " + res.render() + " does not contract to " + to_string(ymin));
    }

    std::optional<std::pair<std::size_t, std::size_t>> node;
    {
        std::vector<std::size_t> on;
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (through.count(ids[i])) on.push_back(i);
        if (on.size() > 2 || (on.size() == 2 && on[1] != on[0] + 1))
            throw OutOfCatalog("flipped point lies on more than one node");
        if (on.size() == 2) node = {ids[on[0]], ids[on[1]]};
    }
    for (auto it = red.steps.rbegin(); it != red.steps.rend(); ++it) {
        const std::size_t i = *it;
        if (i == 0 || i >= ids.size()) throw OutOfCatalog("flip needs a blow-up off the chain nodes");
        const std::size_t u = ids[i - 1], v = ids[i];
        const std::size_t n = c.blow_up_node(u, v);
        if (node && key(node->first, node->second) == key(u, v)) {
            std::vector<std::pair<std::size_t, std::int64_t>> outside;
            for (auto [g, mu] : through)
                if (!local_set.count(g) && c.curves[g].alive) outside.emplace_back(g, mu);
            for (auto [g, mu] : outside) {
                c.add_meet(g, u, -mu);
                c.add_meet(g, v, -mu);
                c.add_meet(g, n, mu);
                c.curves[g].self_int -= mu * mu;
                c.curves[g].kdeg += mu;
            }
            for (std::size_t a = 0; a < outside.size(); ++a)
                for (std::size_t b = a + 1; b < outside.size(); ++b)
                    c.add_meet(outside[a].first, outside[b].first, -outside[a].second * outside[b].second);
            node.reset();
        }
        ids.insert(ids.begin() + static_cast<std::ptrdiff_t>(i), n);
    }
    if (entries_of(c, ids) != z) throw InternalInconsistency("flipped chain mismatch");

    const std::size_t eplus = ids[c_idx];
    std::vector<std::size_t> lpart(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(c_idx));
    std::vector<std::size_t> rpart(ids.begin() + static_cast<std::ptrdiff_t>(c_idx) + 1, ids.end());
    for (const auto& part : {lpart, rpart}) {
        if (part.empty()) continue;
        auto t = t_recognize(entries_of(c, part));
        if (!t) throw InternalInconsistency("flip produced a non-T run " + to_string(entries_of(c, part)));
        c.runs.push_back({part, RunKind::T, t});
    }

    FlipRecord rec;
    rec.eminus = id;
    rec.eplus = eplus;
    rec.rewrite = res.render();
    rec.beta = degenerate(c, before, eplus);
    return rec;
}

Matrix run_config(CurveConfig c, const DecoratedCurveData& data, const RunOptions& opt) {
    const std::size_t budget = 10 * c.alive_count();
    std::vector<std::vector<std::int64_t>> cols;
    auto snapshot = [&]() {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < c.rows.size(); ++i) out.push_back(c.describe_ledger(i));
        return out;
    };
    for (std::size_t step = 0;; ++step) {
        if (step > budget) throw NonTerminating("step budget of " + std::to_string(budget) + " exceeded");
        auto cand = find_minus_one(c);
        if (opt.reverse_worklist) std::reverse(cand.begin(), cand.end());
        auto fl = std::find_if(cand.begin(), cand.end(), [&](std::size_t x) { return is_flipping_curve(c, x); });
        if (fl != cand.end()) {
            const std::string name = c.curves[*fl].name;
            FlipRecord rec = apply_flip(c, *fl);
            if (opt.trace) opt.trace->push_back({"flip", *fl, {}, name + " -> " + rec.rewrite, snapshot()});
            continue;
        }
        auto ct = std::find_if(cand.begin(), cand.end(), [&](std::size_t x) { return !meets_run(c, x); });
        if (ct == cand.end()) break;
        const std::string name = c.curves[*ct].name;
        auto col = divisorial_contract(c, *ct);
        if (opt.trace) opt.trace->push_back({"contract", *ct, col, name, snapshot()});
        cols.push_back(std::move(col));
    }
    if (!c.runs.empty()) throw NonTerminating("no flip or contraction applies but contracted runs remain");
    Matrix m = canonical(Matrix::from_columns(cols, c.rows.size()));
    auto rep = validate_incidence(m, data);
    if (!rep.ok) throw InternalInconsistency("MMP output " + m.render() + " is not an incidence matrix: " + rep.failures.front());
    return m;
}

Matrix run_phi_pi(const AnnotatedChain& m_res, const SandwichedStructure& s, const RunOptions& opt) {
    return run_config(compactify_m_resolution(m_res, s), s.data, opt);
}

NonTFixture non_t_fixture() {
    NonTFixture fx;
    CurveConfig& c = fx.config;
    auto add = [&](std::int64_t b, const std::string& name) { return c.add_curve(-b, CurveKind::Exceptional, name); };
    std::size_t centre = add(4, "Z0");
    std::size_t north = add(2, "Z1");
    std::size_t south = add(2, "Z2");
    std::size_t west1 = add(2, "Z3");
    std::size_t west2 = add(2, "Z4");
    std::size_t east = add(4, "Z5");
    for (auto v : {north, south, west1, east}) c.add_meet(centre, v, 1);
    c.add_meet(west1, west2, 1);
    c.runs.push_back({{centre, north, south, west1, west2, east}, RunKind::NonT, std::nullopt});
    fx.eminus = c.add_curve(-1, CurveKind::Exceptional, "E-");
    c.add_meet(fx.eminus, north, 1);
    std::size_t g = c.add_curve(0, CurveKind::Decorated, "C");
    c.add_meet(g, fx.eminus, 1);
    c.rows.push_back(g);
    c.ledger[g] = {{g, 1}};
    return fx;
}

Mk1AFixture mk1a_fixture(const Mk1A& x) {
    if (x.marked < 1 || x.marked > x.chain.size()) throw std::out_of_range("mk1A mark out of range");
    auto t = t_recognize(x.chain);
    if (!t || t->d != 1) throw NotWahl(to_string(x.chain) + " is not a Wahl chain");
    Mk1AFixture fx;
    CurveConfig& c = fx.config;
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < x.chain.size(); ++i) {
        ids.push_back(c.add_curve(-x.chain[i], CurveKind::Exceptional, "Z" + std::to_string(i + 1)));
        if (i > 0) c.add_meet(ids[i - 1], ids[i], 1);
    }
    c.runs.push_back({ids, RunKind::T, t});
    fx.eminus = c.add_curve(-1, CurveKind::Exceptional, "E-");
    c.add_meet(fx.eminus, ids[x.marked - 1], 1);
    std::size_t g = c.add_curve(0, CurveKind::Decorated, "C");
    c.add_meet(g, fx.eminus, 1);
    c.rows.push_back(g);
    c.ledger[g] = {{g, 1}};
    return fx;
}

}  // namespace cqs
