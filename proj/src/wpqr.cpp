#include "cqs/wpqr.hpp"

#include "cqs/surface.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>

namespace cqs {

namespace {

using Column = std::vector<std::int64_t>;

struct Block {
    std::int64_t n;    // rows
    std::int64_t l;    // l of each row
    std::int64_t prm;  // parameter that must be >= 1 for type II
};

std::array<Block, 3> blocks_of(const WpqrParams& w) {
    return {Block{w.p + 2, w.q + 3, w.p}, Block{w.q + 2, w.r + 3, w.q}, Block{w.r + 2, w.p + 3, w.r}};
}

void check_params(const WpqrParams& w) {
    if (w.p < 0 || w.q < 0 || w.r < 0) throw std::invalid_argument("W(p,q,r) needs p,q,r >= 0");
}

// Number of all-ones columns the block needs and its remaining columns.
struct SubBlock {
    std::int64_t ones;
    std::vector<Column> distinct;
};

SubBlock sub_block(const Block& b, SubType t) {
    SubBlock s;
    s.ones = t == SubType::I ? b.l - 1 : b.l + 1 - b.n;
    for (std::int64_t j = 0; j < b.n; ++j) {
        Column c(static_cast<std::size_t>(b.n), t == SubType::I ? 0 : 1);
        c[static_cast<std::size_t>(j)] = t == SubType::I ? 1 : 0;
        s.distinct.push_back(c);
    }
    return s;
}

class Assembler {
public:
    explicit Assembler(const WpqrParams& w) : b_(blocks_of(w)) {}

    // Column with the given parts on blocks 0..2; empty parts are zero.
    Column col(const Column& x, const Column& y, const Column& z) const { return col(std::array<Column, 3>{x, y, z}); }
    Column col(const std::array<Column, 3>& parts) const {
        Column out;
        for (int k = 0; k < 3; ++k) {
            if (parts[k].empty())
                out.insert(out.end(), static_cast<std::size_t>(b_[k].n), 0);
            else
                out.insert(out.end(), parts[k].begin(), parts[k].end());
        }
        return out;
    }
    Column ones(int k) const { return Column(static_cast<std::size_t>(b_[k].n), 1); }
    Column only(int k, const Column& v) const {
        std::array<Column, 3> parts;
        parts[k] = v;
        return col(parts);
    }
    void repeat(std::vector<Column>& cols, const Column& c, std::int64_t times) const {
        for (std::int64_t t = 0; t < times; ++t) cols.push_back(c);
    }
    std::size_t rows() const { return static_cast<std::size_t>(b_[0].n + b_[1].n + b_[2].n); }
    const Block& block(int k) const { return b_[k]; }

private:
    std::array<Block, 3> b_;
};

std::string type_name(SubType t) { return t == SubType::I ? "I" : "II"; }

int rotation_of(const std::string& tag) {
    if (tag == "M3") return 0;
    if (tag == "M4") return 1;
    if (tag == "M5") return 2;
    return -1;
}

std::optional<Matrix> build(const WpqrParams& w, const std::string& tag, const std::array<SubType, 3>& types) {
    check_params(w);
    Assembler a(w);
    std::vector<Column> cols;
    if (tag == "M1" || tag == "M2") {
        const std::int64_t need = tag == "M1" ? 1 : 2;
        std::array<SubBlock, 3> subs;
        for (int k = 0; k < 3; ++k) {
            if (!subtype_allowed(w, k, types[k])) return std::nullopt;
            subs[k] = sub_block(a.block(k), types[k]);
            if (subs[k].ones < need) return std::nullopt;
        }
        if (tag == "M1") {
            cols.push_back(a.col(a.ones(0), a.ones(1), a.ones(2)));
        } else {
            cols.push_back(a.col(a.ones(0), a.ones(1), {}));
            cols.push_back(a.col({}, a.ones(1), a.ones(2)));
            cols.push_back(a.col(a.ones(0), {}, a.ones(2)));
        }
        for (int k = 0; k < 3; ++k) {
            a.repeat(cols, a.only(k, a.ones(k)), subs[k].ones - need);
            for (const auto& v : subs[k].distinct) cols.push_back(a.only(k, v));
        }
    } else if (int k = rotation_of(tag); k >= 0) {
        const int k1 = (k + 1) % 3, k2 = (k + 2) % 3;
        for (int j : {k, k2})
            if (types[j] != SubType::I) return std::nullopt;
        if (!subtype_allowed(w, k1, types[k1])) return std::nullopt;
        SubBlock s0 = sub_block(a.block(k), SubType::I);
        SubBlock s1 = sub_block(a.block(k1), types[k1]);
        SubBlock s2 = sub_block(a.block(k2), SubType::I);
        const std::int64_t need = a.block(k).n + 1;
        if (s1.ones < need || s0.ones < 1 || s2.ones < 2) return std::nullopt;
        auto c3 = [&](const Column& x, const Column& y, const Column& z) {
            std::array<Column, 3> parts;
            parts[k] = x;
            parts[k1] = y;
            parts[k2] = z;
            return a.col(parts);
        };
        for (const auto& v : s0.distinct) cols.push_back(c3(v, a.ones(k1), {}));
        cols.push_back(c3(a.ones(k), {}, a.ones(k2)));
        cols.push_back(c3({}, a.ones(k1), a.ones(k2)));
        a.repeat(cols, c3(a.ones(k), {}, {}), s0.ones - 1);
        a.repeat(cols, c3({}, a.ones(k1), {}), s1.ones - need);
        for (const auto& v : s1.distinct) cols.push_back(c3({}, v, {}));
        a.repeat(cols, c3({}, {}, a.ones(k2)), s2.ones - 2);
        for (const auto& v : s2.distinct) cols.push_back(c3({}, {}, v));
    } else if (tag == "M6" || tag == "M7") {
        if (tag == "M7" && !(w.p == w.q && w.q == w.r)) return std::nullopt;
        auto identity = [&](int k) { return sub_block(a.block(k), SubType::I).distinct; };
        if (tag == "M6") {
            for (const auto& v : identity(1)) cols.push_back(a.col(a.ones(0), v, {}));
            for (const auto& v : identity(0)) cols.push_back(a.col(v, {}, a.ones(2)));
            for (const auto& v : identity(2)) cols.push_back(a.col({}, a.ones(1), v));
        } else {
            for (const auto& v : identity(2)) cols.push_back(a.col(a.ones(0), {}, v));
            for (const auto& v : identity(0)) cols.push_back(a.col(v, a.ones(1), {}));
            for (const auto& v : identity(1)) cols.push_back(a.col({}, v, a.ones(2)));
        }
    } else {
        throw std::invalid_argument("unknown W(p,q,r) family " + tag);
    }
    return canonical(Matrix::from_columns(cols, a.rows()));
}

std::vector<std::array<SubType, 3>> all_types() {
    std::vector<std::array<SubType, 3>> out;
    for (auto x : {SubType::I, SubType::II})
        for (auto y : {SubType::I, SubType::II})
            for (auto z : {SubType::I, SubType::II}) out.push_back({x, y, z});
    return out;
}

std::vector<std::array<SubType, 3>> types_for(const std::string& tag) {
    if (tag == "M1" || tag == "M2") return all_types();
    if (int k = rotation_of(tag); k >= 0) {
        std::array<SubType, 3> t1{SubType::I, SubType::I, SubType::I};
        std::array<SubType, 3> t2 = t1;
        t2[(k + 1) % 3] = SubType::II;
        return {t1, t2};
    }
    return {{SubType::I, SubType::I, SubType::I}};
}

Chain twos(std::int64_t n) { return Chain(static_cast<std::size_t>(std::max<std::int64_t>(n, 0)), 2); }

void append(Chain& c, const Chain& more) { c.insert(c.end(), more.begin(), more.end()); }

// Run given as (arm, position) pairs; arm -1 is the centre.
using RunSpec = std::vector<std::pair<int, std::int64_t>>;

StarGraph assemble(std::int64_t central, const std::array<Chain, 3>& arms, const std::vector<RunSpec>& runs) {
    StarGraph g;
    g.central = central;
    g.arms.assign(arms.begin(), arms.end());
    for (const auto& spec : runs) {
        GraphRun run;
        for (auto [arm, pos] : spec)
            run.vertices.push_back(arm < 0 ? 0 : g.arm_vertex(static_cast<std::size_t>(arm), static_cast<std::size_t>(pos)));
        g.runs.push_back(run);
    }
    return g;
}

RunSpec arm_range(int arm, std::int64_t from, std::int64_t to) {
    RunSpec s;
    for (auto k = from; k < to; ++k) s.emplace_back(arm, k);
    return s;
}

WpqrPResolution one_or_two(const WpqrParams& w, const std::string& tag, const std::array<SubType, 3>& types) {
    StarGraph base = wpqr_graph(w);
    std::array<Chain, 3> arms{base.arms[0], base.arms[1], base.arms[2]};
    const std::int64_t prm[3] = {w.p, w.q, w.r};
    std::vector<RunSpec> runs;
    if (tag == "M2") runs.push_back({{-1, 0}});
    for (int k = 0; k < 3; ++k) {
        if (types[k] != SubType::II) continue;
        const auto len = static_cast<std::int64_t>(arms[k].size());
        const std::int64_t start = len - prm[k];
        if (start < (tag == "M2" ? 1 : 0))
            throw InternalInconsistency("Wahl run on arm " + std::to_string(k) + " does not fit");
        runs.push_back(arm_range(k, start, len));
    }
    return {"", assemble(base.central, arms, runs)};
}

// The M3 graph in the frame where the ones-carrying block is B.
WpqrPResolution three(const WpqrParams& w, int k, SubType t1) {
    WpqrParams f = w;
    for (int i = 0; i < k; ++i) f = f.rotated();
    const auto [p, q, r] = std::tuple{f.p, f.q, f.r};
    Chain x{1};
    append(x, twos(p));
    if (q >= 1) {
        x.push_back(3);
        append(x, twos(q - 1));
        x.push_back(p + 3);
    } else {
        x.push_back(p + 4);
    }
    Chain y = twos(p + 1);
    if (t1 == SubType::I) {
        append(y, twos(r - p - 1));
    } else {
        append(y, twos(r - p - q));
        append(y, twos(q - 1));
    }
    y.push_back(q + 3);
    Chain z = twos(p);
    z.push_back(r + 3);

    // Role 0 is the block of rotation k; output arms are in A, B, C order.
    std::array<Chain, 3> roles{x, y, z};
    std::array<Chain, 3> arms;
    std::array<int, 3> arm_of_role{};
    for (int role = 0; role < 3; ++role) {
        arm_of_role[role] = (role + k) % 3;
        arms[arm_of_role[role]] = roles[role];
    }
    std::vector<RunSpec> runs;
    runs.push_back(arm_range(arm_of_role[0], 1, static_cast<std::int64_t>(x.size())));
    RunSpec centre_run{{-1, 0}};
    for (auto s : arm_range(arm_of_role[1], 0, p + 1)) centre_run.push_back(s);
    runs.push_back(centre_run);
    if (t1 == SubType::II)
        runs.push_back(arm_range(arm_of_role[1], static_cast<std::int64_t>(y.size()) - q, static_cast<std::int64_t>(y.size())));
    return {"", assemble(p + 5, arms, runs)};
}

}  // namespace

StarGraph wpqr_graph(const WpqrParams& w) {
    check_params(w);
    StarGraph g;
    g.central = 4;
    const std::int64_t t[3] = {w.q, w.r, w.p};
    const std::int64_t e[3] = {w.p + 3, w.q + 3, w.r + 3};
    for (int k = 0; k < 3; ++k) {
        Chain arm = twos(t[k]);
        arm.push_back(e[k]);
        g.arms.push_back(arm);
    }
    return g;
}

std::string WpqrFamily::label() const {
    static const char* names = "ABC";
    std::string s = tag;
    if (tag == "M1" || tag == "M2") {
        for (int k = 0; k < 3; ++k) s += std::string(" ") + names[k] + "(" + type_name(types[k]) + ")";
    } else if (int k = rotation_of(tag); k >= 0) {
        const int k1 = (k + 1) % 3;
        s += std::string(" ") + names[k1] + "(" + type_name(types[k1]) + ")";
    }
    return s;
}

bool subtype_allowed(const WpqrParams& w, int block, SubType t) {
    if (t == SubType::I) return true;
    const Block b = blocks_of(w).at(static_cast<std::size_t>(block));
    return b.prm >= 1 && b.l + 1 - b.n >= 0;
}

Matrix wpqr_family_matrix(const WpqrParams& w, const std::string& tag, const std::array<SubType, 3>& types) {
    auto m = build(w, tag, types);
    WpqrFamily f{tag, types, {}};
    if (!m) throw ConditionViolated(f.label() + " is not admissible for W(" + std::to_string(w.p) + "," +
                                    std::to_string(w.q) + "," + std::to_string(w.r) + ")");
    return *m;
}

std::vector<WpqrFamily> wpqr_families(const WpqrParams& w) {
    std::vector<WpqrFamily> out;
    std::set<Matrix> seen;
    for (const std::string tag : {"M1", "M2", "M3", "M4", "M5", "M6", "M7"})
        for (const auto& types : types_for(tag))
            if (auto m = build(w, tag, types); m && seen.insert(*m).second) out.push_back({tag, types, *m});
    return out;
}

WpqrPResolution wpqr_p_resolution(const WpqrParams& w, const std::string& tag, const std::array<SubType, 3>& types) {
    WpqrFamily f{tag, types, wpqr_family_matrix(w, tag, types)};
    WpqrPResolution out;
    if (tag == "M1" || tag == "M2") {
        out = one_or_two(w, tag, types);
    } else if (int k = rotation_of(tag); k >= 0) {
        out = three(w, k, types[(k + 1) % 3]);
    } else {
        throw ConditionViolated(tag + " is realised by a rational homology disk smoothing, not a P-resolution");
    }
    out.label = f.label();
    return out;
}

std::vector<WpqrPResolution> wpqr_p_resolutions(const WpqrParams& w) {
    std::vector<WpqrPResolution> out;
    for (const auto& f : wpqr_families(w))
        if (f.tag != "M6" && f.tag != "M7") out.push_back(wpqr_p_resolution(w, f.tag, f.types));
    return out;
}

std::string describe_unclassified(const WpqrParams& w, const Matrix& m) {
    auto b = blocks_of(w);
    std::int64_t off[4] = {0, b[0].n, b[0].n + b[1].n, b[0].n + b[1].n + b[2].n};
    std::int64_t pair[3] = {0, 0, 0};
    std::int64_t triple = 0;
    for (const auto& c : m.columns()) {
        bool hit[3];
        for (int k = 0; k < 3; ++k)
            hit[k] = std::any_of(c.begin() + off[k], c.begin() + off[k + 1], [](std::int64_t x) { return x != 0; });
        if (hit[0] && hit[1] && hit[2]) {
            ++triple;
            continue;
        }
        for (int k = 0; k < 3; ++k)
            if (hit[k] && hit[(k + 1) % 3]) ++pair[k];
    }
    return "AB=" + std::to_string(pair[0]) + " BC=" + std::to_string(pair[1]) + " CA=" + std::to_string(pair[2]) +
           " ABC=" + std::to_string(triple) + " columns=" + std::to_string(m.col_count());
}

KollarReport kollar_check(const WpqrParams& w, bool strict) {
    KollarReport rep;
    rep.params = w;
    auto s = build_sandwiched_wpqr(w.p, w.q, w.r);
    auto enumerated = enumerate_incidence(s.data);
    auto fams = wpqr_families(w);
    rep.enumerated = enumerated.size();
    rep.families = fams.size();
    std::set<Matrix> fam_set, enum_set(enumerated.begin(), enumerated.end());
    for (const auto& f : fams) {
        fam_set.insert(f.matrix);
        if (!enum_set.count(f.matrix)) rep.missing.push_back(f.label());
    }
    for (const auto& m : enumerated)
        if (!fam_set.count(m)) rep.unclassified.push_back(m);

    const DualGraph target = wpqr_graph(w).to_graph();
    for (const auto& f : fams) {
        if (f.tag == "M6" || f.tag == "M7") {
            if (milnor_number(f.matrix) == 0)
                rep.qhd.push_back(f.label());
            else
                rep.failed_presolutions.push_back(f.label() + " (nonzero Milnor number)");
            continue;
        }
        bool ok = false;
        try {
            ok = is_p_resolution(wpqr_p_resolution(w, f.tag, f.types).graph.to_marked(), target);
        } catch (const cqs_error&) {
            ok = false;
        }
        (ok ? rep.verified : rep.failed_presolutions).push_back(f.label());
    }
    if (strict && !rep.unclassified.empty())
        throw MismatchReport(std::to_string(rep.unclassified.size()) + " enumerated matrices of W(" +
                             std::to_string(w.p) + "," + std::to_string(w.q) + "," + std::to_string(w.r) +
                             ") lie in no family; first: " + describe_unclassified(w, rep.unclassified.front()));
    return rep;
}

}  // namespace cqs
