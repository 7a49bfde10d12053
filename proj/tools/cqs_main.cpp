#include "cqs/format.hpp"
#include "cqs/hjcf.hpp"
#include "cqs/matrices.hpp"
#include "cqs/mmp.hpp"
#include "cqs/report.hpp"
#include "cqs/surface.hpp"
#include "cqs/tclass.hpp"
#include "cqs/wpqr.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <functional>
#include <iostream>
#include <sstream>

using nlohmann::json;

namespace {

struct Output {
    std::string text;
    json data = json::object();
    std::string dot;
};

struct Flags {
    bool json = false;
    bool dot = false;
    bool trace = false;
};

json to_json(const cqs::Matrix& m) { return m.rows; }

json to_json(const cqs::AnnotatedChain& c) {
    json runs = json::array();
    for (const auto& r : c.runs) {
        const char* kind = r.kind == cqs::RunKind::T ? "T" : r.kind == cqs::RunKind::DuVal ? "DuVal" : "NonT";
        runs.push_back({{"begin", r.begin}, {"end", r.end}, {"kind", kind}});
    }
    return {{"text", c.render()}, {"entries", c.entries}, {"runs", runs}};
}

std::string matrices_text(const std::vector<cqs::Matrix>& ms) {
    std::string s;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (i) s += "\n";
        s += ms[i].render();
    }
    return s;
}

std::string projective_text(const cqs::ProjectiveValue& v) { return std::to_string(v.p) + "/" + std::to_string(v.q); }

cqs::MarkedGraph chain_graph(const cqs::AnnotatedChain& c) {
    cqs::MarkedGraph g{cqs::DualGraph::from_chain(c.entries), {}};
    for (const auto& r : c.runs) {
        cqs::GraphRun gr;
        gr.kind = r.kind;
        for (auto v = r.begin; v < r.end; ++v) gr.vertices.push_back(v);
        g.runs.push_back(gr);
    }
    return g;
}

Output cmd_hj(const std::string& op, const std::string& arg) {
    Output o;
    if (op == "expand") {
        auto c = cqs::hj_expand(cqs::parse_fraction(arg));
        o.text = cqs::to_string(c) + "\n";
        o.data["result"] = c;
    } else if (op == "eval") {
        auto v = cqs::hj_eval(cqs::parse_chain(arg));
        o.text = projective_text(v) + "\n";
        o.data["result"] = {v.p, v.q};
    } else if (op == "dual") {
        auto d = cqs::dual(cqs::parse_fraction(arg));
        o.text = std::to_string(d.n) + "/" + std::to_string(d.a) + "\n";
        o.data["result"] = {d.n, d.a};
    } else {
        throw CLI::ValidationError("hj", "operation must be expand, eval or dual");
    }
    return o;
}

Output cmd_wahl(const std::string& arg) {
    Output o;
    auto c = cqs::parse_chain(arg);
    std::ostringstream s;
    if (auto w = cqs::wahl_recognize(c)) {
        s << "Wahl m=" << w->m << " a=" << w->a << "\n";
        o.data["wahl"] = {{"m", w->m}, {"a", w->a}};
    }
    if (auto t = cqs::t_recognize(c)) {
        s << "T d=" << t->d << " n=" << t->n << " a=" << t->a << "\n";
        o.data["t"] = {{"d", t->d}, {"n", t->n}, {"a", t->a}};
    } else {
        s << "not T\n";
        o.data["t"] = nullptr;
    }
    json disc = json::array();
    s << "discrepancies:";
    for (const auto& a : cqs::discrepancies(c)) {
        s << " " << cqs::to_string(a);
        disc.push_back(cqs::to_string(a));
    }
    s << "\n";
    o.data["discrepancies"] = disc;
    o.text = s.str();
    return o;
}

Output cmd_kseq(const std::string& arg) {
    Output o;
    auto ks = cqs::k_of_x(cqs::parse_fraction(arg));
    for (const auto& k : ks) o.text += cqs::to_string(k) + "\n";
    o.data["result"] = ks;
    return o;
}

Output cmd_presol(const std::string& arg) {
    Output o;
    auto ps = cqs::enumerate_p_resolutions(cqs::parse_fraction(arg));
    o.data["result"] = json::array();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        o.text += ps[i].render() + "\n";
        o.data["result"].push_back(to_json(ps[i]));
        o.dot += cqs::to_dot(chain_graph(ps[i]), "P" + std::to_string(i + 1));
    }
    return o;
}

Output cmd_incidence(const std::string& arg) {
    Output o;
    auto ms = cqs::enumerate_incidence(cqs::build_sandwiched_cqss(cqs::parse_fraction(arg)).data);
    o.text = matrices_text(ms);
    o.data["result"] = json::array();
    for (const auto& m : ms) o.data["result"].push_back(to_json(m));
    return o;
}

Output cmd_maps(const std::string& arg) {
    Output o;
    auto f = cqs::parse_fraction(arg);
    const cqs::Chain a_chain = cqs::hj_expand(cqs::dual(f));
    auto ms = cqs::enumerate_incidence(cqs::build_sandwiched_cqss(f).data);
    o.data["result"] = json::array();
    for (std::size_t i = 0; i < ms.size(); ++i) {
        auto h = cqs::phi_ih_cyclic(ms[i]);
        json row{{"incidence", to_json(ms[i])}, {"homology", to_json(h)}, {"milnor", cqs::milnor_number(ms[i])}};
        if (i) o.text += "\n";
        o.text += "incidence\n" + ms[i].render() + "homology\n" + h.render();
        if (a_chain.size() >= 2) {
            auto k = cqs::phi_ik(ms[i], a_chain);
            row["kseq"] = k;
            o.text += "k = " + cqs::to_string(k) + "\n";
        }
        o.text += "milnor = " + std::to_string(cqs::milnor_number(ms[i])) + "\n";
        o.data["result"].push_back(row);
    }
    return o;
}

Output cmd_mmp(const std::string& op, const std::string& arg, std::size_t count) {
    Output o;
    const bool mk1 = arg.find('*') != std::string::npos;
    if (op == "classify" || op == "flip") {
        cqs::NbhdType type;
        std::optional<cqs::ExtremalPRes> flipped;
        std::string initial;
        if (mk1) {
            auto x = cqs::parse_mk1a(arg);
            type = cqs::classify(x);
            if (type == cqs::NbhdType::Flipping) flipped = cqs::flip(x);
            o.data["input"] = cqs::render_mk1a(x);
        } else {
            auto x = cqs::parse_mk2a(arg);
            type = cqs::classify(x);
            if (type == cqs::NbhdType::Flipping) flipped = cqs::flip(x);
            initial = cqs::render(cqs::to_initial(x).first);
            o.data["input"] = cqs::render(x);
            o.data["initial"] = initial;
        }
        if (flipped) {
            o.text = "flipping; flip = " + flipped->render() + "\n";
            o.data["type"] = "flipping";
            o.data["flip"] = to_json(flipped->annotated());
            o.dot = cqs::to_dot(chain_graph(flipped->annotated()), "flip");
        } else {
            if (op == "flip") throw cqs::NotFlipping(arg + " is divisorial");
            o.text = "divisorial";
            if (!initial.empty()) o.text += "; initial = " + initial;
            o.text += "\n";
            o.data["type"] = "divisorial";
        }
    } else if (op == "sequence") {
        if (mk1) throw CLI::ValidationError("mmp", "sequence needs an mk2A neighbourhood");
        auto seq = cqs::mori_sequence(cqs::parse_mk2a(arg), count);
        o.data["result"] = json::array();
        for (const auto& x : seq) {
            o.text += cqs::render(x) + "\n";
            o.data["result"].push_back(cqs::render(x));
        }
    } else if (op == "invariants") {
        auto inv = mk1 ? cqs::mk1a_invariants(cqs::parse_mk1a(arg)) : cqs::mk2a_invariants(cqs::parse_mk2a(arg));
        o.text = "delta = " + inv.delta.str() + "\nDelta = " + inv.Delta.str() + "\nOmega = " + inv.Omega.str() +
                 "\nK.C = " + cqs::to_string(inv.kc) + "\nC.C = " + cqs::to_string(inv.cc) + "\n";
        o.data["delta"] = inv.delta.str();
        o.data["Delta"] = inv.Delta.str();
        o.data["Omega"] = inv.Omega.str();
        o.data["kc"] = cqs::to_string(inv.kc);
        o.data["cc"] = cqs::to_string(inv.cc);
    } else {
        throw CLI::ValidationError("mmp", "operation must be classify, flip, sequence or invariants");
    }
    return o;
}

Output cmd_phipi(const std::string& frac, const std::string& pres, bool trace) {
    Output o;
    auto f = cqs::parse_fraction(frac);
    auto p = cqs::parse_annotated(pres);
    if (!cqs::is_p_resolution(p, f)) throw cqs::IncompatibleResolution(pres + " is not a P-resolution of " + frac);
    std::vector<cqs::TraceStep> steps;
    cqs::RunOptions opt;
    if (trace) opt.trace = &steps;
    auto m = cqs::canonical(cqs::run_phi_pi(cqs::m_resolution_of(p), cqs::build_sandwiched_cqss(f), opt));
    json tr = json::array();
    for (const auto& st : steps) {
        std::string line = st.op + " " + std::to_string(st.curve);
        if (!st.detail.empty()) line += " " + st.detail;
        if (!st.column.empty()) {
            cqs::Chain col(st.column.begin(), st.column.end());
            line += " column " + cqs::to_string(col);
        }
        o.text += line + "\n";
        for (const auto& l : st.ledger) o.text += "  " + l + "\n";
        tr.push_back({{"op", st.op}, {"curve", st.curve}, {"detail", st.detail}, {"column", st.column}, {"ledger", st.ledger}});
    }
    o.text += m.render();
    o.data["result"] = to_json(m);
    if (trace) o.data["trace"] = tr;
    return o;
}

Output cmd_table(const std::string& arg) {
    Output o;
    auto rep = cqs::correspondence_table(cqs::parse_fraction(arg));
    o.data["singularity"] = {rep.singularity.n, rep.singularity.a};
    o.data["rows"] = json::array();
    std::ostringstream s;
    s << "1/" << rep.singularity.n << "(1," << rep.singularity.a << "): " << rep.rows.size() << " components\n";
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        s << "\n# " << (i + 1) << "  P-resolution " << r.presolution.render() << "  k = "
          << (r.kseq.empty() ? std::string("-") : cqs::to_string(r.kseq)) << "  milnor = " << r.milnor << "\n";
        s << "incidence\n" << r.incidence.render() << "homology\n" << r.homology.render();
        o.data["rows"].push_back({{"incidence", to_json(r.incidence)},
                                  {"homology", to_json(r.homology)},
                                  {"presolution", to_json(r.presolution)},
                                  {"kseq", r.kseq},
                                  {"milnor", r.milnor}});
    }
    o.text = s.str();
    return o;
}

std::string types_text(const std::array<cqs::SubType, 3>& t) {
    std::string s;
    for (auto x : t) s += x == cqs::SubType::I ? "I" : "II";
    return s;
}

Output cmd_wpqr(const std::string& op, std::int64_t p, std::int64_t q, std::int64_t r) {
    Output o;
    const cqs::WpqrParams w{p, q, r};
    o.data["params"] = {p, q, r};
    if (op == "graph") {
        auto g = cqs::wpqr_graph(w);
        o.text = "centre -" + std::to_string(g.central) + "\n";
        for (const auto& arm : g.arms) o.text += "arm " + cqs::to_string(arm) + "\n";
        o.data["centre"] = g.central;
        o.data["arms"] = g.arms;
        o.dot = cqs::to_dot(g.to_marked(), "W");
    } else if (op == "families") {
        o.data["result"] = json::array();
        for (const auto& f : cqs::wpqr_families(w)) {
            o.text += f.label() + "\n" + f.matrix.render() + "\n";
            o.data["result"].push_back({{"label", f.label()}, {"tag", f.tag}, {"types", types_text(f.types)},
                                        {"matrix", to_json(f.matrix)}});
        }
    } else if (op == "presol") {
        o.data["result"] = json::array();
        const auto target = cqs::wpqr_graph(w).to_graph();
        std::size_t i = 0;
        for (const auto& pr : cqs::wpqr_p_resolutions(w)) {
            const bool ok = cqs::is_p_resolution(pr.graph.to_marked(), target);
            o.text += pr.label + ": centre -" + std::to_string(pr.graph.central);
            for (const auto& arm : pr.graph.arms) o.text += " " + cqs::to_string(arm);
            o.text += ok ? " (P-resolution)\n" : " (check failed)\n";
            json runs = json::array();
            for (const auto& run : pr.graph.runs) runs.push_back(run.vertices);
            o.data["result"].push_back({{"label", pr.label}, {"centre", pr.graph.central}, {"arms", pr.graph.arms},
                                        {"runs", runs}, {"verified", ok}});
            o.dot += cqs::to_dot(pr.graph.to_marked(), "P" + std::to_string(++i));
        }
    } else if (op == "check") {
        auto rep = cqs::kollar_check(w);
        std::ostringstream s;
        s << "W(" << p << "," << q << "," << r << "): enumerated " << rep.enumerated << ", families " << rep.families
          << "\n";
        for (const auto& l : rep.verified) s << "  " << l << ": P-resolution verified\n";
        for (const auto& l : rep.qhd) s << "  " << l << ": rational homology disk (milnor 0)\n";
        for (const auto& l : rep.failed_presolutions) s << "  " << l << ": P-resolution check failed\n";
        for (const auto& l : rep.missing) s << "  " << l << ": not found by enumeration\n";
        json un = json::array();
        for (const auto& m : rep.unclassified) {
            s << "  unclassified matrix (" << cqs::describe_unclassified(w, m) << ")\n" << m.render();
            un.push_back(to_json(m));
        }
        s << (rep.ok() ? "consistent\n" : "MISMATCH\n");
        o.text = s.str();
        o.data["enumerated"] = rep.enumerated;
        o.data["families"] = rep.families;
        o.data["verified"] = rep.verified;
        o.data["qhd"] = rep.qhd;
        o.data["failed"] = rep.failed_presolutions;
        o.data["missing"] = rep.missing;
        o.data["unclassified"] = un;
        o.data["ok"] = rep.ok();
    } else {
        throw CLI::ValidationError("wpqr", "operation must be graph, families, presol or check");
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deformations of cyclic quotient and W(p,q,r) surface singularities"};
    app.require_subcommand(1);
    Flags flags;
    app.add_flag("--json", flags.json, "Emit JSON");
    app.add_flag("--dot", flags.dot, "Emit Graphviz DOT where a graph is available");
    app.add_flag("--trace", flags.trace, "Show the MMP trace (phipi)");
    app.fallthrough();

    std::function<Output()> run;
    std::string command;
    std::string op, arg, arg2;
    std::size_t count = 5;
    std::int64_t p = 0, q = 0, r = 0;

    auto sub = [&](const std::string& name, const std::string& help) {
        auto* s = app.add_subcommand(name, help);
        s->callback([&command, name] { command = name; });
        return s;
    };
    auto* hj = sub("hj", "Hirzebruch-Jung continued fractions");
    hj->add_option("op", op, "expand | eval | dual")->required();
    hj->add_option("value", arg, "n/a or [b1,...,br]")->required();
    auto* wahl = sub("wahl", "Recognise Wahl and T chains and print discrepancies");
    wahl->add_option("chain", arg)->required();
    auto* kseq = sub("kseq", "Admissible k-sequences K(X) of 1/n(1,a)");
    kseq->add_option("fraction", arg)->required();
    auto* presol = sub("presol", "P-resolutions of 1/n(1,a)");
    presol->add_option("fraction", arg)->required();
    auto* inc = sub("incidence", "Combinatorial incidence matrices of 1/n(1,a)");
    inc->add_option("fraction", arg)->required();
    auto* maps = sub("maps", "Homology matrices, k-sequences and Milnor numbers of the incidence matrices");
    maps->add_option("fraction", arg)->required();
    auto* mmp = sub("mmp", "Extremal neighbourhoods");
    mmp->add_option("op", op, "classify | flip | sequence | invariants")->required();
    mmp->add_option("nbhd", arg, "[(m2,a2)]-1-[(m1,a1)], [chain]-1-[chain] or [b1,b2*,...]")->required();
    mmp->add_option("--count", count, "Members of the Mori sequence");
    auto* phipi = sub("phipi", "Incidence matrix of a P-resolution via the MMP");
    phipi->add_option("fraction", arg)->required();
    phipi->add_option("presolution", arg2, "e.g. [4]-1-[5,2]")->required();
    auto* table = sub("table", "Correspondence table of 1/n(1,a)");
    table->add_option("fraction", arg)->required();
    auto* wp = sub("wpqr", "The W(p,q,r) case study");
    wp->add_option("op", op, "graph | families | presol | check")->required();
    wp->add_option("p", p)->required()->check(CLI::NonNegativeNumber);
    wp->add_option("q", q)->required()->check(CLI::NonNegativeNumber);
    wp->add_option("r", r)->required()->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    Output out;
    try {
        if (command == "hj") out = cmd_hj(op, arg);
        else if (command == "wahl") out = cmd_wahl(arg);
        else if (command == "kseq") out = cmd_kseq(arg);
        else if (command == "presol") out = cmd_presol(arg);
        else if (command == "incidence") out = cmd_incidence(arg);
        else if (command == "maps") out = cmd_maps(arg);
        else if (command == "mmp") out = cmd_mmp(op, arg, count);
        else if (command == "phipi") out = cmd_phipi(arg, arg2, flags.trace);
        else if (command == "table") out = cmd_table(arg);
        else if (command == "wpqr") out = cmd_wpqr(op, p, q, r);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const cqs::parse_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const cqs::cqs_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (flags.json) {
        json j = out.data;
        j["format"] = 1;
        j["command"] = command;
        std::cout << j.dump(2) << "\n";
    } else if (flags.dot && !out.dot.empty()) {
        std::cout << out.dot;
    } else {
        std::cout << out.text;
    }
    return 0;
}
