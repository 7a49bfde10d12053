#include "cqs/format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

namespace cqs {

namespace {

std::string strip(const std::string& s) {
    std::string out;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) out += ch;
    return out;
}

std::int64_t parse_int(const std::string& s, const std::string& whole) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw parse_error("cannot read integer '" + s + "' in '" + whole + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string unbracket(const std::string& s, const std::string& whole) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw parse_error("expected a bracketed group in '" + whole + "'");
    return s.substr(1, s.size() - 2);
}

// Splits at '-' outside brackets and parentheses.
std::vector<std::string> top_level_parts(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char ch : s) {
        if (ch == '[' || ch == '(') ++depth;
        if (ch == ']' || ch == ')') --depth;
        if (depth < 0) throw parse_error("unbalanced brackets in '" + s + "'");
        if (ch == '-' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (depth != 0) throw parse_error("unbalanced brackets in '" + s + "'");
    out.push_back(cur);
    return out;
}

BigWahl parse_side(const std::string& part, bool reverse, const std::string& whole) {
    std::string inner = unbracket(part, whole);
    if (!inner.empty() && inner.front() == '(') {
        if (inner.back() != ')') throw parse_error("expected (m,a) in '" + whole + "'");
        auto f = split(inner.substr(1, inner.size() - 2), ',');
        if (f.size() != 2) throw parse_error("expected (m,a) in '" + whole + "'");
        BigWahl w{parse_int(f[0], whole), parse_int(f[1], whole)};
        if (!w.smooth()) wahl_chain(w.narrow());
        return w;
    }
    Chain c = parse_chain(part);
    if (reverse) std::reverse(c.begin(), c.end());
    return wahl_of_chain(c);
}

}  // namespace

Fraction parse_fraction(const std::string& text) {
    const std::string s = strip(text);
    auto f = split(s, '/');
    if (f.size() != 2) throw parse_error("expected n/a, got '" + text + "'");
    return Fraction(parse_int(f[0], text), parse_int(f[1], text));
}

Chain parse_chain(const std::string& text) {
    const std::string inner = unbracket(strip(text), text);
    Chain c;
    if (inner.empty()) return c;
    for (const auto& f : split(inner, ',')) c.push_back(parse_int(f, text));
    return c;
}

Mk1A parse_mk1a(const std::string& text) {
    const std::string inner = unbracket(strip(text), text);
    Mk1A x;
    x.marked = 0;
    for (auto f : split(inner, ',')) {
        if (!f.empty() && f.back() == '*') {
            if (x.marked) throw parse_error("more than one marked entry in '" + text + "'");
            f.pop_back();
            x.marked = x.chain.size() + 1;
        }
        x.chain.push_back(parse_int(f, text));
    }
    if (!x.marked) throw parse_error("no marked entry in '" + text + "'");
    return x;
}

Mk2A parse_mk2a(const std::string& text) {
    const std::string s = strip(text);
    auto parts = top_level_parts(s);
    if (parts.size() != 3 || parts[1] != "1") throw parse_error("expected [..]-1-[..], got '" + text + "'");
    return Mk2A{parse_side(parts[0], true, text), parse_side(parts[2], false, text)};
}

AnnotatedChain parse_annotated(const std::string& text) {
    const std::string s = strip(text);
    AnnotatedChain out;
    for (const auto& part : top_level_parts(s)) {
        if (part.empty()) throw parse_error("empty entry in '" + text + "'");
        if (part.front() != '[') {
            out.entries.push_back(parse_int(part, text));
            continue;
        }
        Chain c = parse_chain(part);
        if (c.empty()) throw parse_error("empty run in '" + text + "'");
        MarkedRun run;
        run.begin = out.entries.size();
        run.end = run.begin + c.size();
        if (std::all_of(c.begin(), c.end(), [](std::int64_t x) { return x == 2; })) {
            run.kind = RunKind::DuVal;
        } else if (auto t = t_recognize(c)) {
            run.kind = RunKind::T;
            run.t = t;
        } else {
            run.kind = RunKind::NonT;
        }
        out.entries.insert(out.entries.end(), c.begin(), c.end());
        out.runs.push_back(run);
    }
    return out;
}

std::string render_mk1a(const Mk1A& x) {
    std::string s = "[";
    for (std::size_t i = 0; i < x.chain.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(x.chain[i]);
        if (i + 1 == x.marked) s += "*";
    }
    return s + "]";
}

std::string to_dot(const MarkedGraph& g, const std::string& name) {
    std::set<std::size_t> boxed;
    for (const auto& r : g.runs) boxed.insert(r.vertices.begin(), r.vertices.end());
    std::string s = "graph " + name + " {\n";
    for (std::size_t v = 0; v < g.graph.size(); ++v) {
        s += "  v" + std::to_string(v) + " [label=\"-" + std::to_string(g.graph.b[v]) + "\"";
        s += boxed.count(v) ? ", shape=box" : ", shape=circle";
        s += "];\n";
    }
    for (std::size_t r = 0; r < g.runs.size(); ++r) {
        s += "  subgraph cluster_" + std::to_string(r) + " {";
        for (auto v : g.runs[r].vertices) s += " v" + std::to_string(v) + ";";
        s += " }\n";
    }
    for (auto [i, k, m] : g.graph.edges) {
        s += "  v" + std::to_string(i) + " -- v" + std::to_string(k);
        if (m != 1) s += " [label=\"" + std::to_string(m) + "\"]";
        s += ";\n";
    }
    return s + "}\n";
}

}  // namespace cqs
