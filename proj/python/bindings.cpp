#include "cqs/format.hpp"
#include "cqs/lattice.hpp"
#include "cqs/report.hpp"
#include "cqs/surface.hpp"
#include "cqs/wpqr.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace py = pybind11;

namespace {

using Rows = std::vector<std::vector<std::int64_t>>;

py::object to_py(const cqs::Rational& q) {
    static py::object fraction = py::module_::import("fractions").attr("Fraction");
    return fraction(py::int_(py::str(numerator(q).str())), py::int_(py::str(denominator(q).str())));
}

cqs::Matrix to_matrix(const Rows& rows) {
    cqs::Matrix m{rows};
    for (const auto& r : rows)
        if (r.size() != m.col_count()) throw std::invalid_argument("matrix rows must have equal length");
    return m;
}

py::dict invariants_dict(const cqs::NbhdInvariants& inv) {
    py::dict d;
    d["delta"] = py::int_(py::str(inv.delta.str()));
    d["Delta"] = py::int_(py::str(inv.Delta.str()));
    d["Omega"] = py::int_(py::str(inv.Omega.str()));
    d["kc"] = to_py(inv.kc);
    d["cc"] = to_py(inv.cc);
    return d;
}

bool is_mk1a(const std::string& text) { return text.find('*') != std::string::npos; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cyclic quotient singularities: continued fractions, P-resolutions and incidence matrices";

    py::register_exception<cqs::cqs_error>(m, "CqsError", PyExc_ValueError);

    m.def("hj_expand", [](std::int64_t n, std::int64_t a) { return cqs::hj_expand(cqs::Fraction(n, a)); });
    m.def("hj_eval", [](const cqs::Chain& c) {
        auto v = cqs::hj_eval(c);
        return std::make_pair(v.p, v.q);
    });
    m.def("dual", [](std::int64_t n, std::int64_t a) {
        auto f = cqs::dual(cqs::Fraction(n, a));
        return std::make_pair(f.n, f.a);
    });
    m.def("zero_fractions", &cqs::zero_fractions);
    m.def("k_of_x", [](std::int64_t n, std::int64_t a) { return cqs::k_of_x(cqs::Fraction(n, a)); });

    m.def("wahl_recognize", [](const cqs::Chain& c) -> std::optional<std::pair<std::int64_t, std::int64_t>> {
        auto w = cqs::wahl_recognize(c);
        if (!w) return std::nullopt;
        return std::make_pair(w->m, w->a);
    });
    m.def("t_recognize", [](const cqs::Chain& c) -> std::optional<std::tuple<std::int64_t, std::int64_t, std::int64_t>> {
        auto t = cqs::t_recognize(c);
        if (!t) return std::nullopt;
        return std::make_tuple(t->d, t->n, t->a);
    });
    m.def("discrepancies", [](const cqs::Chain& c) {
        py::list out;
        for (const auto& q : cqs::discrepancies(c)) out.append(to_py(q));
        return out;
    });

    m.def("p_resolutions", [](std::int64_t n, std::int64_t a) {
        std::vector<std::string> out;
        for (const auto& p : cqs::enumerate_p_resolutions(cqs::Fraction(n, a))) out.push_back(p.render());
        return out;
    });
    m.def("is_p_resolution", [](const std::string& candidate, std::int64_t n, std::int64_t a) {
        return cqs::is_p_resolution(cqs::parse_annotated(candidate), cqs::Fraction(n, a));
    });
    m.def("incidence_matrices", [](std::int64_t n, std::int64_t a) {
        std::vector<Rows> out;
        for (const auto& x : cqs::enumerate_incidence(cqs::build_sandwiched_cqss(cqs::Fraction(n, a)).data))
            out.push_back(x.rows);
        return out;
    });
    m.def("phi_pi", [](std::int64_t n, std::int64_t a, const std::string& presolution) {
        cqs::Fraction f(n, a);
        auto p = cqs::parse_annotated(presolution);
        if (!cqs::is_p_resolution(p, f)) throw cqs::IncompatibleResolution(presolution + " is not a P-resolution");
        return cqs::canonical(cqs::run_phi_pi(cqs::m_resolution_of(p), cqs::build_sandwiched_cqss(f))).rows;
    });
    m.def("homology_matrix", [](const Rows& rows) { return cqs::phi_ih_cyclic(to_matrix(rows)).rows; });
    m.def("phi_ik", [](const Rows& rows, const cqs::Chain& a) { return cqs::phi_ik(to_matrix(rows), a); });
    m.def("milnor_number", [](const Rows& rows) { return cqs::milnor_number(to_matrix(rows)); });

    m.def("classify", [](const std::string& text) {
        auto t = is_mk1a(text) ? cqs::classify(cqs::parse_mk1a(text)) : cqs::classify(cqs::parse_mk2a(text));
        return t == cqs::NbhdType::Flipping ? "flipping" : "divisorial";
    });
    m.def("flip", [](const std::string& text) {
        return (is_mk1a(text) ? cqs::flip(cqs::parse_mk1a(text)) : cqs::flip(cqs::parse_mk2a(text))).render();
    });
    m.def("invariants", [](const std::string& text) {
        return invariants_dict(is_mk1a(text) ? cqs::mk1a_invariants(cqs::parse_mk1a(text))
                                             : cqs::mk2a_invariants(cqs::parse_mk2a(text)));
    });

    m.def("correspondence_table", [](std::int64_t n, std::int64_t a) {
        py::list out;
        for (const auto& r : cqs::correspondence_table(cqs::Fraction(n, a)).rows) {
            py::dict d;
            d["presolution"] = r.presolution.render();
            d["incidence"] = r.incidence.rows;
            d["homology"] = r.homology.rows;
            d["k"] = r.kseq;
            d["milnor"] = r.milnor;
            out.append(d);
        }
        return out;
    });
    m.def("verify_c_equals_sum_a", [](std::int64_t n, std::int64_t a) {
        return cqs::verify_c_equals_sum_a(cqs::Fraction(n, a)).ok;
    });

    m.def("wpqr_families", [](std::int64_t p, std::int64_t q, std::int64_t r) {
        std::vector<std::pair<std::string, Rows>> out;
        for (const auto& f : cqs::wpqr_families({p, q, r})) out.emplace_back(f.label(), f.matrix.rows);
        return out;
    });
    m.def("kollar_check", [](std::int64_t p, std::int64_t q, std::int64_t r) {
        auto rep = cqs::kollar_check({p, q, r});
        py::dict d;
        d["enumerated"] = rep.enumerated;
        d["families"] = rep.families;
        std::vector<Rows> extra;
        for (const auto& x : rep.unclassified) extra.push_back(x.rows);
        d["unclassified"] = extra;
        d["missing"] = rep.missing;
        d["failed_presolutions"] = rep.failed_presolutions;
        d["qhd"] = rep.qhd;
        d["verified"] = rep.verified;
        d["ok"] = rep.ok();
        return d;
    });
}
