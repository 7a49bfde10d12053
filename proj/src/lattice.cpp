#include "cqs/lattice.hpp"

#include <stdexcept>

namespace cqs {

HClass HClass::operator+(const HClass& o) const {
    HClass r = *this;
    r.l_coeff += o.l_coeff;
    for (auto [k, v] : o.e_coeffs) {
        r.e_coeffs[k] += v;
        if (r.e_coeffs[k] == 0) r.e_coeffs.erase(k);
    }
    return r;
}

HClass HClass::operator-(const HClass& o) const {
    HClass neg = o;
    neg.l_coeff = -neg.l_coeff;
    for (auto& [k, v] : neg.e_coeffs) v = -v;
    return *this + neg;
}

std::int64_t HClass::dot(const HClass& o) const {
    std::int64_t s = l_coeff * o.l_coeff;
    for (auto [k, v] : e_coeffs) {
        auto it = o.e_coeffs.find(k);
        if (it != o.e_coeffs.end()) s -= v * it->second;
    }
    return s;
}

bool HClass::operator==(const HClass& o) const {
    auto clean = [](const HClass& h) {
        std::map<std::size_t, std::int64_t> m;
        for (auto [k, v] : h.e_coeffs)
            if (v) m[k] = v;
        return m;
    };
    return l_coeff == o.l_coeff && clean(*this) == clean(o);
}

std::string HClass::render() const {
    std::string s;
    auto term = [&](std::int64_t c, const std::string& name) {
        if (c == 0) return;
        if (s.empty()) {
            if (c < 0) s += "-";
        } else {
            s += c < 0 ? " - " : " + ";
        }
        std::int64_t a = c < 0 ? -c : c;
        if (a != 1) s += std::to_string(a);
        s += name;
    };
    term(l_coeff, "l");
    for (auto [k, v] : e_coeffs) term(v, "e" + std::to_string(k));
    return s.empty() ? "0" : s;
}

DotLayout DotLayout::of(const Fraction& f) {
    DotLayout d;
    d.b = hj_expand(f);
    std::size_t label = 1;
    std::int64_t start = 0;
    std::int64_t last_col = 0;
    for (auto bi : d.b) {
        d.row_start.push_back(start);
        std::vector<std::size_t> labels;
        for (std::int64_t k = 0; k < bi - 1; ++k) {
            auto col = static_cast<std::size_t>(start + k);
            if (d.column_labels.size() <= col) d.column_labels.resize(col + 1);
            d.column_labels[col].push_back(label);
            labels.push_back(label++);
        }
        d.row_labels.push_back(labels);
        last_col = start + bi - 2;
        start = last_col;
    }
    d.extra = label;
    if (static_cast<std::int64_t>(d.column_labels.size()) != last_col + 1)
        throw InternalInconsistency("dot diagram columns are not contiguous");
    return d;
}

std::size_t DotLayout::label(std::size_t row, std::size_t pos) const {
    if (row < 1 || row > b.size()) throw std::out_of_range("dot row out of range");
    const auto& labels = row_labels[row - 1];
    if (pos < labels.size()) return labels[pos];
    if (row == b.size() && pos == labels.size()) return extra;
    throw std::out_of_range("dot position out of range");
}

namespace {

HClass e(std::size_t label, std::int64_t c = 1) {
    HClass h;
    h.e_coeffs[label] = c;
    return h;
}

}  // namespace

HClass class_E(const Fraction& f, std::size_t i) {
    DotLayout d = DotLayout::of(f);
    const std::size_t r = d.b.size();
    if (i < 1 || i > r) throw std::out_of_range("class_E index out of range");
    const auto& row = d.row_labels[i - 1];
    HClass h = e(row[0]);
    for (std::size_t k = 1; k < row.size(); ++k) h = h - e(row[k]);
    h = h - e(i < r ? d.row_labels[i][0] : d.extra);
    return h;
}

HClass class_C(const Fraction& f, std::size_t i, std::size_t j, std::int64_t degree) {
    DotLayout d = DotLayout::of(f);
    if (j < 1) throw std::invalid_argument("class_C needs j >= 1");
    HClass h;
    h.l_coeff = degree;
    for (std::size_t k = 1; k <= i; ++k) h = h - e(d.label(k, 0));
    return h - e(d.label(i, j));
}

HClass class_A(const Fraction& f, std::size_t j) {
    DotLayout d = DotLayout::of(f);
    const std::size_t ncol = d.column_labels.size();
    if (j < 1 || j > ncol) throw std::out_of_range("class_A index out of range");
    const auto& col = d.column_labels[j - 1];
    HClass h;
    if (j == 1) {
        h.l_coeff = 1;
        for (auto lab : col) h = h - e(lab);
    } else {
        h = e(col[0]);
        for (std::size_t k = 1; k < col.size(); ++k) h = h - e(col[k]);
    }
    return h - e(j < ncol ? d.column_labels[j][0] : d.extra);
}

std::vector<CurvettaDot> curvetta_dots(const Fraction& f) {
    DotLayout d = DotLayout::of(f);
    std::map<std::size_t, CurvettaDot> where;
    for (std::size_t i = 0; i < d.row_labels.size(); ++i)
        for (std::size_t k = 0; k < d.row_labels[i].size(); ++k) where[d.row_labels[i][k]] = {i + 1, k};
    std::vector<CurvettaDot> out;
    for (std::size_t c = 1; c < d.column_labels.size(); ++c) out.push_back(where.at(d.column_labels[c][0]));
    out.push_back({d.b.size(), d.row_labels.back().size()});
    return out;
}

SumAReport verify_c_equals_sum_a(const Fraction& f) {
    SumAReport rep;
    HClass sum;
    auto dots = curvetta_dots(f);
    for (std::size_t j = 0; j < dots.size(); ++j) {
        sum = sum + class_A(f, j + 1);
        HClass diff = class_C(f, dots[j].row, dots[j].pos) - sum;
        if (!diff.e_coeffs.empty() || diff.l_coeff < 0) {
            rep.ok = false;
            rep.failing = j + 1;
            return rep;
        }
        rep.witnesses.push_back(diff.l_coeff);
    }
    return rep;
}

std::int64_t shared_base_points(const HClass& x, const HClass& y) {
    std::int64_t n = 0;
    for (auto [k, v] : x.e_coeffs) {
        auto it = y.e_coeffs.find(k);
        if (v < 0 && it != y.e_coeffs.end() && it->second < 0) ++n;
    }
    return n;
}

}  // namespace cqs
