#pragma once

#include "cqs/core.hpp"
#include "cqs/hjcf.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cqs {

// l_coeff * l + sum e_coeffs[k] * e_k over the dots of the extended dot
// diagram, labelled 1.. in reading order. l^2 = 1, e_k^2 = -1.
struct HClass {
    std::int64_t l_coeff = 0;
    std::map<std::size_t, std::int64_t> e_coeffs;

    HClass operator+(const HClass& o) const;
    HClass operator-(const HClass& o) const;
    std::int64_t dot(const HClass& o) const;
    std::string render() const;
    bool operator==(const HClass& o) const;
};

// Dot positions of the extended diagram of n/a, grouped for lookups.
struct DotLayout {
    Chain b;
    std::vector<std::int64_t> row_start;    // column of the first dot of each row
    std::vector<std::vector<std::size_t>> row_labels;  // labels of row i, left to right
    std::size_t extra = 0;                  // label of the extra dot
    std::vector<std::vector<std::size_t>> column_labels;  // columns 0..e-1, top to bottom

    static DotLayout of(const Fraction& f);
    std::size_t label(std::size_t row, std::size_t pos) const;  // both 1-based / 0-based as in e_{i,j}
};

HClass class_E(const Fraction& f, std::size_t i);
// Curvetta through dot e_{i,j}, j >= 1; for the last row j = b_r - 1 is the
// extra dot. `degree` is the coefficient of l.
HClass class_C(const Fraction& f, std::size_t i, std::size_t j, std::int64_t degree = 2);
HClass class_A(const Fraction& f, std::size_t j);

struct CurvettaDot {
    std::size_t row;  // 1-based
    std::size_t pos;  // j >= 1
};

// Curvettas in dot-column order.
std::vector<CurvettaDot> curvetta_dots(const Fraction& f);

struct SumAReport {
    bool ok = true;
    std::vector<std::int64_t> witnesses;
    std::optional<std::size_t> failing;  // 1-based curvetta index
};

SumAReport verify_c_equals_sum_a(const Fraction& f);

// Number of base points shared by the two curvettas.
std::int64_t shared_base_points(const HClass& x, const HClass& y);

}  // namespace cqs
