#pragma once

#include "cqs/core.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cqs {

// Row-major integer matrix; every row has the same length.
struct Matrix {
    std::vector<std::vector<std::int64_t>> rows;

    std::size_t row_count() const { return rows.size(); }
    std::size_t col_count() const { return rows.empty() ? 0 : rows.front().size(); }
    std::vector<std::int64_t> column(std::size_t j) const;
    static Matrix from_columns(const std::vector<std::vector<std::int64_t>>& cols, std::size_t row_count);
    std::vector<std::vector<std::int64_t>> columns() const;
    std::string render() const;
    bool operator==(const Matrix&) const = default;
    auto operator<=>(const Matrix&) const = default;
};

// Decorations (delta_i, l_i) of the branches C_i and their pairwise
// intersection numbers. `branch` assigns rows to arms of a star (-1 for rows
// of curves on the central curve).
struct DecoratedCurveData {
    std::vector<std::int64_t> delta;
    std::vector<std::int64_t> l;
    std::vector<std::vector<std::int64_t>> inter;
    std::optional<std::vector<int>> branch;

    std::size_t size() const { return l.size(); }
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> failures;
};

// Drops zero columns and sorts the rest in ascending lexicographic order,
// read top to bottom.
Matrix canonical(const Matrix& m);

ValidationReport validate_incidence(const Matrix& m, const DecoratedCurveData& data);

// All combinatorial incidence matrices, canonical and sorted. column_bound = 0
// means sum of l_i.
std::vector<Matrix> enumerate_incidence(const DecoratedCurveData& data, std::size_t column_bound = 0);

Matrix difference(const Matrix& m);
Matrix positive_part(const Matrix& m);
Matrix phi_ih_cyclic(const Matrix& m);
Matrix phi_ih_weighted(const Matrix& m, const DecoratedCurveData& data);
Chain phi_hk(const Matrix& h, const Chain& a_chain);
Chain phi_ik(const Matrix& m, const Chain& a_chain);
std::int64_t milnor_number(const Matrix& m);

}  // namespace cqs
