#pragma once

#include "cqs/core.hpp"
#include "cqs/matrices.hpp"
#include "cqs/tclass.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace cqs {

struct WpqrParams {
    std::int64_t p = 0;
    std::int64_t q = 0;
    std::int64_t r = 0;
    WpqrParams rotated() const { return {q, r, p}; }
    bool operator==(const WpqrParams&) const = default;
};

// Central -4 curve with arms (q twos, p+3), (r twos, q+3), (p twos, r+3),
// listed from the centre outwards.
StarGraph wpqr_graph(const WpqrParams& w);

enum class SubType { I, II };

// Row blocks A, B, C have p+2, q+2, r+2 rows. For M3/M4/M5 only the block
// carrying the all-ones columns (B, C, A respectively) has a free type; the
// other entries stay I.
struct WpqrFamily {
    std::string tag;  // "M1".."M7"
    std::array<SubType, 3> types{SubType::I, SubType::I, SubType::I};
    Matrix matrix;    // canonical
    std::string label() const;  // e.g. "M1 A(II) B(I) C(I)", "M3 B(I)", "M6"
};

// Whether the sub-type is allowed for block k (0 = A, 1 = B, 2 = C).
bool subtype_allowed(const WpqrParams& w, int block, SubType t);

// All families whose conditions hold, deduplicated on the canonical matrix
// (the first label wins).
std::vector<WpqrFamily> wpqr_families(const WpqrParams& w);

// Builds the family matrix, throwing ConditionViolated if its conditions fail.
Matrix wpqr_family_matrix(const WpqrParams& w, const std::string& tag, const std::array<SubType, 3>& types);

struct WpqrPResolution {
    std::string label;
    StarGraph graph;
};

// P-resolution for one non-QHD family; ConditionViolated if it does not exist.
WpqrPResolution wpqr_p_resolution(const WpqrParams& w, const std::string& tag, const std::array<SubType, 3>& types);
// One entry per family of wpqr_families except M6/M7.
std::vector<WpqrPResolution> wpqr_p_resolutions(const WpqrParams& w);

struct KollarReport {
    WpqrParams params;
    std::size_t enumerated = 0;
    std::size_t families = 0;
    std::vector<Matrix> unclassified;      // enumerated but in no family
    std::vector<std::string> missing;      // family labels never enumerated
    std::vector<std::string> failed_presolutions;
    std::vector<std::string> qhd;          // labels with Milnor number 0
    std::vector<std::string> verified;     // labels with a checked P-resolution
    bool ok() const { return unclassified.empty() && missing.empty() && failed_presolutions.empty(); }
};

// Cross-checks the families against brute-force enumeration. With strict set,
// an unclassified matrix raises MismatchReport.
KollarReport kollar_check(const WpqrParams& w, bool strict = false);

// Shape of an unclassified matrix: for every pair of blocks, the number of
// columns that carry ones in both.
std::string describe_unclassified(const WpqrParams& w, const Matrix& m);

}  // namespace cqs
