#pragma once

#include "cqs/hjcf.hpp"
#include "cqs/matrices.hpp"
#include "cqs/tclass.hpp"

#include <cstdint>
#include <vector>

namespace cqs {

// One deformation component of 1/n(1,a), seen from every side.
struct ReportRow {
    Matrix incidence;  // canonical
    Matrix homology;
    AnnotatedChain presolution;
    Chain kseq;
    std::int64_t milnor = 0;
};

struct Report {
    Fraction singularity;
    std::vector<ReportRow> rows;  // in P-resolution enumeration order
};

// Runs every P-resolution through the MMP and joins the k-sequences obtained
// from the incidence and homology matrices. Throws InternalInconsistency if
// the two k-sequences disagree or a component is hit twice.
Report correspondence_table(const Fraction& f);

}  // namespace cqs
