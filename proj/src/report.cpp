#include "cqs/report.hpp"

#include "cqs/surface.hpp"

#include <set>

namespace cqs {

Report correspondence_table(const Fraction& f) {
    Report rep;
    rep.singularity = f;
    const Chain a_chain = hj_expand(dual(f));
    const SandwichedStructure s = build_sandwiched_cqss(f);
    std::set<Chain> seen;
    for (const auto& p : enumerate_p_resolutions(f)) {
        ReportRow row;
        row.presolution = p;
        row.incidence = canonical(run_phi_pi(m_resolution_of(p), s));
        row.homology = phi_ih_cyclic(row.incidence);
        row.milnor = milnor_number(row.incidence);
        // A_{n-1} has no k-sequence of length one; its single row stays unkeyed.
        if (a_chain.size() < 2) {
            rep.rows.push_back(std::move(row));
            continue;
        }
        row.kseq = phi_hk(row.homology, a_chain);
        if (phi_ik(row.incidence, a_chain) != row.kseq)
            throw InternalInconsistency("k-sequences of " + p.render() + " disagree");
        if (!seen.insert(row.kseq).second)
            throw InternalInconsistency("two P-resolutions share the k-sequence " + to_string(row.kseq));
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace cqs
