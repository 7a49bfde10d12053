#pragma once

#include "cqs/core.hpp"
#include "cqs/hjcf.hpp"
#include "cqs/matrices.hpp"
#include "cqs/mmp.hpp"
#include "cqs/tclass.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cqs {

enum class CurveKind { Exceptional, Decorated, Infinity };

struct Curve {
    std::int64_t self_int = -2;
    CurveKind kind = CurveKind::Exceptional;
    std::int64_t kdeg = 0;  // K.C on the smooth surface
    bool alive = true;
    std::string name;
};

// A contracted locus. Chain runs keep their vertices in chain order.
struct ConfigRun {
    std::vector<std::size_t> ids;
    RunKind kind = RunKind::T;
    std::optional<TData> t;
};

using Ledger = std::map<std::size_t, std::int64_t>;

// Central fibre of the degeneration being run: smooth rational curves with
// intersection multiplicities, contracted runs, and for every decorated curve
// the formal sum its general-fibre deformation degenerates to.
struct CurveConfig {
    std::vector<Curve> curves;
    std::map<std::pair<std::size_t, std::size_t>, std::int64_t> edges;
    std::vector<ConfigRun> runs;
    std::vector<std::size_t> rows;  // decorated curves in matrix row order
    std::map<std::size_t, Ledger> ledger;

    std::size_t add_curve(std::int64_t self_int, CurveKind kind, std::string name = {});
    std::int64_t meet(std::size_t i, std::size_t k) const;
    void add_meet(std::size_t i, std::size_t k, std::int64_t m);
    std::vector<std::size_t> neighbours(std::size_t i) const;
    std::optional<std::size_t> run_of(std::size_t i) const;
    std::size_t alive_count() const;

    std::vector<Rational> run_discrepancies(std::size_t run) const;
    // K.D on the singular surface; zero for curves inside runs.
    Rational k_degree(std::size_t id) const;
    Rational ledger_k_degree(std::size_t row) const;

    // Contracts a smooth (-1)-curve, transferring intersections to its
    // neighbours. Does not touch runs or ledgers.
    void blow_down_curve(std::size_t id);
    // Blows up one transversal intersection point of u and v.
    std::size_t blow_up_node(std::size_t u, std::size_t v);

    DualGraph exceptional_graph(std::vector<std::size_t>* ids = nullptr) const;
    std::string describe_ledger(std::size_t row) const;
};

struct SandwichedStructure {
    CurveConfig config;
    DecoratedCurveData data;
    std::vector<std::size_t> exceptional;  // minimal-resolution curves
    std::vector<std::size_t> sandwich;     // added (-1)-curves, one per row
};

SandwichedStructure build_sandwiched_cqss(const Fraction& f);
SandwichedStructure build_sandwiched_wpqr(std::int64_t p, std::int64_t q, std::int64_t r);

CurveConfig compactify_m_resolution(const AnnotatedChain& m_res, const SandwichedStructure& s);

std::vector<std::size_t> find_minus_one(const CurveConfig& c);

std::vector<std::int64_t> divisorial_contract(CurveConfig& c, std::size_t id);

struct FlipRecord {
    std::size_t eminus = 0;
    std::size_t eplus = 0;
    std::string rewrite;                  // e.g. "[4]-1-[5,2]"
    std::map<std::size_t, std::int64_t> beta;  // row index -> coefficient
};

// True when id is a (-1)-curve meeting a contracted run with K.E < 0.
bool is_flipping_curve(const CurveConfig& c, std::size_t id);
FlipRecord apply_flip(CurveConfig& c, std::size_t id);

struct TraceStep {
    std::string op;  // "flip" or "contract"
    std::size_t curve = 0;
    std::vector<std::int64_t> column;
    std::string detail;
    std::vector<std::string> ledger;
};

struct RunOptions {
    // Visit candidate curves in reverse order; the result must not change.
    bool reverse_worklist = false;
    std::vector<TraceStep>* trace = nullptr;
};

Matrix run_phi_pi(const AnnotatedChain& m_res, const SandwichedStructure& s, const RunOptions& opt = {});
Matrix run_config(CurveConfig c, const DecoratedCurveData& data, const RunOptions& opt = {});

// The non-T extremal neighbourhood whose flip produces a [2,3,4] T-point:
// a star with centre -4 and arms [2,2],[4],[2],[2], with E- on one [2] arm
// and a curve meeting E- once.
struct NonTFixture {
    CurveConfig config;
    std::size_t eminus = 0;
};
NonTFixture non_t_fixture();

// Local configuration of an mk1A chain with the (-1)-curve on the marked
// curve and one decorated curve through it.
struct Mk1AFixture {
    CurveConfig config;
    std::size_t eminus = 0;
};
Mk1AFixture mk1a_fixture(const Mk1A& x);

}  // namespace cqs
