#pragma once

#include "cqs/core.hpp"
#include "cqs/hjcf.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace cqs {

// 1/m^2(1, ma-1); m = a = 1 is the smooth marker.
struct WahlData {
    std::int64_t m = 1;
    std::int64_t a = 1;

    bool smooth() const { return m == 1; }
    bool operator==(const WahlData&) const = default;
};

// 1/(d n^2)(1, d n a - 1).
struct TData {
    std::int64_t d = 1;
    std::int64_t n = 2;
    std::int64_t a = 1;

    Fraction fraction() const;
    bool operator==(const TData&) const = default;
};

std::optional<WahlData> wahl_recognize(const Chain& c);
std::optional<TData> t_recognize(const Chain& c);
Chain wahl_chain(const WahlData& w);

// Riemenschneider diagram: row i holds b_i - 1 dots and starts under the last
// dot of row i-1. The extended diagram adds one dot diagonally below the last.
struct DotDiagram {
    std::vector<std::int64_t> rows;
    bool extended = false;

    // (row, column), both 0-based, in reading order.
    std::vector<std::pair<std::int64_t, std::int64_t>> dots() const;
};

DotDiagram dot_diagram(const Chain& c, bool extended = false);

struct DotPosition {
    std::size_t row;     // 1-based curve index
    std::int64_t column; // 1-based column in the diagram
    bool operator==(const DotPosition&) const = default;
};

DotPosition delta_dot(const Chain& c);

// NonT marks a contracted locus that is neither T nor Du Val; such runs never
// pass is_p_resolution.
enum class RunKind { T, DuVal, NonT };

struct MarkedRun {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive
    RunKind kind = RunKind::T;
    std::optional<TData> t;

    bool operator==(const MarkedRun&) const = default;
};

// A chain of exceptional curves with contracted runs, e.g. [4]-1-[5,2].
struct AnnotatedChain {
    Chain entries;
    std::vector<MarkedRun> runs;

    std::string render() const;
    bool marked(std::size_t i) const;
    bool operator==(const AnnotatedChain&) const = default;
};

AnnotatedChain crepant_m_resolution(const TData& t);

// Weighted graph of smooth rational curves; vertex k has self-intersection
// -b[k]. Edges carry intersection multiplicities.
struct DualGraph {
    std::vector<std::int64_t> b;
    std::vector<std::tuple<std::size_t, std::size_t, std::int64_t>> edges;

    std::size_t size() const { return b.size(); }
    std::int64_t meet(std::size_t i, std::size_t k) const;
    std::vector<std::size_t> neighbours(std::size_t i) const;
    static DualGraph from_chain(const Chain& c);
};

struct GraphRun {
    std::vector<std::size_t> vertices;
    RunKind kind = RunKind::T;
};

struct MarkedGraph {
    DualGraph graph;
    std::vector<GraphRun> runs;
};

// Central curve of self-intersection -central with arms listed from the
// centre outwards. Vertex 0 is the centre, then arm vertices in order.
struct StarGraph {
    std::int64_t central = 2;
    std::vector<Chain> arms;
    std::vector<GraphRun> runs;

    MarkedGraph to_marked() const;
    DualGraph to_graph() const { return to_marked().graph; }
    std::size_t arm_vertex(std::size_t arm, std::size_t pos) const;
};

// Coefficients a_j with pi^*K = K~ + sum a_j E_j.
std::vector<Rational> discrepancies(const Chain& c);
std::vector<Rational> discrepancies(const DualGraph& g);
// Same system solved by exact Gaussian elimination; used to cross-check the
// continuant formula behind the chain overload.
std::vector<Rational> discrepancies_by_elimination(const Chain& c);

// K.C on the singular surface: K~.C~ plus sum over contracted curves of
// discrepancy times multiplicity of C against that curve.
Rational canonical_degree(const DualGraph& g, const std::vector<std::size_t>& contracted,
                          const Rational& k_tilde, const std::map<std::size_t, std::int64_t>& mult);

bool is_p_resolution(const AnnotatedChain& candidate, const Fraction& target);
bool is_p_resolution(const MarkedGraph& candidate, const DualGraph& target);

// Contracts unmarked (-1)-curves meeting at most two others, lowest index
// first, until none are left. Returns the surviving vertex ids as well.
std::pair<DualGraph, std::vector<std::size_t>> blow_down_graph(const DualGraph& g,
                                                               const std::vector<bool>& protect = {});
bool isomorphic_trees(const DualGraph& x, const DualGraph& y);

std::vector<AnnotatedChain> enumerate_p_resolutions(const Fraction& f, std::size_t depth_bound = 0);

// Wahl runs with d > 1 become w-1-w..-w and Du Val runs are left unmarked.
AnnotatedChain m_resolution_of(const AnnotatedChain& presolution);

}  // namespace cqs
