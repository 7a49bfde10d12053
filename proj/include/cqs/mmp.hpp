#pragma once

#include "cqs/core.hpp"
#include "cqs/hjcf.hpp"
#include "cqs/tclass.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cqs {

// Wahl data with wide integers; m = a = 1 marks a smooth point.
struct BigWahl {
    BigInt m = 1;
    BigInt a = 1;

    bool smooth() const { return m == 1; }
    WahlData narrow() const { return {to_int64(m), to_int64(a)}; }
    bool operator==(const BigWahl&) const = default;
};

// Wahl chain with the (-1)-curve meeting entry `marked` (1-based).
struct Mk1A {
    Chain chain;
    std::size_t marked = 1;
};

// [(m2,a2)]-1-[(m1,a1)]. Both sides are read outwards from the (-1)-curve,
// so the displayed left chain is the reverse of wahl_chain(left).
struct Mk2A {
    BigWahl left;   // (m2, a2)
    BigWahl right;  // (m1, a1)

    bool operator==(const Mk2A&) const = default;
};

// [f..]-c-[e..] with the same reading convention as Mk2A.
struct ExtremalPRes {
    BigWahl left;   // (m2', a2')
    BigInt c = 1;
    BigWahl right;  // (m1', a1')

    // Displayed chain, left part reversed so the curve c sits in between.
    Chain chain() const;
    // Index of the c-curve inside chain().
    std::size_t c_index() const;
    AnnotatedChain annotated() const;
    std::string render() const;
    bool same_up_to_reversal(const ExtremalPRes& other) const;
    bool operator==(const ExtremalPRes&) const = default;
};

struct NbhdInvariants {
    BigInt delta, Delta, Omega;
    Rational kc, cc;
};

enum class NbhdType { Flipping, Divisorial };

NbhdInvariants mk1a_invariants(const Mk1A& x);
NbhdInvariants mk2a_invariants(const Mk2A& x);

// Walks the Mori recursion backwards to its first member.
std::pair<Mk2A, std::size_t> to_initial(const Mk2A& x);

NbhdType classify(const Mk2A& x);
NbhdType classify(const Mk1A& x);

ExtremalPRes flip(const Mk2A& x);
ExtremalPRes flip(const Mk1A& x);

std::vector<Mk2A> mori_sequence(const Mk2A& initial, std::size_t count);

// The two mk2A obtained by splitting the chain at the marked curve; absent
// when the marked curve is at the corresponding end.
std::pair<std::optional<Mk2A>, std::optional<Mk2A>> mk1a_to_mk2a(const Mk1A& x);

// An mk2A with the same invariants and flip. For a single-curve chain this is
// the Wahl point against a smooth point.
Mk2A mk1a_representative(const Mk1A& x);

ExtremalPRes usual_flip(const Mk1A& x);

// Solves Gamma.K_before = Gamma'.K_after + beta E+.K_after for integral beta >= 0.
std::int64_t degeneration_beta(const Rational& k_before, const Rational& k_after, const Rational& eplus_k);

BigWahl wahl_of_chain(const Chain& c);
std::string render(const Mk2A& x);

}  // namespace cqs
