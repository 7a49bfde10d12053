#pragma once

#include "cqs/core.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cqs {

// A cyclic quotient type 1/n(1,a) with 0 < a < n, gcd(n,a) = 1.
struct Fraction {
    std::int64_t n = 2;
    std::int64_t a = 1;

    Fraction() = default;
    Fraction(std::int64_t n_, std::int64_t a_);

    bool operator==(const Fraction&) const = default;
};

// p/q with q >= 0 and gcd(|p|,|q|) = 1; q = 0 is infinity.
struct ProjectiveValue {
    std::int64_t p = 1;
    std::int64_t q = 0;

    bool is_infinite() const { return q == 0; }
    bool is_zero() const { return p == 0; }
    bool operator==(const ProjectiveValue&) const = default;
};

ProjectiveValue make_projective(std::int64_t p, std::int64_t q);

Chain hj_expand(const Fraction& f);
ProjectiveValue hj_eval(const Chain& c);
Fraction dual(const Fraction& f);

bool is_admissible(const Chain& c);
std::vector<Chain> zero_fractions(int e);
std::vector<Chain> k_of_x(const Fraction& f);

Chain blow_down(const Chain& c);
// Removes the entry at index i (which must equal 1) and decrements its
// neighbours.
Chain blow_down_at(const Chain& c, std::size_t i);
// Inserts a 1 into slot `slot` (0..size): slot 0 is before the first entry,
// slot size after the last, anything else between entries slot-1 and slot.
Chain blow_up(const Chain& c, std::size_t slot);

}  // namespace cqs
