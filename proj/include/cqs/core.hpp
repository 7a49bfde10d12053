#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cqs {

using Chain = std::vector<std::int64_t>;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Domain errors carry a stable kind name so the CLI and the Python layer can
// report them without parsing messages.
class cqs_error : public std::domain_error {
public:
    cqs_error(std::string kind, const std::string& what)
        : std::domain_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define CQS_ERROR(name)                                                     \
    struct name : cqs_error {                                               \
        explicit name(const std::string& what) : cqs_error(#name, what) {}  \
    }

CQS_ERROR(NotWahl);
CQS_ERROR(InternalInconsistency);
CQS_ERROR(NonPositiveDelta);
CQS_ERROR(NotInitial);
CQS_ERROR(NotFlipping);
CQS_ERROR(NotEndMarked);
CQS_ERROR(NonIntegralBeta);
CQS_ERROR(SingularSystem);
CQS_ERROR(BlowDownMismatch);
CQS_ERROR(DepthBoundTooSmall);
CQS_ERROR(DimensionMismatch);
CQS_ERROR(MissingBranchAssignment);
CQS_ERROR(NotInKX);
CQS_ERROR(IncompatibleResolution);
CQS_ERROR(NotContractible);
CQS_ERROR(OutOfCatalog);
CQS_ERROR(NonTerminating);
CQS_ERROR(ConditionViolated);
CQS_ERROR(MismatchReport);

#undef CQS_ERROR

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in addition");
    return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in subtraction");
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in multiplication");
    return r;
}

inline std::int64_t to_int64(const BigInt& v) {
    if (v > BigInt(INT64_MAX) || v < BigInt(INT64_MIN))
        throw std::overflow_error("value does not fit in int64");
    return static_cast<std::int64_t>(v);
}

std::string to_string(const Rational& q);
std::string to_string(const Chain& c);

}  // namespace cqs
