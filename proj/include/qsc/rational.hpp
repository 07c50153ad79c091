#pragma once

// Exact rational scalars. GMP's mpq_class keeps every value canonical
// (reduced, positive denominator, zero as 0/1) after each operation.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qsc {

using Rational = mpq_class;
using BigInt = mpz_class;

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }

inline std::string to_string(const Rational& x) { return x.get_str(); }

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rational r(BigInt(static_cast<long>(num)), BigInt(static_cast<long>(den)));
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rational& x) { return x.get_den() == 1; }

/// Converts an integral rational to int64, throwing when it is not integral
/// or does not fit.
inline std::int64_t to_int64(const Rational& x) {
    if (!is_integer(x)) throw std::domain_error("value " + x.get_str() + " is not an integer");
    if (!x.get_num().fits_slong_p()) throw std::overflow_error("integer " + x.get_str() + " out of range");
    return x.get_num().get_si();
}

}  // namespace qsc
