#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace obl::cas {

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
using Rational = mpq_class;

/// Parses "p", "-p", "p/q" or "-p/q". Throws std::invalid_argument on bad
/// syntax or a zero denominator.
Rational parse_rational(std::string_view text);

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

/// n/d in lowest terms. mpq_class's two-argument constructor does not
/// canonicalize, so always build fractions through this.
inline Rational ratio(const mpz_class& n, const mpz_class& d) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}
inline Rational ratio(long n, long d) { return ratio(mpz_class(n), mpz_class(d)); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace obl::cas
