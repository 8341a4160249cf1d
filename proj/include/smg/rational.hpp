#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace smg {

using Rational = mpq_class;

/// n/d in canonical form (the two-argument mpq_class constructor does not
/// cancel common factors, and non-canonical values compare unequal).
inline Rational ratio(const mpz_class& n, const mpz_class& d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

/// Parses "a/b" or "a" (optionally signed). Throws std::invalid_argument.
Rational parse_rational(const std::string& text);

/// Canonical text form: "a/b", or "a" when the denominator is 1.
std::string to_string(const Rational& q);

/// Comma separated list of rationals, e.g. "1,1/2,0".
std::vector<Rational> parse_rational_list(const std::string& text);
std::string to_string(const std::vector<Rational>& v);

/// The exact square root if q is the square of a rational.
std::optional<Rational> exact_sqrt(const Rational& q);

}  // namespace smg
