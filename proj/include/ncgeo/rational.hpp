#pragma once

#include <boost/rational.hpp>
#include <cmath>
#include <optional>
#include <string>

namespace ncgeo {

using Rational = boost::rational<long long>;

/// Parses "p/q", an integer, or a finite decimal such as "0.25" or "-1.5e-2"
/// into an exact rational. Throws PreconditionError on malformed input.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& r);

inline long double to_long_double(const Rational& r) {
  return static_cast<long double>(r.numerator()) / static_cast<long double>(r.denominator());
}

inline double to_double(const Rational& r) { return static_cast<double>(to_long_double(r)); }

/// Largest integer <= r, smallest integer >= r.
long long floor_of(const Rational& r);
long long ceil_of(const Rational& r);

/// Exact square root when numerator and denominator are perfect squares.
std::optional<Rational> exact_sqrt(const Rational& r);

/// Integer square root floor(sqrt(v)) for v >= 0.
long long isqrt(long long v);

}  // namespace ncgeo
