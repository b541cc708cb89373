#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

// Boost's mixed rational/integer operator== recurses forever under C++20's
// reversed-operator rules; these exact matches take precedence.
namespace boost {
inline bool operator==(const rational<std::int64_t>& a, int b) { return a.numerator() == b && a.denominator() == 1; }
inline bool operator==(const rational<std::int64_t>& a, long b) { return a.numerator() == b && a.denominator() == 1; }
inline bool operator==(const rational<std::int64_t>& a, long long b) {
  return a.numerator() == b && a.denominator() == 1;
}
}  // namespace boost

namespace f2lab {

// Exact weights and error probabilities. Denominators that occur are powers
// of two (at most 4^26) or small products thereof, well inside int64.
using Rational = boost::rational<std::int64_t>;

// "p/q", or "p" when q == 1.
std::string to_string(const Rational& r);

// Parses "p/q", an integer, or a finite decimal such as "0.15" or "-2.5e-1".
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

// c / 2^shift, reduced.
Rational dyadic(std::int64_t c, int shift);

}  // namespace f2lab
