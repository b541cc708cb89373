#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "f2lab/bitvec.hpp"
#include "f2lab/error.hpp"
#include "f2lab/random.hpp"
#include "f2lab/rational.hpp"

namespace f2lab {

Caps& default_caps() {
  static Caps caps;
  return caps;
}

// ---- rationals ------------------------------------------------------------

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

Rational dyadic(std::int64_t c, int shift) {
  if (shift < 0 || shift > 62) throw ValidationError("dyadic shift out of range");
  return Rational(c, std::int64_t{1} << shift);
}

namespace {

std::int64_t checked_pow10(int e) {
  std::int64_t p = 1;
  for (int i = 0; i < e; ++i) {
    if (p > std::numeric_limits<std::int64_t>::max() / 10) throw ValidationError("decimal has too many digits");
    p *= 10;
  }
  return p;
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  if (s.empty()) throw ValidationError("malformed number: '" + std::string(whole) + "'");
  std::int64_t v = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') throw ValidationError("malformed number: '" + std::string(whole) + "'");
    if (v > (std::numeric_limits<std::int64_t>::max() - (ch - '0')) / 10)
      throw ValidationError("number too large: '" + std::string(whole) + "'");
    v = v * 10 + (ch - '0');
  }
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto den = parse_int(s.substr(slash + 1), text);
    if (den == 0) throw ValidationError("zero denominator: '" + std::string(text) + "'");
    value = Rational(parse_int(s.substr(0, slash), text), den);
  } else {
    int exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      auto exp_text = s.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      exponent = static_cast<int>(parse_int(exp_text, text));
      if (exp_negative) exponent = -exponent;
      s = s.substr(0, e);
    }
    auto dot = s.find('.');
    std::string digits(s.substr(0, dot));
    int fraction_digits = 0;
    if (dot != std::string_view::npos) {
      auto frac = s.substr(dot + 1);
      digits += frac;
      fraction_digits = static_cast<int>(frac.size());
    }
    if (digits.empty()) throw ValidationError("malformed number: '" + std::string(text) + "'");
    int scale = fraction_digits - exponent;
    std::int64_t mantissa = parse_int(digits, text);
    if (scale >= 0) {
      value = Rational(mantissa, checked_pow10(scale));
    } else {
      std::int64_t factor = checked_pow10(-scale);
      if (mantissa > std::numeric_limits<std::int64_t>::max() / factor) throw ValidationError("number too large");
      value = Rational(mantissa * factor);
    }
  }
  return negative ? -value : value;
}

// ---- randomness -------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view name, std::uint64_t index) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char ch : name) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(seed ^ splitmix64(h)) + index);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw ValidationError("Rng::below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    std::uint64_t v = engine_();
    if (v < limit) return v % bound;
  }
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

// ---- BitVec ---------------------------------------------------------------------

BitVec BitVec::parse(std::string_view text) {
  if (text.size() > kMaxBitVecDim) throw ValidationError("bit string longer than 64");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      bits |= std::uint64_t{1} << i;
    } else if (text[i] != '0') {
      throw ValidationError("bit string must contain only 0/1: '" + std::string(text) + "'");
    }
  }
  return BitVec(static_cast<int>(text.size()), bits);
}

std::string BitVec::str() const {
  std::string s(n_, '0');
  for (int i = 0; i < n_; ++i)
    if (test(i)) s[i] = '1';
  return s;
}

}  // namespace f2lab

#include "f2lab/parallel.hpp"

namespace f2lab {

int& default_workers() {
  static int workers = 1;
  return workers;
}

}  // namespace f2lab

#include <boost/math/special_functions/beta.hpp>

#include "f2lab/stats.hpp"

namespace f2lab {

Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double confidence) {
  if (trials == 0) return {0.0, 1.0};
  if (successes > trials) throw ValidationError("clopper_pearson: successes exceed trials");
  const double alpha = 1.0 - confidence;
  const double k = static_cast<double>(successes);
  const double n = static_cast<double>(trials);
  Interval out;
  out.lower = successes == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1.0, alpha / 2.0);
  out.upper = successes == trials ? 1.0 : boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - alpha / 2.0);
  return out;
}

}  // namespace f2lab
