#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "f2lab/bitvec.hpp"
#include "f2lab/error.hpp"
#include "f2lab/rational.hpp"

namespace f2lab {

// f: F_2^n -> {+1, -1} as a truth table indexed by x with x_1 the least
// significant bit. F_2 value 0 is +1 and 1 is -1.
class BoolFun {
 public:
  BoolFun() = default;
  BoolFun(int n, std::vector<std::int8_t> table);

  // pred(x) is the F_2 value: true gives -1.
  static BoolFun from_predicate(int n, const std::function<bool(std::uint64_t)>& pred,
                                const Caps& caps = default_caps());
  static BoolFun constant(int n, int sign = 1);
  static BoolFun character(const BitVec& s);

  int arity() const { return n_; }
  std::uint64_t size() const { return table_.size(); }
  int operator()(std::uint64_t x) const { return table_[x]; }
  // F_2 value.
  bool bit(std::uint64_t x) const { return table_[x] < 0; }
  const std::vector<std::int8_t>& table() const { return table_; }
  std::uint64_t count_minus() const;

  // Truth-table file: "n=<int>" then 2^n characters of 0/1.
  std::string to_text() const;
  static BoolFun parse(std::string_view text, const Caps& caps = default_caps());
  static BoolFun load(const std::string& path, const Caps& caps = default_caps());

  friend bool operator==(const BoolFun&, const BoolFun&) = default;

 private:
  int n_ = 0;
  std::vector<std::int8_t> table_{1};
};

// c(alpha) = sum_x f(x) (-1)^{alpha . x} = 2^n f^(alpha).
struct Spectrum {
  int n = 0;
  std::vector<std::int64_t> coeffs;

  std::int64_t operator[](std::uint64_t alpha) const { return coeffs[alpha]; }
  Rational coefficient(std::uint64_t alpha) const { return dyadic(coeffs[alpha], n); }
  // f^(alpha)^2 as c^2 / 4^n.
  Rational weight(std::uint64_t alpha) const;
  // Exact numerator of the squared weight of a set of characters over 4^n.
  std::uint64_t sq(std::uint64_t alpha) const {
    return static_cast<std::uint64_t>(coeffs[alpha] * coeffs[alpha]);
  }
  // Characters with c != 0, ascending.
  std::vector<std::uint64_t> support() const;
};

// In-place Walsh-Hadamard butterfly: v[a] <- sum_x v[x] (-1)^{a . x}.
void integer_wht(std::vector<std::int64_t>& v);

Spectrum wht(const BoolFun& f, const Caps& caps = default_caps());
// Throws std::logic_error if the result is not +-1 valued.
BoolFun inverse_wht(const Spectrum& s);

// x -> f(x + z).
BoolFun shift(const BoolFun& f, const BitVec& z);

// Rational-valued table with common denominator 2^n.
struct RationalTable {
  int n = 0;
  std::vector<std::int64_t> numerators;
  Rational at(std::uint64_t x) const { return dyadic(numerators[x], n); }
};

// (f * g)(x) = E_y[f(y) g(x + y)].
RationalTable convolve(const BoolFun& f, const BoolFun& g);

// (f o g)(x) = f(g(block_1), ..., g(block_n)); block i holds coordinates
// m(i-1)+1 .. mi.
BoolFun compose(const BoolFun& f, const BoolFun& g, const Caps& caps = default_caps());

struct CosetRestriction {
  BoolFun restricted;       // over the free coordinates, in increasing order
  Rational constant_coeff;  // from the spectral sum over span(S)
  Rational direct_average;  // mean of the restricted table; equal to the above
};

// Restricts f to {x : S_i . x = b_i}. S must be linearly independent.
CosetRestriction restrict_coset(const BoolFun& f, const std::vector<BitVec>& s, const std::vector<int>& b);

// Builtin functions by name:
//   parity:n and:n or:n maj:n maj3k:k addr:n ip:n hamge:n:k chi:<bits>
//   const:n random:n:bias:seed ltf:<path> tt:<path>
// A name that is none of these but names a file is read as a truth table.
BoolFun builtin(std::string_view name, const Caps& caps = default_caps());
std::vector<std::string> builtin_examples();

// w_k = sum over |alpha| = k of f^(alpha)^2.
std::vector<Rational> symmetric_profile(const BoolFun& f);
std::vector<Rational> symmetric_profile(const Spectrum& s);
bool is_symmetric(const BoolFun& f);

struct LinearDistance {
  Rational epsilon;  // (1 - max_alpha f^(alpha)) / 2
  BitVec best;       // smallest alpha attaining the maximum
};
LinearDistance linear_distance(const BoolFun& f);
LinearDistance linear_distance(const Spectrum& s);

}  // namespace f2lab
