#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "f2lab/error.hpp"
#include "f2lab/rational.hpp"

namespace f2lab {

// Monotone linear threshold function on {0,1}^n: true (F_2 value 1, sign -1)
// iff sum_i w_i x_i >= theta. Weights are nonincreasing and nonnegative.
struct LtfSpec {
  std::vector<Rational> weights;
  Rational theta;
  // Working margin. Set to the exact margin by make_ltf and to w_n / 2 by
  // ltf_preprocess.
  Rational margin;
  // weights and theta times the lcm of their denominators; filled by rescale().
  std::vector<std::int64_t> scaled_weights;
  std::int64_t scaled_theta = 0;
  std::int64_t scale = 1;

  void rescale();
  int arity() const { return static_cast<int>(weights.size()); }
  bool value(std::uint64_t x) const;
  // -1 when true.
  int sign(std::uint64_t x) const { return value(x) ? -1 : 1; }
  // All x with sum w_i x_i < theta (the "false" side), ascending. Uses that
  // weights are at least w_n to bound the search; throws when the set would
  // exceed `limit` points.
  std::vector<std::uint64_t> below_threshold(std::uint64_t limit) const;
};

// Validates, normalizes so the weights sum to 1, and fills in the exact margin.
LtfSpec make_ltf(std::vector<Rational> weights, Rational theta, const Caps& caps = default_caps());

// Ham_{>=k} on n variables: w_i = 1/n, theta = (2k - 1)/(2n), margin 1/(2n).
LtfSpec hamming_ltf(int n, int k);

// min over x of |sum w_i x_i - theta|, exact. Uses a reachable-sums table
// when the integer-scaled weights are small, else a 2^n scan (n <= max_arity).
Rational ltf_margin(const std::vector<Rational>& weights, const Rational& theta, const Caps& caps = default_caps());

// Drops the weights below twice the margin (the function is unchanged on
// every input), renormalizes, and sets the working margin to w_n / 2.
LtfSpec ltf_preprocess(const LtfSpec& spec, const Caps& caps = default_caps());

// Weight file: "theta=<decimal>" then one decimal weight per line.
LtfSpec parse_ltf(std::string_view text, const Caps& caps = default_caps());
LtfSpec load_ltf(const std::string& path, const Caps& caps = default_caps());

}  // namespace f2lab
