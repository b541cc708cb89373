#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "json.hpp"

#include "f2lab/bitvec.hpp"
#include "f2lab/boolfn.hpp"
#include "f2lab/error.hpp"
#include "f2lab/rational.hpp"
#include "f2lab/sketch.hpp"

namespace f2lab {

// Alice sends message[x] (c bits); Bob outputs decoder(y, message). An empty
// decoder means Bob decodes optimally for the distribution at hand.
struct OneWayProtocol {
  int n = 0;
  int c = 0;
  std::vector<std::uint32_t> message;
  std::function<int(std::uint64_t y, std::uint64_t msg)> decoder;
};

// Joint law of (x, y) with integer weights over 2^{2n+1}:
// uniform weighs every pair 2; sec7(z) weighs (x, y) by 2^n [x = y + z] + 1,
// that is y uniform and x = y + z with probability 1/2, else uniform.
struct PairDistribution {
  enum class Kind { uniform, sec7 } kind = Kind::uniform;
  std::uint64_t z = 0;

  static PairDistribution uniform() { return {}; }
  static PairDistribution sec7(std::uint64_t z) { return {Kind::sec7, z}; }
  std::uint64_t weight(std::uint64_t x, std::uint64_t y, int n) const {
    return kind == Kind::uniform ? 2 : ((x == (y ^ z)) ? (std::uint64_t{1} << n) : 0) + 1;
  }
};

// The hard distribution for f: z is the smallest input with f(z) != chi_S(z),
// S the closest character. Throws for linear f.
PairDistribution sec7_for(const BoolFun& f);

// Pr over mu of decoder(y, message(x)) != f(x + y), exact.
Rational exact_error(const OneWayProtocol& p, const BoolFun& f, const PairDistribution& mu,
                     const Caps& caps = default_caps());

// Error of the given message function with the best decoder for every
// (message, y) pair: the minimum over all decoder tables.
Rational optimal_rectangle_error(const std::vector<std::uint32_t>& message, const BoolFun& f, const PairDistribution& mu,
                                 const Caps& caps = default_caps());

struct OneBitSearch {
  Rational error;
  std::uint64_t witness = 0;  // message bit for x is (witness >> x) & 1
  std::uint64_t searched = 0;
};
// Minimum over all 2^{2^n} one-bit messages of the optimal-decoder error.
OneBitSearch best_one_bit_error(const BoolFun& f, const PairDistribution& mu, int workers = 1,
                                const Caps& caps = default_caps());

struct MessageBound {
  Rational epsilon;
  double bound = 0;            // (sqrt 2 / 2)(1 + epsilon)
  double worst_value = 0;      // max over M of E_y |E_{x ~ D_y} M(x) f(x + y)|
  std::uint64_t worst_message = 0;
  bool holds = false;          // decided exactly, not from the doubles above
};
// Checks E_y |E_{x ~ D_y}[M(x) f(x + y)]| <= (sqrt 2 / 2)(1 + eps) for every
// M: F_2^n -> {+1, -1} under sec7(z), with eps the distance of f to linear.
MessageBound check_message_bound(const BoolFun& f, std::uint64_t z, int workers = 1, const Caps& caps = default_caps());

// Alice sends x_1..x_{n-1}; Bob outputs the majority of x_i + y_i over
// those coordinates, +1 on ties. n odd.
OneWayProtocol trivial_majority_protocol(int n, const Caps& caps = default_caps());

// c = k; message = sketch of x; Bob decodes message + sketch of y.
OneWayProtocol protocol_from_sketch(const SketchScheme& scheme, std::uint64_t sample, const Caps& caps = default_caps());

// {"format", "n", "c", "message": hex, "decoders": optional hex over msg * 2^n + y}.
nlohmann::json protocol_to_json(const OneWayProtocol& p, bool with_decoders, const Caps& caps = default_caps());
OneWayProtocol protocol_from_json(const nlohmann::json& j, const Caps& caps = default_caps());

}  // namespace f2lab
