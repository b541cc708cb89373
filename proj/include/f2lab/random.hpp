#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace f2lab {

// All randomness flows from one 64-bit seed. Each consumer derives its own
// substream from (seed, name, index) so results do not depend on call order.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

// Thin wrapper over mt19937_64 with distribution code written out here so
// the same seed produces the same draws on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::string_view name, std::uint64_t index = 0)
      : engine_(derive_seed(seed, name, index)) {}

  std::uint64_t bits() { return engine_(); }
  std::uint64_t bits(int count) {
    return count >= 64 ? engine_() : (engine_() & ((std::uint64_t{1} << count) - 1));
  }
  // Uniform in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound);
  // Uniform in [0, 1) with 53 random bits.
  double unit();
  bool bernoulli(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace f2lab
