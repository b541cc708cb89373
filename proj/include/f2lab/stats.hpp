#pragma once

#include <cstdint>

namespace f2lab {

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
};

// Exact two-sided binomial interval for `successes` out of `trials`.
Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double confidence = 0.95);

}  // namespace f2lab
