#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "f2lab/error.hpp"

namespace f2lab {

struct CheckOptions {
  std::uint64_t seed = 1;
  int workers = 1;
  Caps caps = default_caps();
  int k = 2;  // recmaj-4d-over-n: recursion depth
};

struct CheckResult {
  std::string id;
  bool pass = false;
  std::string summary;  // one line, no trailing newline
  nlohmann::json details = nlohmann::json::object();
  double seconds = 0;
  double limit_seconds = 0;  // pass also requires seconds < limit
};

// Acceptance criteria in order.
const std::vector<std::string>& check_ids();
// Throws ValidationError for an unknown id.
CheckResult run_check(const std::string& id, const CheckOptions& opt = {});

}  // namespace f2lab
