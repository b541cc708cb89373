#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace f2lab {

// args excludes the program name. Exit codes: 0 success, 1 a check FAILed,
// 2 validation or parse error, 3 cap exceeded.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace f2lab
