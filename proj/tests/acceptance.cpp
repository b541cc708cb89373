// Acceptance runner: one PASS/FAIL line per criterion. With arguments, runs
// only the named criteria. Exit status is 0 iff every criterion run passed.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "f2lab/checks.hpp"
#include "f2lab/parallel.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> ids(argv + 1, argv + argc);
  if (ids.empty()) ids = f2lab::check_ids();
  f2lab::CheckOptions opt;
  opt.workers = f2lab::default_workers();
  int failed = 0;
  for (const auto& id : ids) {
    try {
      const auto r = f2lab::run_check(id, opt);
      std::printf("%s %s: %s [%.1f s, limit %.0f s]\n", r.pass ? "PASS" : "FAIL", id.c_str(), r.summary.c_str(),
                  r.seconds, r.limit_seconds);
      failed += !r.pass;
    } catch (const std::exception& e) {
      std::printf("FAIL %s: %s\n", id.c_str(), e.what());
      ++failed;
    }
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
