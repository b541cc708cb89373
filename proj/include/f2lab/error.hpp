#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace f2lab {

// Malformed input, violated precondition, or unknown name. CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file that failed to parse; carries the 1-based line number.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, int line)
      : ValidationError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A size guard refused the request. CLI exit code 3.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Size guards. Every exhaustive routine checks the relevant field before
// doing work; the CLI can override them with --caps.
struct Caps {
  int max_arity = 26;            // truth-table functions
  int max_enum_dim = 14;         // ambient dimension for full subspace enumeration
  int max_span_dim = 20;         // explicit span / odd-set enumeration
  int max_comm_arity = 13;       // exact two-party error evaluation
  int max_onebit_arity = 4;      // exhaustive one-bit message search
  int max_affine_arity = 8;      // full affine enumeration (all dimensions >= d)
  int max_sketch_table_bits = 20;
  std::uint64_t max_work = std::uint64_t{1} << 36;  // abstract inner-loop steps
  std::uint64_t max_slam_cells = std::uint64_t{1} << 26;
};

// Process-wide defaults; the CLI replaces them once at startup.
Caps& default_caps();

}  // namespace f2lab
