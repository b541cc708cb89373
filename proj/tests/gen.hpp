#pragma once

// Hand-rolled generators for property tests. Every case derives its own
// stream from (seed, property name, case index), so a failure names a
// reproducible case.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "f2lab/boolfn.hpp"
#include "f2lab/gf2.hpp"
#include "f2lab/random.hpp"

namespace gen {

inline constexpr std::uint64_t kSeed = 20240601;

inline f2lab::Rng rng_for(const std::string& property, std::uint64_t index) {
  return f2lab::Rng(kSeed, property, index);
}

inline f2lab::BoolFun boolfun(int n, f2lab::Rng& rng) {
  std::vector<std::int8_t> t(std::size_t{1} << n);
  for (auto& v : t) v = (rng.bits() & 1) ? -1 : 1;
  return f2lab::BoolFun(n, std::move(t));
}

// Fraction of -1 entries drawn uniformly, so skewed tables also appear.
inline f2lab::BoolFun skewed_boolfun(int n, f2lab::Rng& rng) {
  const double p = rng.unit();
  std::vector<std::int8_t> t(std::size_t{1} << n);
  for (auto& v : t) v = rng.bernoulli(p) ? -1 : 1;
  return f2lab::BoolFun(n, std::move(t));
}

inline f2lab::BoolFun balanced(int m, f2lab::Rng& rng) {
  std::vector<std::int8_t> t(std::size_t{1} << m, 1);
  for (std::size_t i = 0; i < t.size() / 2; ++i) t[i] = -1;
  for (std::size_t i = t.size(); i > 1; --i) std::swap(t[i - 1], t[rng.below(i)]);
  return f2lab::BoolFun(m, std::move(t));
}

inline f2lab::Gf2Matrix matrix(int rows, int cols, f2lab::Rng& rng) {
  f2lab::Gf2Matrix m(cols);
  for (int r = 0; r < rows; ++r) m.push_back(rng.bits(cols));
  return m;
}

inline f2lab::Subspace subspace(int n, int d, f2lab::Rng& rng) {
  std::vector<std::uint64_t> vs;
  f2lab::Subspace s(n);
  while (s.dim() < d) {
    vs.push_back(rng.bits(n));
    s = f2lab::Subspace::span_of(n, vs);
  }
  return s;
}

// Brute-force span: every XOR of a subset of rows.
inline std::vector<std::uint64_t> span_set(const std::vector<std::uint64_t>& rows) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rows.size()); ++mask) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if ((mask >> i) & 1) v ^= rows[i];
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace gen
