#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"

#include "f2lab/boolfn.hpp"
#include "f2lab/error.hpp"
#include "f2lab/gf2.hpp"
#include "f2lab/rational.hpp"

namespace f2lab {

struct ExactDim {
  int d = 0;
  Subspace basis;  // span of Spec(f)
};
ExactDim exact_dim(const Spectrum& s);
ExactDim exact_dim(const BoolFun& f);

// Sum of f^(alpha)^2 over alpha in A.
Rational subspace_weight(const Spectrum& s, const Subspace& a);

struct SubspaceWeight {
  Rational weight;
  Subspace witness;
};

struct SearchOptions {
  Caps caps = default_caps();
  int workers = 1;
  // Enumerate every subspace of F_2^n instead of those inside span(Spec(f)).
  // Used as an oracle; limited to n <= caps.max_enum_dim.
  bool full_space = false;
};

// Exact max of the spectral weight over subspaces of dimension <= d. The
// witness is the first maximizer in canonical stream order.
SubspaceWeight max_subspace_weight(const Spectrum& s, int d, const SearchOptions& opt = {});

struct DimProfile {
  int n = 0;
  std::vector<Rational> w;            // w_0 .. w_n
  std::vector<Subspace> witnesses;    // per d
  std::vector<Rational> gaps;         // gaps[d] = w_d - w_{d-1}; gaps[0] = w_0
  std::vector<bool> undefined;        // gap zero: the max over an empty set
  int best_gap_d = 0;                 // smallest d >= 1 with the largest gap
};
DimProfile dim_profile(const Spectrum& s, const SearchOptions& opt = {});

// Adds, d times, the spectrum vector that most increases the span weight.
// A lower bound on w_d.
SubspaceWeight greedy_subspace(const Spectrum& s, int d);

nlohmann::json bound_report(const DimProfile& p);

struct HammingIntersection {
  Rational ratio;  // |W_k n A| / |W_k|
  double bound;    // (e d / n)^{min(k, n-k, d)}
  bool ok;
};
HammingIntersection hamming_intersection_check(const Subspace& a, int k, const Caps& caps = default_caps());

struct AffineCheck {
  bool disperser = false;
  bool extractor = false;
  Rational min_side;        // smallest minority fraction over the scanned cosets
  Subspace worst_sub;       // direction space of the worst coset
  BitVec worst_shift;
  int lower_bound = 0;      // n - d + 1 when disperser or extractor holds, else 0
  std::uint64_t cosets = 0; // number of cosets scanned
  bool complete = false;    // every dimension >= d was scanned
};
// Scans affine subspaces {x : K x = b} of dimension >= d. With n <= the affine
// cap all codimensions 0..n-d are scanned; otherwise only codimension n-d,
// which suffices because a larger coset is a disjoint union of dimension-d
// cosets and its minority fraction is at least theirs.
AffineCheck affine_structure_check(const BoolFun& f, int d, const Rational& delta, const SearchOptions& opt = {});

// Error of the best decoder for the sketch x -> (a_1 . x, ..., a_d . x) where
// a_i is a basis of A: sum over cosets of A^perp of the minority count / 2^n.
Rational optimal_sketch_error(const BoolFun& f, const Subspace& a);
// Minimum of the above over every d-dimensional A (n <= max_enum_dim).
Rational exhaustive_sketch_error(const BoolFun& f, int d, const Caps& caps = default_caps());

}  // namespace f2lab
