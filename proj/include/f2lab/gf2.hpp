#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "f2lab/bitvec.hpp"
#include "f2lab/error.hpp"

namespace f2lab {

// Dense GF(2) matrix with at most 64 columns; row r is a bit mask.
class Gf2Matrix {
 public:
  Gf2Matrix() = default;
  explicit Gf2Matrix(int cols);
  Gf2Matrix(int cols, std::vector<std::uint64_t> rows);

  static Gf2Matrix from_rows(int cols, std::span<const BitVec> rows);
  static Gf2Matrix identity(int n);

  int cols() const { return cols_; }
  int row_count() const { return static_cast<int>(rows_.size()); }
  BitVec row(int r) const { return BitVec(cols_, rows_[r]); }
  std::uint64_t row_bits(int r) const { return rows_[r]; }
  const std::vector<std::uint64_t>& rows() const { return rows_; }
  bool get(int r, int c) const { return (rows_[r] >> c) & 1; }

  void push_back(std::uint64_t bits);
  void push_back(const BitVec& v) { push_back(v.bits()); }

  // M x over F_2, one output bit per row.
  std::uint64_t apply(std::uint64_t x) const;

  // "n=<cols> r=<rows>" followed by one 0/1 line per row.
  std::string to_text() const;
  static Gf2Matrix parse(std::string_view text);

  friend bool operator==(const Gf2Matrix&, const Gf2Matrix&) = default;

 private:
  int cols_ = 0;
  std::vector<std::uint64_t> rows_;
};

struct RrefResult {
  Gf2Matrix rref;  // same row count; nonzero rows first, sorted by pivot
  int rank = 0;
};

// Reduced row echelon form. A row's pivot is its lowest set bit (the
// leftmost coordinate in text form); pivot columns are zero in every other row.
RrefResult rref_rank(const Gf2Matrix& m);
int rank(const Gf2Matrix& m);

// Linear subspace of F_2^n held as its canonical RREF basis, so equality of
// subspaces is equality of bases.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(int n);  // the zero subspace

  static Subspace span_of(int n, std::span<const std::uint64_t> vectors);
  static Subspace span_of(const Gf2Matrix& m);
  // Standard subspace spanned by the unit vectors in `coords`.
  static Subspace standard(int n, std::uint64_t coords);
  static Subspace full(int n) { return standard(n, low_mask(n)); }
  // Trusted constructor for rows that are already canonical RREF.
  static Subspace from_rref(int n, std::vector<std::uint64_t> rows);

  int n() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  std::span<const std::uint64_t> basis_bits() const { return basis_; }
  Gf2Matrix basis() const { return Gf2Matrix(n_, basis_); }
  std::uint64_t pivot_mask() const { return pivots_; }

  // Clears pivot coordinates; the result is the canonical representative of x + A.
  std::uint64_t reduce(std::uint64_t x) const;
  bool contains(std::uint64_t x) const { return reduce(x) == 0; }
  bool contains(const BitVec& x) const { return x.size() == n_ && contains(x.bits()); }

  // Visits all 2^dim elements in Gray-code order starting at 0.
  template <class Fn>
  void for_each_element(Fn&& fn) const {
    std::uint64_t v = 0;
    fn(v);
    const std::uint64_t count = std::uint64_t{1} << basis_.size();
    for (std::uint64_t i = 1; i < count; ++i) {
      v ^= basis_[std::countr_zero(i)];
      fn(v);
    }
  }
  std::vector<std::uint64_t> elements(const Caps& caps = default_caps()) const;

  Subspace orthogonal() const;
  bool is_standard() const;

  friend bool operator==(const Subspace&, const Subspace&) = default;

 private:
  int n_ = 0;
  std::vector<std::uint64_t> basis_;
  std::uint64_t pivots_ = 0;
};

// A coset H + a; the shift is stored reduced so equal cosets compare equal.
class AffineSubspace {
 public:
  AffineSubspace(Subspace sub, BitVec shift);
  const Subspace& sub() const { return sub_; }
  const BitVec& shift() const { return shift_; }
  bool contains(const BitVec& x) const { return sub_.contains((x ^ shift_).bits()); }
  friend bool operator==(const AffineSubspace&, const AffineSubspace&) = default;

 private:
  Subspace sub_;
  BitVec shift_;
};

// Null space {x : M x = 0}.
Subspace null_space(const Gf2Matrix& m);

// Number of d-dimensional subspaces of F_2^n; n <= 40.
std::uint64_t gaussian_binomial(int n, int d);

// Streams every d-dimensional subspace of F_2^n exactly once by generating
// RREF matrices directly: pivot sets in lexicographic order, then the free
// entries as a binary counter. A stream can be restricted to the pivot sets
// whose ordinal is congruent to `offset` mod `stride` so that workers can
// split the enumeration without overlap.
class SubspaceStream {
 public:
  SubspaceStream(int n, int d, const Caps& caps = default_caps());
  SubspaceStream(int n, int d, int offset, int stride, const Caps& caps = default_caps());

  // Fills the next basis (d rows, pivot order). Returns false when exhausted.
  bool next(std::vector<std::uint64_t>& rows);
  bool next(Subspace& out);

  // Position of the subspace most recently returned, in global stream order.
  std::pair<std::uint64_t, std::uint64_t> position() const { return {pivot_ordinal_, counter_ - 1}; }

 private:
  bool advance_pivots();
  void load_pivot_set();

  int n_;
  int d_;
  int offset_;
  int stride_;
  bool started_ = false;
  bool done_ = false;
  std::vector<int> pivots_;
  std::vector<std::pair<int, int>> free_;  // (row, column)
  std::uint64_t pivot_ordinal_ = 0;
  std::uint64_t counter_ = 0;
  std::uint64_t limit_ = 0;
};

std::vector<Subspace> enumerate_subspaces(int n, int d, const Caps& caps = default_caps());

// Odd-Hamming-weight members of L, ascending.
std::vector<BitVec> odd_set(const Subspace& l, const Caps& caps = default_caps());

struct Domination {
  bool holds = false;
  // (v1 from the dominating set, v2 from the dominated set), support(v1) within support(v2).
  std::vector<std::pair<BitVec, BitVec>> matching;
};

// True iff every v2 in `dominated` can be matched to a distinct v1 in
// `dominating` whose support is contained in v2's. Maximum bipartite matching
// by augmenting paths.
Domination set_dominates(std::span<const BitVec> dominating, std::span<const BitVec> dominated);

struct DominationDecomposition {
  Subspace s1;  // dim <= d - 1
  Subspace s2;  // dim <= d
  Subspace s3;  // dim <= min(2d, n)
  // (element of O(s1) u O(s2) u O(s3), element of O(L)).
  std::vector<std::pair<BitVec, BitVec>> matching;
};

// Three standard subspaces whose odd sets jointly dominate O(L), built by
// the explicit three-case construction (pivot identity, first-row fixing,
// pivot columns of the tail block). Coordinates are the original ones.
DominationDecomposition standard_domination_decompose(const Subspace& l, const Caps& caps = default_caps());

// Super-slam of A (a x n) and B (b x m): a blocks of b^n rows; the row for
// j = (j_1..j_n) is (A_{i,1} B_{j_1}, ..., A_{i,n} B_{j_n}), column block k
// occupying columns m(k-1)..mk-1. j_1 varies fastest.
Gf2Matrix super_slam(const Gf2Matrix& a, const Gf2Matrix& b, const Caps& caps = default_caps());

}  // namespace f2lab
