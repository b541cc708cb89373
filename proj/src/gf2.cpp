#include "f2lab/gf2.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

namespace f2lab {

// ---- Gf2Matrix --------------------------------------------------------------

Gf2Matrix::Gf2Matrix(int cols) : cols_(cols) {
  if (cols < 0 || cols > kMaxBitVecDim) throw ValidationError("matrix column count out of range");
}

Gf2Matrix::Gf2Matrix(int cols, std::vector<std::uint64_t> rows) : Gf2Matrix(cols) {
  for (auto r : rows)
    if (r & ~low_mask(cols)) throw ValidationError("matrix row has bits beyond column count");
  rows_ = std::move(rows);
}

Gf2Matrix Gf2Matrix::from_rows(int cols, std::span<const BitVec> rows) {
  Gf2Matrix m(cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw ValidationError("matrix rows must share one dimension");
    m.rows_.push_back(r.bits());
  }
  return m;
}

Gf2Matrix Gf2Matrix::identity(int n) {
  Gf2Matrix m(n);
  for (int i = 0; i < n; ++i) m.rows_.push_back(std::uint64_t{1} << i);
  return m;
}

void Gf2Matrix::push_back(std::uint64_t bits) {
  if (bits & ~low_mask(cols_)) throw ValidationError("matrix row has bits beyond column count");
  rows_.push_back(bits);
}

std::uint64_t Gf2Matrix::apply(std::uint64_t x) const {
  std::uint64_t out = 0;
  for (std::size_t r = 0; r < rows_.size(); ++r) out |= static_cast<std::uint64_t>(parity(rows_[r] & x)) << r;
  return out;
}

std::string Gf2Matrix::to_text() const {
  std::string s = "n=" + std::to_string(cols_) + " r=" + std::to_string(rows_.size()) + "\n";
  for (auto r : rows_) s += BitVec(cols_, r).str() + "\n";
  return s;
}

Gf2Matrix Gf2Matrix::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  int n = -1, r = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (std::sscanf(line.c_str(), "n=%d r=%d", &n, &r) != 2 || n < 0 || n > kMaxBitVecDim || r < 0)
      throw ParseError("expected header 'n=<int> r=<int>'", line_no);
    break;
  }
  if (n < 0) throw ParseError("missing matrix header", line_no);
  Gf2Matrix m(n);
  while (static_cast<int>(m.rows_.size()) < r && std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (static_cast<int>(line.size()) != n) throw ParseError("row must have exactly n characters", line_no);
    try {
      m.rows_.push_back(BitVec::parse(line).bits());
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (static_cast<int>(m.rows_.size()) != r) throw ParseError("fewer rows than declared", line_no);
  return m;
}

// ---- elimination ----------------------------------------------------------------

RrefResult rref_rank(const Gf2Matrix& m) {
  std::vector<std::uint64_t> rows = m.rows();
  int rank = 0;
  for (int c = 0; c < m.cols() && rank < static_cast<int>(rows.size()); ++c) {
    const std::uint64_t bit = std::uint64_t{1} << c;
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r] & bit) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r)
      if (r != rank && (rows[r] & bit)) rows[r] ^= rows[rank];
    ++rank;
  }
  return {Gf2Matrix(m.cols(), std::move(rows)), rank};
}

int rank(const Gf2Matrix& m) { return rref_rank(m).rank; }

// ---- Subspace ----------------------------------------------------------------------

Subspace::Subspace(int n) : n_(n) {
  if (n < 0 || n > kMaxBitVecDim) throw ValidationError("subspace dimension out of range");
}

Subspace Subspace::span_of(int n, std::span<const std::uint64_t> vectors) {
  return span_of(Gf2Matrix(n, std::vector<std::uint64_t>(vectors.begin(), vectors.end())));
}

Subspace Subspace::span_of(const Gf2Matrix& m) {
  auto [rref, r] = rref_rank(m);
  std::vector<std::uint64_t> rows(rref.rows().begin(), rref.rows().begin() + r);
  return from_rref(m.cols(), std::move(rows));
}

Subspace Subspace::standard(int n, std::uint64_t coords) {
  Subspace s(n);
  if (coords & ~low_mask(n)) throw ValidationError("standard subspace coordinate out of range");
  for (int i = 0; i < n; ++i)
    if ((coords >> i) & 1) s.basis_.push_back(std::uint64_t{1} << i);
  s.pivots_ = coords;
  return s;
}

Subspace Subspace::from_rref(int n, std::vector<std::uint64_t> rows) {
  Subspace s(n);
  s.basis_ = std::move(rows);
  for (auto r : s.basis_) s.pivots_ |= r & (~r + 1);
  return s;
}

std::uint64_t Subspace::reduce(std::uint64_t x) const {
  for (auto r : basis_)
    if (x & r & (~r + 1)) x ^= r;
  return x;
}

std::vector<std::uint64_t> Subspace::elements(const Caps& caps) const {
  if (dim() > caps.max_span_dim) throw CapExceeded("span enumeration of dimension " + std::to_string(dim()) + " exceeds cap");
  std::vector<std::uint64_t> out;
  out.reserve(std::size_t{1} << dim());
  for_each_element([&](std::uint64_t v) { out.push_back(v); });
  return out;
}

Subspace Subspace::orthogonal() const {
  // A^perp is the null space of the basis matrix.
  return null_space(basis());
}

bool Subspace::is_standard() const {
  return std::all_of(basis_.begin(), basis_.end(), [](std::uint64_t r) { return std::has_single_bit(r); });
}

AffineSubspace::AffineSubspace(Subspace sub, BitVec shift) : sub_(std::move(sub)), shift_(shift) {
  if (shift.size() != sub_.n()) throw ValidationError("affine shift dimension mismatch");
  shift_ = BitVec(sub_.n(), sub_.reduce(shift.bits()));
}

Subspace null_space(const Gf2Matrix& m) {
  auto [rref, r] = rref_rank(m);
  const int n = m.cols();
  std::uint64_t pivot_cols = 0;
  for (int i = 0; i < r; ++i) pivot_cols |= rref.row_bits(i) & (~rref.row_bits(i) + 1);
  // One basis vector per free column f: x_f = 1 and each pivot p takes the
  // entry of its row at column f.
  std::vector<std::uint64_t> basis;
  for (int f = 0; f < n; ++f) {
    if ((pivot_cols >> f) & 1) continue;
    std::uint64_t v = std::uint64_t{1} << f;
    for (int i = 0; i < r; ++i) {
      const std::uint64_t row = rref.row_bits(i);
      if ((row >> f) & 1) v |= row & (~row + 1);
    }
    basis.push_back(v);
  }
  return Subspace::span_of(n, basis);
}

std::uint64_t gaussian_binomial(int n, int d) {
  if (d < 0 || n < 0 || d > n) return 0;
  if (n > 40) throw CapExceeded("gaussian_binomial limited to n <= 40");
  // [n, d] = [n-1, d-1] + 2^d [n-1, d]
  std::vector<std::vector<unsigned __int128>> t(n + 1, std::vector<unsigned __int128>(n + 1, 0));
  for (int i = 0; i <= n; ++i) {
    t[i][0] = 1;
    for (int j = 1; j <= i; ++j) t[i][j] = t[i - 1][j - 1] + (j <= i - 1 ? (static_cast<unsigned __int128>(1) << j) * t[i - 1][j] : 0);
  }
  if (t[n][d] > std::numeric_limits<std::uint64_t>::max()) throw CapExceeded("gaussian binomial overflows 64 bits");
  return static_cast<std::uint64_t>(t[n][d]);
}

// ---- SubspaceStream ---------------------------------------------------------------

SubspaceStream::SubspaceStream(int n, int d, const Caps& caps) : SubspaceStream(n, d, 0, 1, caps) {}

SubspaceStream::SubspaceStream(int n, int d, int offset, int stride, const Caps& caps)
    : n_(n), d_(d), offset_(offset), stride_(stride) {
  if (n < 0 || d < 0 || d > n) throw ValidationError("subspace dimension out of range: need 0 <= d <= n");
  if (n > caps.max_enum_dim)
    throw CapExceeded("subspace enumeration needs n <= " + std::to_string(caps.max_enum_dim) + ", got " + std::to_string(n));
  if (stride < 1 || offset < 0 || offset >= stride) throw ValidationError("bad stream partition");
}

void SubspaceStream::load_pivot_set() {
  free_.clear();
  std::uint64_t pivot_mask = 0;
  for (int p : pivots_) pivot_mask |= std::uint64_t{1} << p;
  for (int i = 0; i < d_; ++i)
    for (int c = pivots_[i] + 1; c < n_; ++c)
      if (!((pivot_mask >> c) & 1)) free_.emplace_back(i, c);
  counter_ = 0;
  limit_ = std::uint64_t{1} << free_.size();
}

bool SubspaceStream::advance_pivots() {
  if (!started_) {
    started_ = true;
    pivots_.resize(d_);
    for (int i = 0; i < d_; ++i) pivots_[i] = i;
    pivot_ordinal_ = 0;
    return true;
  }
  int i = d_ - 1;
  while (i >= 0 && pivots_[i] == n_ - d_ + i) --i;
  if (i < 0) return false;
  ++pivots_[i];
  for (int j = i + 1; j < d_; ++j) pivots_[j] = pivots_[j - 1] + 1;
  ++pivot_ordinal_;
  return true;
}

bool SubspaceStream::next(std::vector<std::uint64_t>& rows) {
  if (done_) return false;
  while (!started_ || counter_ >= limit_) {
    do {
      if (!advance_pivots()) {
        done_ = true;
        return false;
      }
    } while (pivot_ordinal_ % stride_ != static_cast<std::uint64_t>(offset_));
    load_pivot_set();
  }
  rows.assign(d_, 0);
  for (int i = 0; i < d_; ++i) rows[i] = std::uint64_t{1} << pivots_[i];
  for (std::size_t k = 0; k < free_.size(); ++k)
    if ((counter_ >> k) & 1) rows[free_[k].first] |= std::uint64_t{1} << free_[k].second;
  ++counter_;
  return true;
}

bool SubspaceStream::next(Subspace& out) {
  std::vector<std::uint64_t> rows;
  if (!next(rows)) return false;
  out = Subspace::from_rref(n_, std::move(rows));
  return true;
}

std::vector<Subspace> enumerate_subspaces(int n, int d, const Caps& caps) {
  SubspaceStream stream(n, d, caps);
  if (gaussian_binomial(n, d) > caps.max_work) throw CapExceeded("too many subspaces to materialize");
  std::vector<Subspace> out;
  Subspace s;
  while (stream.next(s)) out.push_back(s);
  return out;
}

// ---- odd sets and domination ---------------------------------------------------

std::vector<BitVec> odd_set(const Subspace& l, const Caps& caps) {
  if (l.dim() > caps.max_span_dim) throw CapExceeded("odd_set: subspace dimension exceeds cap");
  std::vector<BitVec> out;
  l.for_each_element([&](std::uint64_t v) {
    if (parity(v)) out.emplace_back(l.n(), v);
  });
  std::sort(out.begin(), out.end());
  return out;
}

Domination set_dominates(std::span<const BitVec> dominating, std::span<const BitVec> dominated) {
  const std::size_t left = dominated.size();
  const std::size_t right = dominating.size();
  std::vector<std::vector<std::size_t>> adj(left);
  for (std::size_t i = 0; i < left; ++i) {
    for (std::size_t j = 0; j < right; ++j) {
      if (dominating[j].size() != dominated[i].size()) throw ValidationError("set_dominates: dimension mismatch");
      if (dominating[j].dominates(dominated[i])) adj[i].push_back(j);
    }
  }
  std::vector<int> match_right(right, -1);
  std::vector<char> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t u) {
    for (auto v : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      if (match_right[v] < 0 || augment(static_cast<std::size_t>(match_right[v]))) {
        match_right[v] = static_cast<int>(u);
        return true;
      }
    }
    return false;
  };
  Domination result;
  for (std::size_t u = 0; u < left; ++u) {
    seen.assign(right, 0);
    if (!augment(u)) return result;
  }
  result.holds = true;
  for (std::size_t v = 0; v < right; ++v)
    if (match_right[v] >= 0) result.matching.emplace_back(dominating[v], dominated[match_right[v]]);
  std::sort(result.matching.begin(), result.matching.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  return result;
}

DominationDecomposition standard_domination_decompose(const Subspace& l, const Caps& caps) {
  const int n = l.n();
  const int d = l.dim();
  if (d > caps.max_span_dim) throw CapExceeded("domination: subspace dimension exceeds cap");
  DominationDecomposition out{Subspace(n), Subspace(n), Subspace(n), {}};
  auto rows = std::vector<std::uint64_t>(l.basis_bits().begin(), l.basis_bits().end());
  if (std::none_of(rows.begin(), rows.end(), [](std::uint64_t r) { return parity(r) == 1; })) return out;

  // The RREF basis is (I_d | M) up to a column permutation; pivots[i] is the
  // identity column of row i. Move one odd row to the front, then add it to
  // every even row so that all rows become odd. Rows 2..d keep their own
  // identity column; the first pivot column becomes 1 in the former even rows.
  auto first_odd = std::find_if(rows.begin(), rows.end(), [](std::uint64_t r) { return parity(r) == 1; });
  std::rotate(rows.begin(), first_odd, first_odd + 1);
  std::vector<int> pivot(d);
  for (int i = 0; i < d; ++i) pivot[i] = std::countr_zero(rows[i]);
  for (int i = 1; i < d; ++i)
    if (!parity(rows[i])) rows[i] ^= rows[0];

  std::uint64_t pivot_mask = 0;
  for (int p : pivot) pivot_mask |= std::uint64_t{1} << p;
  const std::uint64_t first_col = std::uint64_t{1} << pivot[0];

  // Case 3 support: pivot columns of the row space of the non-identity block.
  Gf2Matrix tail(n);
  for (auto r : rows) tail.push_back(r & ~pivot_mask);
  std::uint64_t tail_pivots = 0;
  {
    auto [rref, r] = rref_rank(tail);
    for (int i = 0; i < r; ++i) tail_pivots |= rref.row_bits(i) & (~rref.row_bits(i) + 1);
  }

  out.s1 = Subspace::standard(n, pivot_mask & ~first_col);
  out.s2 = Subspace::standard(n, pivot_mask);
  out.s3 = Subspace::standard(n, (pivot_mask & ~first_col) | tail_pivots);

  // Each x in O(L) is an odd-size combination of the (now odd) rows; the
  // index set alone determines its image.
  for (std::uint64_t subset = 1; subset < (std::uint64_t{1} << d); ++subset) {
    if (!(std::popcount(subset) & 1)) continue;
    std::uint64_t x = 0, identity_part = 0;
    for (int i = 0; i < d; ++i) {
      if ((subset >> i) & 1) {
        x ^= rows[i];
        identity_part |= std::uint64_t{1} << pivot[i];
      }
    }
    std::uint64_t image;
    if (!(subset & 1)) {
      image = identity_part;  // case 1: first row unused
    } else if (x & first_col) {
      image = identity_part;  // case 2: includes the first pivot column
    } else {
      // case 3: even weight on the identity columns, so the tail is nonzero
      // and has a one in some tail pivot column.
      const std::uint64_t hit = x & tail_pivots;
      if (!hit) throw std::logic_error("domination: case 3 combination misses every tail pivot");
      image = (identity_part & ~first_col) | (hit & (~hit + 1));
    }
    out.matching.emplace_back(BitVec(n, image), BitVec(n, x));
  }
  std::sort(out.matching.begin(), out.matching.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  return out;
}

Gf2Matrix super_slam(const Gf2Matrix& a, const Gf2Matrix& b, const Caps& caps) {
  const int n = a.cols();
  const int m = b.cols();
  const std::uint64_t rows_a = a.row_count();
  const std::uint64_t rows_b = b.row_count();
  if (n * m > kMaxBitVecDim) throw CapExceeded("super_slam: result has more than 64 columns");
  // Count of rows is a * b^n; guard against overflow before multiplying out.
  unsigned __int128 total = rows_a;
  for (int i = 0; i < n && total <= caps.max_slam_cells; ++i) total *= rows_b;
  if (total * static_cast<unsigned>(std::max(1, n * m)) > caps.max_slam_cells)
    throw CapExceeded("super_slam: result exceeds size cap");
  Gf2Matrix out(n * m);
  if (rows_b == 0 && n > 0) return out;
  std::vector<std::uint64_t> digits(n, 0);
  for (std::uint64_t i = 0; i < rows_a; ++i) {
    std::fill(digits.begin(), digits.end(), 0);
    for (;;) {
      std::uint64_t row = 0;
      for (int k = 0; k < n; ++k)
        if (a.get(static_cast<int>(i), k)) row |= b.row_bits(static_cast<int>(digits[k])) << (k * m);
      out.push_back(row);
      int k = 0;
      while (k < n && ++digits[k] == rows_b) digits[k++] = 0;
      if (k == n) break;
    }
  }
  return out;
}

}  // namespace f2lab
