#include "f2lab/fourierdim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "f2lab/parallel.hpp"

namespace f2lab {

ExactDim exact_dim(const Spectrum& s) {
  const auto support = s.support();
  Subspace basis = Subspace::span_of(s.n, support);
  return {basis.dim(), basis};
}

ExactDim exact_dim(const BoolFun& f) { return exact_dim(wht(f)); }

Rational subspace_weight(const Spectrum& s, const Subspace& a) {
  if (a.n() != s.n) throw ValidationError("subspace_weight: dimension mismatch");
  std::uint64_t sum = 0;
  a.for_each_element([&](std::uint64_t v) { sum += s.sq(v); });
  return Rational(static_cast<std::int64_t>(sum), std::int64_t{1} << (2 * s.n));
}

namespace {

// Squared coefficients re-indexed by coordinates u in F_2^r over a basis of
// the search space.
struct SpanTable {
  int n = 0;
  std::vector<std::uint64_t> basis;
  std::vector<std::uint64_t> sq;

  int r() const { return static_cast<int>(basis.size()); }
  std::uint64_t lift(std::uint64_t u) const {
    std::uint64_t v = 0;
    for (int i = 0; u; ++i, u >>= 1)
      if (u & 1) v ^= basis[i];
    return v;
  }
};

SpanTable span_table(const Spectrum& s, const SearchOptions& opt) {
  SpanTable t;
  t.n = s.n;
  if (opt.full_space) {
    for (int i = 0; i < s.n; ++i) t.basis.push_back(std::uint64_t{1} << i);
  } else {
    const ExactDim d = exact_dim(s);
    t.basis.assign(d.basis.basis_bits().begin(), d.basis.basis_bits().end());
  }
  if (t.r() > opt.caps.max_enum_dim)
    throw CapExceeded("exact search needs a " + std::to_string(t.r()) + "-dimensional space, cap is " +
                      std::to_string(opt.caps.max_enum_dim) + "; use greedy_subspace for a lower bound");
  t.sq.resize(std::size_t{1} << t.r());
  std::uint64_t v = 0;
  t.sq[0] = s.sq(0);
  for (std::uint64_t u = 1; u < t.sq.size(); ++u) {
    v ^= t.basis[std::countr_zero(u)];
    t.sq[u ^ (u >> 1)] = s.sq(v);
  }
  return t;
}

struct Best {
  std::uint64_t sum = 0;
  std::pair<std::uint64_t, std::uint64_t> pos{std::numeric_limits<std::uint64_t>::max(), 0};
  std::vector<std::uint64_t> rows;
  bool found = false;
};

bool better(const Best& a, const Best& b) {
  if (!a.found) return false;
  if (!b.found) return true;
  if (a.sum != b.sum) return a.sum > b.sum;
  return a.pos < b.pos;
}

SubspaceWeight search(const SpanTable& t, int d, const SearchOptions& opt) {
  const std::int64_t denom = std::int64_t{1} << (2 * t.n);
  auto lift_all = [&](const std::vector<std::uint64_t>& rows) {
    std::vector<std::uint64_t> lifted;
    for (auto u : rows) lifted.push_back(t.lift(u));
    return Subspace::span_of(t.n, lifted);
  };
  if (d >= t.r()) {
    std::uint64_t total = 0;
    for (auto v : t.sq) total += v;
    std::vector<std::uint64_t> all;
    for (int i = 0; i < t.r(); ++i) all.push_back(std::uint64_t{1} << i);
    return {Rational(static_cast<std::int64_t>(total), denom), lift_all(all)};
  }
  if (d <= 0) return {Rational(static_cast<std::int64_t>(t.sq[0]), denom), Subspace(t.n)};
  const std::uint64_t count = gaussian_binomial(t.r(), d);
  if (static_cast<double>(count) * static_cast<double>(std::uint64_t{1} << d) > static_cast<double>(opt.caps.max_work))
    throw CapExceeded("exact search over " + std::to_string(count) + " subspaces exceeds the work cap; use greedy_subspace");

  const int workers = std::max(1, opt.workers);
  std::vector<Best> best(workers);
  run_workers(workers, [&](int w) {
    SubspaceStream stream(t.r(), d, w, workers, opt.caps);
    std::vector<std::uint64_t> rows;
    Best& b = best[w];
    const std::uint64_t elements = std::uint64_t{1} << d;
    while (stream.next(rows)) {
      std::uint64_t v = 0, sum = t.sq[0];
      for (std::uint64_t i = 1; i < elements; ++i) {
        v ^= rows[std::countr_zero(i)];
        sum += t.sq[v];
      }
      if (!b.found || sum > b.sum) {
        b.sum = sum;
        b.pos = stream.position();
        b.rows = rows;
        b.found = true;
      }
    }
  });
  Best overall;
  for (const auto& b : best)
    if (better(b, overall)) overall = b;
  return {Rational(static_cast<std::int64_t>(overall.sum), denom), lift_all(overall.rows)};
}

}  // namespace

SubspaceWeight max_subspace_weight(const Spectrum& s, int d, const SearchOptions& opt) {
  if (d < 0 || d > s.n) throw ValidationError("max_subspace_weight: need 0 <= d <= n");
  return search(span_table(s, opt), d, opt);
}

DimProfile dim_profile(const Spectrum& s, const SearchOptions& opt) {
  const SpanTable t = span_table(s, opt);
  DimProfile p;
  p.n = s.n;
  for (int d = 0; d <= s.n; ++d) {
    auto r = search(t, d, opt);
    p.w.push_back(r.weight);
    p.witnesses.push_back(r.witness);
    p.gaps.push_back(d == 0 ? r.weight : r.weight - p.w[d - 1]);
    p.undefined.push_back(d > 0 && p.gaps.back() == 0);
  }
  for (int d = 1; d <= s.n; ++d)
    if (p.best_gap_d == 0 || p.gaps[d] > p.gaps[p.best_gap_d]) p.best_gap_d = d;
  return p;
}

SubspaceWeight greedy_subspace(const Spectrum& s, int d) {
  if (d < 0 || d > s.n) throw ValidationError("greedy_subspace: need 0 <= d <= n");
  const auto support = s.support();
  Subspace a(s.n);
  std::vector<std::uint64_t> elements{0};
  std::uint64_t sum = s.sq(0);
  for (int step = 0; step < d; ++step) {
    std::uint64_t best_gain = 0;
    std::uint64_t best_alpha = 0;
    bool found = false;
    for (auto alpha : support) {
      if (a.contains(alpha)) continue;
      std::uint64_t gain = 0;
      for (auto e : elements) gain += s.sq(e ^ alpha);
      if (!found || gain > best_gain) {
        best_gain = gain;
        best_alpha = alpha;
        found = true;
      }
    }
    if (!found) break;
    std::vector<std::uint64_t> basis(a.basis_bits().begin(), a.basis_bits().end());
    basis.push_back(best_alpha);
    a = Subspace::span_of(s.n, basis);
    const std::size_t old = elements.size();
    for (std::size_t i = 0; i < old; ++i) elements.push_back(elements[i] ^ best_alpha);
    sum += best_gain;
  }
  return {Rational(static_cast<std::int64_t>(sum), std::int64_t{1} << (2 * s.n)), a};
}

nlohmann::json bound_report(const DimProfile& p) {
  using nlohmann::json;
  const int n = p.n;
  json dims = json::array();
  for (int d = 0; d <= n; ++d) {
    const Rational w = p.w[d];
    json bounds;
    bounds["part1"] = {{"bits", d}, {"error", to_string((Rational(1) - w) / 2)}};
    bounds["part2"] = {{"bits_at_least", d + 1}, {"below_error", (1.0 - std::sqrt(to_double(w))) / 2.0}};
    if (d >= 1) {
      bounds["part3"] = {{"bits_at_least", d}, {"delta", to_string(p.gaps[d] / 4)}};
    } else {
      bounds["part3"] = nullptr;
    }
    json entry = {{"d", d}, {"w_d", to_string(w)}, {"gap", to_string(p.gaps[d])}, {"gap_undefined", bool(p.undefined[d])},
                  {"bounds", bounds}};
    // With theta = w_{d-1}: one-way error (1 - theta) / (4 (n - d)) needs >= d bits.
    if (d >= 1 && d < n) entry["prefix_gap_delta"] = to_string((Rational(1) - p.w[d - 1]) / (4 * (n - d)));
    dims.push_back(entry);
  }

  json cor;
  const Rational theta = p.w[0];
  cor["theta"] = to_string(theta);
  if (theta >= Rational(1, 3) || n == 0) {
    cor["case"] = "trivial";
    cor["sketch_bits_at_most"] = 0;
    cor["sketch_error"] = to_string((Rational(1) - theta) / 2);
  } else {
    const Rational third = (Rational(1) - theta) / 3;
    const int ds = p.best_gap_d;
    cor["sketch_error"] = to_string(third);
    if (p.gaps[ds] >= third) {
      cor["case"] = 1;
      cor["d"] = ds;
      cor["oneway_delta"] = to_string(p.gaps[ds] / 4);
      cor["oneway_delta_stated"] = to_string((Rational(1) - theta) / (12 * n));
      cor["sketch_bits_at_most"] = ds;
    } else {
      const Rational t1 = theta + third;
      const Rational t2 = theta + 2 * third;
      int d1 = -1;
      for (int d = 1; d <= n && d1 < 0; ++d)
        if (p.w[d] >= t1 && p.w[d] <= t2) d1 = d;
      int d2 = -1;
      for (int d = d1 + 1; d1 >= 0 && d <= n && d2 < 0; ++d)
        if (p.gaps[d] >= (Rational(1) - t2) / n) d2 = d;
      cor["case"] = 2;
      cor["d1"] = d1;
      cor["d"] = d2;
      cor["oneway_delta"] = to_string((Rational(1) - t2) / (4 * n));
      cor["sketch_bits_at_most"] = d2;
    }
  }
  return {{"n", n}, {"profile", dims}, {"best_gap", cor}, {"best_gap_d", p.best_gap_d}};
}

HammingIntersection hamming_intersection_check(const Subspace& a, int k, const Caps& caps) {
  const int n = a.n();
  const int d = a.dim();
  if (2 * d > n) throw ValidationError("hamming_intersection_check: needs dim(A) <= n/2");
  if (k < 1 || k > n - 1) throw ValidationError("hamming_intersection_check: needs 1 <= k <= n-1");
  if (d > caps.max_span_dim) throw CapExceeded("hamming_intersection_check: span too large");
  std::int64_t hits = 0;
  a.for_each_element([&](std::uint64_t v) { hits += std::popcount(v) == k; });
  std::int64_t binom = 1;
  for (int i = 1; i <= k; ++i) binom = binom * (n - k + i) / i;
  HammingIntersection out;
  out.ratio = Rational(hits, binom);
  out.bound = std::pow(std::exp(1.0) * d / n, std::min({k, n - k, d}));
  out.ok = to_double(out.ratio) <= out.bound;
  return out;
}

AffineCheck affine_structure_check(const BoolFun& f, int d, const Rational& delta, const SearchOptions& opt) {
  const int n = f.arity();
  if (d < 0 || d > n) throw ValidationError("affine_structure_check: need 0 <= d <= n");
  AffineCheck out;
  out.complete = n <= opt.caps.max_affine_arity;
  const int max_codim = n - d;
  const int min_codim = out.complete ? 0 : max_codim;
  if (!out.complete && max_codim > 3)
    throw CapExceeded("affine_structure_check: n above the affine cap needs codimension n - d <= 3");

  std::uint64_t best_minority = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t best_total = 1;
  std::vector<std::uint64_t> best_rows;
  std::uint64_t best_b = 0;
  for (int c = min_codim; c <= max_codim; ++c) {
    SubspaceStream stream(n, c, opt.caps);
    std::vector<std::uint64_t> rows;
    const std::uint64_t cosets = std::uint64_t{1} << c;
    const std::uint64_t total = std::uint64_t{1} << (n - c);
    std::vector<std::uint64_t> minus(cosets);
    while (stream.next(rows)) {
      std::fill(minus.begin(), minus.end(), 0);
      for (std::uint64_t x = 0; x < f.size(); ++x) {
        if (!f.bit(x)) continue;
        std::uint64_t syn = 0;
        for (int i = 0; i < c; ++i) syn |= static_cast<std::uint64_t>(parity(rows[i] & x)) << i;
        ++minus[syn];
      }
      for (std::uint64_t b = 0; b < cosets; ++b) {
        const std::uint64_t minority = std::min(minus[b], total - minus[b]);
        // Compare minority / total across codimensions exactly.
        if (static_cast<unsigned __int128>(minority) * best_total <
            static_cast<unsigned __int128>(best_minority) * total) {
          best_minority = minority;
          best_total = total;
          best_rows = rows;
          best_b = b;
        }
      }
      out.cosets += cosets;
    }
  }
  out.min_side = Rational(static_cast<std::int64_t>(best_minority), static_cast<std::int64_t>(best_total));
  out.disperser = best_minority > 0;
  out.extractor = out.min_side > delta;
  if (out.disperser || out.extractor) out.lower_bound = n - d + 1;
  const Gf2Matrix k(n, best_rows);
  out.worst_sub = null_space(k);
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    if (k.apply(x) == best_b) {
      out.worst_shift = BitVec(n, out.worst_sub.reduce(x));
      break;
    }
  }
  return out;
}

Rational optimal_sketch_error(const BoolFun& f, const Subspace& a) {
  const int n = f.arity();
  if (a.n() != n) throw ValidationError("optimal_sketch_error: dimension mismatch");
  const auto rows = a.basis_bits();
  const int d = a.dim();
  std::vector<std::uint64_t> minus(std::size_t{1} << d, 0), total(std::size_t{1} << d, 0);
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    std::uint64_t syn = 0;
    for (int i = 0; i < d; ++i) syn |= static_cast<std::uint64_t>(parity(rows[i] & x)) << i;
    ++total[syn];
    minus[syn] += f.bit(x);
  }
  std::uint64_t err = 0;
  for (std::size_t b = 0; b < total.size(); ++b) err += std::min(minus[b], total[b] - minus[b]);
  return dyadic(static_cast<std::int64_t>(err), n);
}

Rational exhaustive_sketch_error(const BoolFun& f, int d, const Caps& caps) {
  const int n = f.arity();
  SubspaceStream stream(n, d, caps);
  Subspace a;
  Rational best(1);
  while (stream.next(a)) best = std::min(best, optimal_sketch_error(f, a));
  return best;
}

}  // namespace f2lab
