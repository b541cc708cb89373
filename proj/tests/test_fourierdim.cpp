#include "doctest.h"

#include <cmath>
#include <set>

#include "f2lab/boolfn.hpp"
#include "f2lab/fourierdim.hpp"
#include "f2lab/gf2.hpp"
#include "gen.hpp"

using namespace f2lab;

namespace {

Rational w_of(const BoolFun& f, int d, bool full = false) {
  SearchOptions opt;
  opt.full_space = full;
  return max_subspace_weight(wht(f), d, opt).weight;
}

// e >= (1 - sqrt(w)) / 2, decided without floating point.
bool above_sqrt_floor(const Rational& e, const Rational& w) {
  const Rational t = Rational(1) - 2 * e;
  return t <= 0 || t * t <= w;
}

// Brute force over every decoder table for the sketch x -> (a_i . x).
Rational brute_sketch_error(const BoolFun& f, const Subspace& a) {
  const auto basis = a.basis_bits();
  const int d = a.dim();
  std::uint64_t best = f.size();
  for (std::uint64_t dec = 0; dec < (std::uint64_t{1} << (std::uint64_t{1} << d)); ++dec) {
    std::uint64_t wrong = 0;
    for (std::uint64_t x = 0; x < f.size(); ++x) {
      std::uint64_t s = 0;
      for (int i = 0; i < d; ++i) s |= static_cast<std::uint64_t>(parity(basis[i] & x)) << i;
      const int out = ((dec >> s) & 1) ? -1 : 1;
      wrong += out != f(x);
    }
    best = std::min(best, wrong);
  }
  return Rational(static_cast<std::int64_t>(best), static_cast<std::int64_t>(f.size()));
}

}  // namespace

TEST_CASE("exact_dim examples") {
  CHECK(exact_dim(BoolFun::character(BitVec::parse("0101"))).d == 1);
  const auto m = exact_dim(builtin("maj:3"));
  CHECK(m.d == 3);
  CHECK(m.basis == Subspace::full(3));
  CHECK(exact_dim(builtin("addr:4")).d == 6);
  CHECK(exact_dim(BoolFun::constant(4)).d == 0);
}

TEST_CASE("exact_dim basis spans the spectrum") {
  for (std::uint64_t c = 0; c < 50; ++c) {
    auto rng = gen::rng_for("exact-dim", c);
    const int n = static_cast<int>(rng.below(9));
    const auto f = gen::skewed_boolfun(n, rng);
    const auto s = wht(f);
    const auto supp = s.support();
    const auto e = exact_dim(s);
    CHECK(e.basis == Subspace::span_of(n, supp));
    CHECK(e.d == rank(Gf2Matrix(n, supp)));
  }
}

TEST_CASE("max_subspace_weight examples") {
  const auto maj = builtin("maj:3");
  CHECK(w_of(maj, 0) == Rational(0));
  CHECK(w_of(maj, 1) == Rational(1, 4));
  CHECK(w_of(maj, 2) == Rational(1, 2));
  CHECK(w_of(maj, 3) == Rational(1));
  for (int n = 1; n <= 6; ++n) {
    auto rng = gen::rng_for("w-full", n);
    CHECK(w_of(gen::boolfun(n, rng), n) == Rational(1));
  }
  const auto rec = builtin("maj3k:2");
  const auto p = dim_profile(wht(rec));
  for (int d = 0; d <= 9; ++d) CHECK(p.w[d] <= Rational(4 * d, 9));
  CHECK_THROWS_AS(max_subspace_weight(wht(maj), 4), ValidationError);
}

TEST_CASE("witness weight equals the reported maximum") {
  for (std::uint64_t c = 0; c < 30; ++c) {
    auto rng = gen::rng_for("witness", c);
    const int n = 1 + static_cast<int>(rng.below(7));
    const auto s = wht(gen::skewed_boolfun(n, rng));
    const int d = static_cast<int>(rng.below(n + 1));
    const auto r = max_subspace_weight(s, d);
    CHECK(r.witness.dim() <= d);
    CHECK(subspace_weight(s, r.witness) == r.weight);
  }
}

TEST_CASE("spectral-span search equals full enumeration for n <= 6") {
  for (std::uint64_t c = 0; c < 40; ++c) {
    auto rng = gen::rng_for("span-vs-full", c);
    const int n = 1 + static_cast<int>(rng.below(6));
    const auto f = (c % 2) ? gen::boolfun(n, rng) : gen::skewed_boolfun(n, rng);
    const auto s = wht(f);
    SearchOptions full;
    full.full_space = true;
    const auto a = dim_profile(s);
    const auto b = dim_profile(s, full);
    CHECK(a.w == b.w);
  }
  for (const char* name : {"maj:5", "addr:4", "and:4", "parity:5", "const:3"}) {
    const auto f = builtin(name);
    for (int d = 0; d <= f.arity(); ++d) CHECK(w_of(f, d) == w_of(f, d, true));
  }
}

TEST_CASE("partitioned search agrees with a single worker") {
  auto rng = gen::rng_for("workers", 0);
  const auto s = wht(gen::boolfun(7, rng));
  SearchOptions three;
  three.workers = 3;
  for (int d = 0; d <= 7; ++d) {
    const auto a = max_subspace_weight(s, d);
    const auto b = max_subspace_weight(s, d, three);
    CHECK(a.weight == b.weight);
    CHECK(a.witness == b.witness);
  }
}

TEST_CASE("dim_profile examples and monotonicity") {
  const auto parity = dim_profile(wht(builtin("parity:5")));
  CHECK(parity.w[0] == Rational(0));
  for (int d = 1; d <= 5; ++d) CHECK(parity.w[d] == Rational(1));
  CHECK(parity.gaps[1] == Rational(1));

  const auto addr = dim_profile(wht(builtin("addr:4")));
  for (int d = 0; d <= 6; ++d) CHECK(addr.w[d] <= Rational(d, 4));

  const auto maj = dim_profile(wht(builtin("maj:3")));
  CHECK(maj.gaps[1] == Rational(1, 4));
  CHECK(maj.gaps[2] == Rational(1, 4));
  CHECK(maj.gaps[3] == Rational(1, 2));
  CHECK(maj.best_gap_d == 3);

  for (std::uint64_t c = 0; c < 30; ++c) {
    auto rng = gen::rng_for("profile-monotone", c);
    const int n = static_cast<int>(rng.below(8));
    const auto f = gen::skewed_boolfun(n, rng);
    const auto s = wht(f);
    const auto p = dim_profile(s);
    CHECK(p.w[0] == s.weight(0));
    CHECK(p.w[n] == Rational(1));
    for (int d = 1; d <= n; ++d) {
      CHECK(p.w[d - 1] <= p.w[d]);
      CHECK(p.gaps[d] == p.w[d] - p.w[d - 1]);
      CHECK(p.undefined[d] == (p.gaps[d] == Rational(0)));
    }
  }
}

TEST_CASE("greedy_subspace is a lower bound") {
  const auto maj = wht(builtin("maj:3"));
  CHECK(greedy_subspace(maj, 0).weight == Rational(0));
  CHECK(greedy_subspace(maj, 3).weight == Rational(1));
  const auto rec = wht(builtin("maj3k:2"));
  CHECK(greedy_subspace(rec, 2).weight <= max_subspace_weight(rec, 2).weight);
  for (std::uint64_t c = 0; c < 40; ++c) {
    auto rng = gen::rng_for("greedy", c);
    const int n = 1 + static_cast<int>(rng.below(7));
    const auto s = wht(gen::skewed_boolfun(n, rng));
    const int d = static_cast<int>(rng.below(n + 1));
    const auto g = greedy_subspace(s, d);
    CHECK(g.weight <= max_subspace_weight(s, d).weight);
    CHECK(subspace_weight(s, g.witness) == g.weight);
    CHECK(g.witness.dim() <= d);
  }
}

TEST_CASE("bound_report values") {
  const auto parity = bound_report(dim_profile(wht(builtin("parity:4"))));
  CHECK(parity["profile"][1]["bounds"]["part1"]["bits"] == 1);
  CHECK(parity["profile"][1]["bounds"]["part1"]["error"] == "0");

  const auto maj = bound_report(dim_profile(wht(builtin("maj:3"))));
  CHECK(maj["profile"][2]["bounds"]["part1"]["bits"] == 2);
  CHECK(maj["profile"][2]["bounds"]["part1"]["error"] == "1/4");
  CHECK(maj["profile"][2]["bounds"]["part2"]["bits_at_least"] == 3);
  CHECK(maj["profile"][2]["bounds"]["part2"]["below_error"].get<double>() ==
        doctest::Approx((1 - std::sqrt(0.5)) / 2));

  // Part 3: a gap Delta_d gives delta = Delta_d / 4 with at least d bits.
  const auto p = dim_profile(wht(builtin("maj3k:2")));
  const auto rec = bound_report(p);
  for (int d = 1; d <= 9; ++d) {
    const auto& part3 = rec["profile"][d]["bounds"]["part3"];
    if (p.gaps[d] == Rational(0)) continue;
    CHECK(part3["bits_at_least"] == d);
    CHECK(parse_rational(part3["delta"].get<std::string>()) == p.gaps[d] / 4);
  }
}

TEST_CASE("hamming_intersection_check examples") {
  const auto std3 = Subspace::standard(10, 0b111);
  const auto r = hamming_intersection_check(std3, 1);
  CHECK(r.ratio == Rational(3, 10));
  CHECK(r.ok);

  auto rng = gen::rng_for("hamming", 0);
  CHECK(hamming_intersection_check(gen::subspace(10, 3, rng), 2).ok);

  for (std::uint64_t v = 1; v < 256; ++v) {
    const auto line = Subspace::span_of(8, std::vector<std::uint64_t>{v});
    const auto h = hamming_intersection_check(line, 7);
    CHECK(to_double(h.ratio) <= std::exp(1.0) / 8);
    CHECK(h.ok);
  }
  CHECK_THROWS_AS(hamming_intersection_check(Subspace::standard(4, 0b111), 1), ValidationError);
}

TEST_CASE("hamming_intersection_check holds for random subspaces") {
  for (std::uint64_t c = 0; c < 60; ++c) {
    auto rng = gen::rng_for("hamming-random", c);
    const int n = 2 + static_cast<int>(rng.below(11));
    const int d = static_cast<int>(rng.below(n / 2 + 1));
    const int k = 1 + static_cast<int>(rng.below(n - 1));
    const auto a = gen::subspace(n, d, rng);
    const auto h = hamming_intersection_check(a, k);
    // Independent count of weight-k members.
    std::uint64_t hits = 0;
    a.for_each_element([&](std::uint64_t v) { hits += std::popcount(v) == k; });
    std::uint64_t total = 1;
    for (int i = 1; i <= k; ++i) total = total * (n - k + i) / i;
    CHECK(h.ratio == Rational(static_cast<std::int64_t>(hits), static_cast<std::int64_t>(total)));
    CHECK(h.ok);
  }
}

TEST_CASE("affine_structure_check examples") {
  for (int d = 0; d <= 4; ++d) CHECK_FALSE(affine_structure_check(BoolFun::constant(4), d, Rational(1, 4)).disperser);

  const auto ip = affine_structure_check(builtin("ip:8"), 6, Rational(1, 4));
  CHECK(ip.complete);
  CHECK(ip.extractor);
  CHECK(ip.disperser);
  CHECK(ip.min_side == Rational(3, 8));
  CHECK(ip.lower_bound == 3);

  const auto par = builtin("parity:5");
  const auto p4 = affine_structure_check(par, 4, Rational(0));
  CHECK_FALSE(p4.disperser);
  CHECK(p4.min_side == Rational(0));
  CHECK(p4.worst_sub.dim() >= 4);
  // The witness coset is monochromatic.
  std::set<int> values;
  p4.worst_sub.for_each_element([&](std::uint64_t v) { values.insert(par(v ^ p4.worst_shift.bits())); });
  CHECK(values.size() == 1);
  CHECK(affine_structure_check(par, 5, Rational(0)).disperser);
}

TEST_CASE("affine_structure_check agrees with brute force at n = 4") {
  for (std::uint64_t c = 0; c < 20; ++c) {
    auto rng = gen::rng_for("affine-brute", c);
    const auto f = gen::skewed_boolfun(4, rng);
    const int d = 1 + static_cast<int>(rng.below(4));
    const auto got = affine_structure_check(f, d, Rational(1, 8));
    Rational worst(1);
    for (int dd = d; dd <= 4; ++dd)
      for (const auto& sub : enumerate_subspaces(4, dd))
        for (std::uint64_t shift = 0; shift < 16; ++shift) {
          std::int64_t minus = 0;
          sub.for_each_element([&](std::uint64_t v) { minus += f(v ^ shift) < 0; });
          const std::int64_t size = std::int64_t{1} << dd;
          worst = std::min(worst, Rational(std::min(minus, size - minus), size));
        }
    CHECK(got.min_side == worst);
    CHECK(got.disperser == (worst > 0));
    CHECK(got.extractor == (worst > Rational(1, 8)));
  }
}

TEST_CASE("composition dimension law") {
  for (std::uint64_t c = 0; c < 60; ++c) {
    auto rng = gen::rng_for("compose-dim", c);
    const int n = 1 + static_cast<int>(rng.below(4));
    const int m = 1 + static_cast<int>(rng.below(std::min(4, 12 / n)));
    const auto f = gen::boolfun(n, rng);
    const auto g = gen::balanced(m, rng);
    CHECK(exact_dim(compose(f, g)).d >= exact_dim(f).d * exact_dim(g).d);
  }
}

TEST_CASE("convolution dimension law") {
  for (std::uint64_t c = 0; c < 60; ++c) {
    auto rng = gen::rng_for("convolve-dim", c);
    const int n = static_cast<int>(rng.below(9));
    const auto f = gen::skewed_boolfun(n, rng);
    const auto g = gen::skewed_boolfun(n, rng);
    auto h = convolve(f, g).numerators;
    integer_wht(h);
    std::vector<std::uint64_t> supp;
    for (std::uint64_t a = 0; a < h.size(); ++a)
      if (h[a] != 0) supp.push_back(a);
    CHECK(rank(Gf2Matrix(n, supp)) <= std::min(exact_dim(f).d, exact_dim(g).d));
  }
}

TEST_CASE("optimal_sketch_error matches a brute-force decoder search") {
  for (std::uint64_t c = 0; c < 40; ++c) {
    auto rng = gen::rng_for("sketch-brute", c);
    const int n = 1 + static_cast<int>(rng.below(5));
    const auto f = gen::skewed_boolfun(n, rng);
    const auto a = gen::subspace(n, static_cast<int>(rng.below(std::min(n, 3) + 1)), rng);
    CHECK(optimal_sketch_error(f, a) == brute_sketch_error(f, a));
  }
}

TEST_CASE("no d-dimensional sketch beats (1 - sqrt(w_d)) / 2 for n <= 4") {
  std::vector<BoolFun> fs;
  for (const char* name : {"maj:3", "and:4", "or:3", "parity:4", "addr:2", "ip:4", "hamge:4:2"}) fs.push_back(builtin(name));
  for (std::uint64_t c = 0; c < 30; ++c) {
    auto rng = gen::rng_for("part2", c);
    fs.push_back(gen::skewed_boolfun(2 + static_cast<int>(rng.below(3)), rng));
  }
  for (const auto& f : fs) {
    const auto p = dim_profile(wht(f));
    for (int d = 0; d <= f.arity(); ++d) {
      const auto best = exhaustive_sketch_error(f, d);
      CHECK(above_sqrt_floor(best, p.w[d]));
      for (const auto& a : enumerate_subspaces(f.arity(), d)) CHECK(above_sqrt_floor(optimal_sketch_error(f, a), p.w[d]));
      // Part 1 side: the best d-dimensional sketch reaches (1 - w_d) / 2.
      CHECK(best <= (Rational(1) - p.w[d]) / 2);
    }
  }
}
