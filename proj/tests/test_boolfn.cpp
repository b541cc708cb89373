#include "doctest.h"

#include <cmath>
#include <functional>

#include "f2lab/boolfn.hpp"
#include "f2lab/fourierdim.hpp"
#include "f2lab/gf2.hpp"
#include "gen.hpp"

using namespace f2lab;

namespace {

// Direct O(4^n) transform, independent of the butterfly.
std::vector<std::int64_t> direct_spectrum(const BoolFun& f) {
  std::vector<std::int64_t> c(f.size(), 0);
  for (std::uint64_t a = 0; a < f.size(); ++a)
    for (std::uint64_t x = 0; x < f.size(); ++x) c[a] += parity(a & x) ? -f(x) : f(x);
  return c;
}

int maj3(int a, int b, int c) { return a + b + c > 0 ? 1 : -1; }

// Recursive ternary majority over +-1 inputs read from the truth-table index.
int recursive_maj(std::uint64_t x, int level, int offset) {
  if (level == 0) return ((x >> offset) & 1) ? -1 : 1;
  int width = 1;
  for (int i = 1; i < level; ++i) width *= 3;
  return maj3(recursive_maj(x, level - 1, offset), recursive_maj(x, level - 1, offset + width),
              recursive_maj(x, level - 1, offset + 2 * width));
}

std::uint64_t binom(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("wht examples") {
  const auto s = wht(builtin("maj:3"));
  for (std::uint64_t a = 0; a < 8; ++a) {
    const int w = std::popcount(a);
    const std::int64_t expect = w == 1 ? 4 : (w == 3 ? -4 : 0);
    CHECK(s[a] == expect);
  }
  const auto one = wht(BoolFun::constant(5));
  CHECK(one[0] == 32);
  for (std::uint64_t a = 1; a < 32; ++a) CHECK(one[a] == 0);
  const BitVec chi = BitVec::parse("10110");
  const auto cs = wht(BoolFun::character(chi));
  for (std::uint64_t a = 0; a < 32; ++a) CHECK(cs[a] == (a == chi.bits() ? 32 : 0));
}

TEST_CASE("wht agrees with the direct transform") {
  for (std::uint64_t c = 0; c < 60; ++c) {
    auto rng = gen::rng_for("wht-direct", c);
    const auto f = gen::skewed_boolfun(static_cast<int>(rng.below(8)), rng);
    CHECK(wht(f).coeffs == direct_spectrum(f));
  }
}

TEST_CASE("Parseval holds exactly for builtins and random functions") {
  auto check = [](const BoolFun& f) {
    const auto s = wht(f);
    std::uint64_t total = 0;
    for (std::uint64_t a = 0; a < s.coeffs.size(); ++a) {
      total += s.sq(a);
      CHECK((s[a] - (std::int64_t{1} << f.arity())) % 2 == 0);
    }
    CHECK(total == (std::uint64_t{1} << (2 * f.arity())));
  };
  for (const auto& name : builtin_examples()) check(builtin(name));
  for (std::uint64_t c = 0; c < 40; ++c) {
    auto rng = gen::rng_for("parseval", c);
    check(gen::skewed_boolfun(static_cast<int>(rng.below(13)), rng));
  }
}

TEST_CASE("inverse_wht round trip") {
  for (std::uint64_t c = 0; c < 60; ++c) {
    auto rng = gen::rng_for("inverse", c);
    const auto f = gen::skewed_boolfun(static_cast<int>(rng.below(11)), rng);
    CHECK(inverse_wht(wht(f)) == f);
  }
  Spectrum bad{1, {1, 1}};
  CHECK_THROWS(inverse_wht(bad));
}

TEST_CASE("shift examples") {
  const auto maj = builtin("maj:3");
  CHECK(shift(maj, BitVec::zero(3)) == maj);

  const BitVec s = BitVec::parse("1101");
  const BitVec z = BitVec::parse("1001");
  const auto chi = BoolFun::character(s);
  const int sign = parity(s.bits() & z.bits()) ? -1 : 1;
  for (std::uint64_t x = 0; x < 16; ++x) CHECK(shift(chi, z)(x) == sign * chi(x));

  const auto shifted = shift(maj, BitVec::parse("100"));
  for (std::uint64_t x = 0; x < 8; ++x) CHECK(shifted(x) == maj(x ^ 1));
  const auto a = wht(maj);
  const auto b = wht(shifted);
  for (std::uint64_t g = 0; g < 8; ++g) CHECK(b[g] == ((g & 1) ? -a[g] : a[g]));
}

TEST_CASE("shift law on random functions") {
  for (std::uint64_t c = 0; c < 100; ++c) {
    auto rng = gen::rng_for("shift", c);
    const int n = static_cast<int>(rng.below(9));
    const auto f = gen::boolfun(n, rng);
    const BitVec z(n, rng.bits(n));
    const auto a = wht(f);
    const auto b = wht(shift(f, z));
    for (std::uint64_t g = 0; g < f.size(); ++g) CHECK(b[g] == (parity(g & z.bits()) ? -a[g] : a[g]));
  }
}

TEST_CASE("convolve examples") {
  const auto s = BoolFun::character(BitVec::parse("1010"));
  const auto t = BoolFun::character(BitVec::parse("0110"));
  const auto ss = convolve(s, s);
  const auto st = convolve(s, t);
  for (std::uint64_t x = 0; x < 16; ++x) {
    CHECK(ss.at(x) == Rational(s(x)));
    CHECK(st.at(x) == Rational(0));
  }

  // Direct double sum at n = 3, then the spectrum of the result.
  const auto maj = builtin("maj:3");
  const auto h = convolve(maj, maj);
  for (std::uint64_t x = 0; x < 8; ++x) {
    std::int64_t sum = 0;
    for (std::uint64_t y = 0; y < 8; ++y) sum += maj(y) * maj(x ^ y);
    CHECK(h.at(x) == Rational(sum, 8));
  }
  for (std::uint64_t a = 0; a < 8; ++a) {
    Rational coeff(0);
    for (std::uint64_t x = 0; x < 8; ++x) coeff += (parity(a & x) ? -h.at(x) : h.at(x)) / 8;
    const int w = std::popcount(a);
    CHECK(coeff == ((w == 1 || w == 3) ? Rational(1, 4) : Rational(0)));
  }
}

TEST_CASE("convolution law against the product of spectra") {
  for (std::uint64_t c = 0; c < 60; ++c) {
    auto rng = gen::rng_for("convolve", c);
    const int n = static_cast<int>(rng.below(9));
    const auto f = gen::skewed_boolfun(n, rng);
    const auto g = gen::skewed_boolfun(n, rng);
    auto h = convolve(f, g).numerators;
    integer_wht(h);
    const auto a = wht(f);
    const auto b = wht(g);
    // sum_x 2^n h(x) chi_S(x) = 4^n h^(S) = c_f(S) c_g(S).
    for (std::uint64_t s = 0; s < f.size(); ++s) CHECK(h[s] == a[s] * b[s]);
  }
}

TEST_CASE("compose examples") {
  CHECK(compose(builtin("parity:2"), builtin("parity:2")) == builtin("parity:4"));
  const auto r = compose(builtin("maj:3"), builtin("maj:3"));
  CHECK(r == builtin("maj3k:2"));
  for (std::uint64_t x = 0; x < r.size(); ++x) CHECK(r(x) == recursive_maj(x, 2, 0));
  auto rng = gen::rng_for("compose-identity", 0);
  const auto f = gen::boolfun(5, rng);
  const auto id = BoolFun::character(BitVec::parse("1"));
  CHECK(compose(f, id) == f);
  CHECK(builtin("maj3k:1") == builtin("maj:3"));
}

TEST_CASE("composition spectrum equals the deduplicated super-slam rows") {
  for (std::uint64_t c = 0; c < 60; ++c) {
    auto rng = gen::rng_for("compose-slam", c);
    const int n = 1 + static_cast<int>(rng.below(4));
    const int m = 1 + static_cast<int>(rng.below(std::min(4, 12 / n)));
    const auto f = gen::boolfun(n, rng);
    const auto g = gen::balanced(m, rng);
    const auto sf = wht(f).support();
    const auto sg = wht(g).support();
    const auto slam = super_slam(Gf2Matrix(n, sf), Gf2Matrix(m, sg));
    std::vector<std::uint64_t> rows = slam.rows();
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    CHECK(wht(compose(f, g)).support() == rows);
  }
}

TEST_CASE("restrict_coset examples") {
  const auto maj = builtin("maj:3");
  const auto none = restrict_coset(maj, {}, {});
  CHECK(none.restricted == maj);
  CHECK(none.constant_coeff == Rational(0));

  const auto r = restrict_coset(maj, {BitVec::parse("100")}, {0});
  CHECK(r.constant_coeff == Rational(1, 2));
  CHECK(r.direct_average == Rational(1, 2));
  CHECK(r.restricted.arity() == 2);

  const BitVec t = BitVec::parse("0111");
  const auto c = restrict_coset(BoolFun::character(t), {t}, {0});
  CHECK(c.constant_coeff == Rational(1));

  CHECK_THROWS_AS(restrict_coset(maj, {BitVec::parse("110"), BitVec::parse("110")}, {0, 1}), ValidationError);
}

TEST_CASE("restrict_coset formula agrees with direct averaging") {
  for (std::uint64_t c = 0; c < 100; ++c) {
    auto rng = gen::rng_for("restrict", c);
    const int n = 1 + static_cast<int>(rng.below(8));
    const auto f = gen::skewed_boolfun(n, rng);
    const auto sub = gen::subspace(n, static_cast<int>(rng.below(n + 1)), rng);
    std::vector<BitVec> s;
    std::vector<int> b;
    for (std::uint64_t v : sub.basis_bits()) {
      s.emplace_back(n, v);
      b.push_back(static_cast<int>(rng.below(2)));
    }
    const auto r = restrict_coset(f, s, b);
    CHECK(r.constant_coeff == r.direct_average);
    // Independent average over the coset.
    std::int64_t sum = 0, count = 0;
    for (std::uint64_t x = 0; x < f.size(); ++x) {
      bool in = true;
      for (std::size_t i = 0; i < s.size(); ++i) in = in && parity(s[i].bits() & x) == b[i];
      if (in) {
        sum += f(x);
        ++count;
      }
    }
    CHECK(r.direct_average == Rational(sum, count));
    CHECK(static_cast<std::int64_t>(r.restricted.size()) == count);
  }
}

TEST_CASE("builtin examples") {
  const auto addr = builtin("addr:4");
  CHECK(addr.arity() == 6);
  // Address "10" is 1 read LSB-first, selecting y_2; y = 0100 has y_2 = 1.
  CHECK(addr(BitVec::parse("100100").bits()) == -1);
  CHECK(addr(BitVec::parse("101011").bits()) == 1);
  CHECK(builtin("ip:4")(BitVec::parse("1111").bits()) == 1);
  CHECK(builtin("ip:4")(BitVec::parse("1101").bits()) == -1);
  CHECK(builtin("hamge:5:2")(BitVec::parse("01001").bits()) == -1);
  CHECK(builtin("hamge:5:2")(BitVec::parse("01000").bits()) == 1);
  CHECK(builtin("and:3")(7) == -1);
  CHECK(builtin("or:3")(0) == 1);
  CHECK(builtin("random:6:1/2:3") == builtin("random:6:1/2:3"));
  CHECK_THROWS_AS(builtin("addr:3"), ValidationError);
  CHECK_THROWS_AS(builtin("ip:5"), ValidationError);
  CHECK_THROWS_AS(builtin("nonsense:2"), ValidationError);
  CHECK_THROWS_AS(builtin("parity:27"), CapExceeded);
}

TEST_CASE("addr agrees with a direct evaluator") {
  const int n = 8, a = 3;
  const auto f = builtin("addr:8");
  REQUIRE(f.arity() == n + a);
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    const std::uint64_t address = x & 7;
    const bool bit = (x >> (a + address)) & 1;
    CHECK(f(x) == (bit ? -1 : 1));
  }
}

TEST_CASE("truth-table text round trip and parse errors") {
  auto rng = gen::rng_for("tt-text", 0);
  const auto f = gen::boolfun(4, rng);
  CHECK(BoolFun::parse(f.to_text()) == f);
  CHECK(BoolFun::parse("n=2\n0110\n") == builtin("parity:2"));
  CHECK_THROWS_AS(BoolFun::parse("n=2\n011\n"), ParseError);
  CHECK_THROWS_AS(BoolFun::parse("m=2\n0110\n"), ParseError);
}

TEST_CASE("symmetric_profile examples") {
  const auto p = symmetric_profile(builtin("parity:6"));
  for (int k = 0; k < 6; ++k) CHECK(p[k] == Rational(0));
  CHECK(p[6] == Rational(1));
  const auto m = symmetric_profile(builtin("maj:3"));
  CHECK(m == std::vector<Rational>{0, Rational(3, 4), 0, Rational(1, 4)});
  CHECK(is_symmetric(builtin("maj:5")));
  CHECK_FALSE(is_symmetric(builtin("addr:4")));
}

// The asymptotic form describes k much smaller than sqrt(n); at n = 11 only
// k = 1 and k = 3 are in that range.
TEST_CASE("Maj_11 level weights against a direct oracle and the asymptotic form") {
  const int n = 11;
  const auto f = builtin("maj:11");
  const auto w = symmetric_profile(f);
  Rational total(0);
  for (const auto& v : w) total += v;
  CHECK(total == Rational(1));
  const double xi = std::pow(2.0 / M_PI, 1.5);
  for (int k = 1; k <= n; k += 2) {
    // One coefficient by direct summation, times the number of sets of size k.
    std::int64_t c = 0;
    for (std::uint64_t x = 0; x < f.size(); ++x) c += parity(x & low_mask(k)) ? -f(x) : f(x);
    const Rational expect = Rational(c * c, 1) / Rational(std::int64_t{1} << (2 * n)) * Rational(binom(n, k));
    CHECK(w[k] == expect);
    const double ratio = to_double(w[k]) / (xi * std::pow(k, -1.5));
    if (k * k <= n) CHECK(std::abs(ratio - 1) <= 1.0 / k);
  }
  for (int k = 0; k <= n; k += 2) CHECK(w[k] == Rational(0));
}

TEST_CASE("linear_distance examples") {
  const BitVec s = BitVec::parse("0110");
  const auto d = linear_distance(BoolFun::character(s));
  CHECK(d.epsilon == Rational(0));
  CHECK(d.best == s);
  CHECK(linear_distance(builtin("maj:3")).epsilon == Rational(1, 4));
  CHECK(linear_distance(builtin("maj:3")).best == BitVec::parse("100"));

  auto table = BoolFun::character(BitVec::parse("1000")).table();
  table[5] = static_cast<std::int8_t>(-table[5]);
  const auto e = linear_distance(BoolFun(4, table));
  CHECK(e.epsilon == Rational(1, 16));
  CHECK(e.best == BitVec::parse("1000"));
}

// Holds for Z1 in the spectrum. An odd Z1 with zero coefficient can sit
// inside an odd Z2 with nonzero coefficient, e.g. {1,2,4} in {1,2,3,4,7}.
TEST_CASE("recursive majority coefficients shrink along odd inclusions") {
  const auto s = wht(builtin("maj3k:2"));
  CHECK(s[0b000001011] == 0);
  CHECK(s[0b001001111] != 0);
  for (std::uint64_t z2 = 0; z2 < 512; ++z2) {
    if (std::popcount(z2) % 2 == 0) continue;
    for (std::uint64_t z1 = z2;; z1 = (z1 - 1) & z2) {
      if (std::popcount(z1) % 2 == 1 && s[z1] != 0) CHECK(std::abs(s[z1]) >= std::abs(s[z2]));
      if (z1 == 0) break;
    }
  }
}
