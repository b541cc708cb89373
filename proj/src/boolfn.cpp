#include "f2lab/boolfn.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "f2lab/gf2.hpp"
#include "f2lab/ltf.hpp"
#include "f2lab/random.hpp"

namespace f2lab {

BoolFun::BoolFun(int n, std::vector<std::int8_t> table) : n_(n), table_(std::move(table)) {
  if (n < 0 || n > 62) throw ValidationError("arity out of range");
  if (table_.size() != (std::uint64_t{1} << n)) throw ValidationError("truth table length must be 2^n");
  for (auto v : table_)
    if (v != 1 && v != -1) throw ValidationError("truth table entries must be +1 or -1");
}

BoolFun BoolFun::from_predicate(int n, const std::function<bool(std::uint64_t)>& pred, const Caps& caps) {
  if (n < 0 || n > caps.max_arity)
    throw CapExceeded("arity " + std::to_string(n) + " exceeds cap " + std::to_string(caps.max_arity));
  std::vector<std::int8_t> t(std::uint64_t{1} << n);
  for (std::uint64_t x = 0; x < t.size(); ++x) t[x] = pred(x) ? -1 : 1;
  return BoolFun(n, std::move(t));
}

BoolFun BoolFun::constant(int n, int sign) {
  return BoolFun(n, std::vector<std::int8_t>(std::uint64_t{1} << n, sign < 0 ? -1 : 1));
}

BoolFun BoolFun::character(const BitVec& s) {
  return from_predicate(s.size(), [&](std::uint64_t x) { return parity(x & s.bits()) == 1; });
}

std::uint64_t BoolFun::count_minus() const {
  return static_cast<std::uint64_t>(std::count(table_.begin(), table_.end(), -1));
}

std::string BoolFun::to_text() const {
  std::string s = "n=" + std::to_string(n_) + "\n";
  s.reserve(s.size() + table_.size() + 1);
  for (auto v : table_) s += v < 0 ? '1' : '0';
  s += '\n';
  return s;
}

BoolFun BoolFun::parse(std::string_view text, const Caps& caps) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  int n = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("n=", 0) != 0) throw ParseError("expected header 'n=<int>'", line_no);
    try {
      std::size_t used = 0;
      n = std::stoi(line.substr(2), &used);
      if (used != line.size() - 2) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("expected header 'n=<int>'", line_no);
    }
    break;
  }
  if (n < 0) throw ParseError("missing truth-table header", line_no);
  if (n > caps.max_arity) throw CapExceeded("arity " + std::to_string(n) + " exceeds cap");
  const std::uint64_t len = std::uint64_t{1} << n;
  std::string bits;
  while (bits.empty() && std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bits = line;
  }
  if (bits.size() != len) throw ParseError("table must have exactly 2^n = " + std::to_string(len) + " characters", line_no);
  std::vector<std::int8_t> t(len);
  for (std::uint64_t x = 0; x < len; ++x) {
    if (bits[x] != '0' && bits[x] != '1') throw ParseError("table characters must be 0 or 1", line_no);
    t[x] = bits[x] == '1' ? -1 : 1;
  }
  return BoolFun(n, std::move(t));
}

BoolFun BoolFun::load(const std::string& path, const Caps& caps) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open truth-table file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), caps);
}

// ---- spectrum -----------------------------------------------------------------

Rational Spectrum::weight(std::uint64_t alpha) const {
  // c^2 / 4^n; c^2 <= 4^n <= 2^52 for n <= 26.
  return Rational(coeffs[alpha] * coeffs[alpha], std::int64_t{1} << (2 * n));
}

std::vector<std::uint64_t> Spectrum::support() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t a = 0; a < coeffs.size(); ++a)
    if (coeffs[a] != 0) out.push_back(a);
  return out;
}

void integer_wht(std::vector<std::int64_t>& v) {
  for (std::size_t h = 1; h < v.size(); h <<= 1) {
    for (std::size_t i = 0; i < v.size(); i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const auto a = v[j];
        const auto b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

Spectrum wht(const BoolFun& f, const Caps& caps) {
  if (f.arity() > caps.max_arity) throw CapExceeded("wht: arity exceeds cap");
  Spectrum s{f.arity(), std::vector<std::int64_t>(f.table().begin(), f.table().end())};
  integer_wht(s.coeffs);
  return s;
}

BoolFun inverse_wht(const Spectrum& s) {
  std::vector<std::int64_t> v = s.coeffs;
  integer_wht(v);
  std::vector<std::int8_t> t(v.size());
  const std::int64_t scale = std::int64_t{1} << s.n;
  for (std::size_t x = 0; x < v.size(); ++x) {
    if (v[x] != scale && v[x] != -scale) throw std::logic_error("inverse_wht: spectrum is not of a Boolean function");
    t[x] = v[x] > 0 ? 1 : -1;
  }
  return BoolFun(s.n, std::move(t));
}

BoolFun shift(const BoolFun& f, const BitVec& z) {
  if (z.size() != f.arity()) throw ValidationError("shift: arity mismatch");
  std::vector<std::int8_t> t(f.size());
  for (std::uint64_t x = 0; x < f.size(); ++x) t[x] = static_cast<std::int8_t>(f(x ^ z.bits()));
  return BoolFun(f.arity(), std::move(t));
}

RationalTable convolve(const BoolFun& f, const BoolFun& g) {
  if (f.arity() != g.arity()) throw ValidationError("convolve: arity mismatch");
  // sum_y f(y) g(x + y) has transform c_f(S) c_g(S); invert and keep the
  // numerator over 2^n.
  std::vector<std::int64_t> a(f.table().begin(), f.table().end());
  std::vector<std::int64_t> b(g.table().begin(), g.table().end());
  integer_wht(a);
  integer_wht(b);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  integer_wht(a);
  const int n = f.arity();
  for (auto& v : a) v >>= n;  // exact: the inverse transform carries a factor 2^n
  return {n, std::move(a)};
}

BoolFun compose(const BoolFun& f, const BoolFun& g, const Caps& caps) {
  const int n = f.arity();
  const int m = g.arity();
  if (n * m > caps.max_arity) throw CapExceeded("compose: arity n*m exceeds cap");
  const std::uint64_t block = low_mask(m);
  return BoolFun::from_predicate(
      n * m,
      [&](std::uint64_t x) {
        std::uint64_t y = 0;
        for (int i = 0; i < n; ++i)
          if (g.bit((x >> (i * m)) & block)) y |= std::uint64_t{1} << i;
        return f.bit(y);
      },
      caps);
}

CosetRestriction restrict_coset(const BoolFun& f, const std::vector<BitVec>& s, const std::vector<int>& b) {
  const int n = f.arity();
  const int d = static_cast<int>(s.size());
  if (static_cast<int>(b.size()) != d) throw ValidationError("restrict_coset: |S| != |b|");
  for (const auto& v : s)
    if (v.size() != n) throw ValidationError("restrict_coset: constraint dimension mismatch");
  // Augmented rows: bit n carries b_i.
  std::vector<std::uint64_t> rows(d);
  for (int i = 0; i < d; ++i) rows[i] = s[i].bits() | (static_cast<std::uint64_t>(b[i] & 1) << n);
  if (rank(Gf2Matrix(n, [&] {
        std::vector<std::uint64_t> r;
        for (const auto& v : s) r.push_back(v.bits());
        return r;
      }())) != d)
    throw ValidationError("restrict_coset: constraints are linearly dependent");
  auto [rref, r] = rref_rank(Gf2Matrix(n + 1, rows));
  std::uint64_t pivots = 0;
  std::vector<int> pivot_of(d);
  for (int i = 0; i < d; ++i) {
    pivot_of[i] = std::countr_zero(rref.row_bits(i));
    pivots |= std::uint64_t{1} << pivot_of[i];
  }
  std::vector<int> free_cols;
  for (int c = 0; c < n; ++c)
    if (!((pivots >> c) & 1)) free_cols.push_back(c);

  const std::uint64_t count = std::uint64_t{1} << free_cols.size();
  std::vector<std::int8_t> t(count);
  std::int64_t sum = 0;
  for (std::uint64_t u = 0; u < count; ++u) {
    std::uint64_t x = 0;
    for (std::size_t j = 0; j < free_cols.size(); ++j)
      if ((u >> j) & 1) x |= std::uint64_t{1} << free_cols[j];
    for (int i = 0; i < d; ++i) {
      const std::uint64_t row = rref.row_bits(i);
      const int v = static_cast<int>((row >> n) & 1) ^ parity(row & x & low_mask(n) & ~pivots);
      if (v) x |= std::uint64_t{1} << pivot_of[i];
    }
    t[u] = static_cast<std::int8_t>(f(x));
    sum += f(x);
  }

  const Spectrum spec = wht(f);
  std::int64_t formula = 0;
  for (std::uint64_t z = 0; z < (std::uint64_t{1} << d); ++z) {
    std::uint64_t alpha = 0;
    int sign = 0;
    for (int i = 0; i < d; ++i) {
      if ((z >> i) & 1) {
        alpha ^= s[i].bits();
        sign ^= b[i] & 1;
      }
    }
    formula += sign ? -spec[alpha] : spec[alpha];
  }
  CosetRestriction out{BoolFun(n - d, std::move(t)), dyadic(formula, n),
                       dyadic(sum, static_cast<int>(free_cols.size()))};
  if (out.constant_coeff != out.direct_average)
    throw std::logic_error("restrict_coset: spectral formula disagrees with direct average");
  return out;
}

// ---- builtins -------------------------------------------------------------------

namespace {

std::vector<std::string> split(std::string_view s, char sep, std::size_t max_parts) {
  std::vector<std::string> parts;
  while (parts.size() + 1 < max_parts) {
    auto pos = s.find(sep);
    if (pos == std::string_view::npos) break;
    parts.emplace_back(s.substr(0, pos));
    s.remove_prefix(pos + 1);
  }
  parts.emplace_back(s);
  return parts;
}

int to_int(const std::string& s, std::string_view name) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("bad integer '" + s + "' in function name '" + std::string(name) + "'");
  }
}

void check_arity(int n, const Caps& caps) {
  if (n < 0) throw ValidationError("arity must be nonnegative");
  if (n > caps.max_arity)
    throw CapExceeded("arity " + std::to_string(n) + " exceeds cap " + std::to_string(caps.max_arity));
}

BoolFun maj3k(int k, const Caps& caps) {
  if (k < 0) throw ValidationError("maj3k: k must be nonnegative");
  std::uint64_t arity = 1;
  for (int i = 0; i < k; ++i) arity *= 3;
  check_arity(static_cast<int>(std::min<std::uint64_t>(arity, 1000)), caps);
  BoolFun f = BoolFun::from_predicate(1, [](std::uint64_t x) { return x & 1; });
  const BoolFun maj3 = BoolFun::from_predicate(3, [](std::uint64_t x) { return std::popcount(x) >= 2; });
  for (int i = 0; i < k; ++i) f = compose(maj3, f, caps);
  return f;
}

}  // namespace

BoolFun builtin(std::string_view name, const Caps& caps) {
  auto head = split(name, ':', 2);
  const std::string& kind = head[0];
  if (head.size() == 2 && kind == "ltf") {
    const LtfSpec spec = load_ltf(head[1], caps);
    check_arity(spec.arity(), caps);
    return BoolFun::from_predicate(spec.arity(), [&](std::uint64_t x) { return spec.value(x); }, caps);
  }
  if (head.size() == 2 && kind == "tt") return BoolFun::load(head[1], caps);
  if (head.size() == 2 && kind == "chi") return BoolFun::character(BitVec::parse(head[1]));

  auto parts = split(name, ':', 16);
  auto arg = [&](std::size_t i) {
    if (i >= parts.size()) throw ValidationError("missing argument in function name '" + std::string(name) + "'");
    return to_int(parts[i], name);
  };
  auto expect_parts = [&](std::size_t count) {
    if (parts.size() != count) throw ValidationError("wrong number of arguments in function name '" + std::string(name) + "'");
  };
  if (kind == "parity" || kind == "and" || kind == "or" || kind == "maj" || kind == "const") {
    expect_parts(2);
    const int n = arg(1);
    check_arity(n, caps);
    if (kind == "parity") return BoolFun::from_predicate(n, [](std::uint64_t x) { return parity(x) == 1; }, caps);
    if (kind == "and") return BoolFun::from_predicate(n, [&](std::uint64_t x) { return x == low_mask(n); }, caps);
    if (kind == "or") return BoolFun::from_predicate(n, [](std::uint64_t x) { return x != 0; }, caps);
    if (kind == "const") return BoolFun::constant(n);
    if (n % 2 == 0) throw ValidationError("maj:n needs odd n");
    return BoolFun::from_predicate(n, [&](std::uint64_t x) { return 2 * std::popcount(x) > n; }, caps);
  }
  if (kind == "maj3k") {
    expect_parts(2);
    return maj3k(arg(1), caps);
  }
  if (kind == "addr") {
    expect_parts(2);
    const int n = arg(1);
    if (n < 1 || !std::has_single_bit(static_cast<unsigned>(n))) throw ValidationError("addr:n needs n a power of 2");
    const int a = std::countr_zero(static_cast<unsigned>(n));
    check_arity(a + n, caps);
    // Address bits x_1..x_a (LSB first), then y_1..y_n; value y_{addr+1}.
    return BoolFun::from_predicate(a + n, [&](std::uint64_t x) {
      const std::uint64_t addr = x & low_mask(a);
      return ((x >> (a + addr)) & 1) == 1;
    }, caps);
  }
  if (kind == "ip") {
    expect_parts(2);
    const int n = arg(1);
    if (n % 2 != 0) throw ValidationError("ip:n needs n even");
    check_arity(n, caps);
    return BoolFun::from_predicate(n, [](std::uint64_t x) { return parity(x & (x >> 1) & 0x5555555555555555ULL) == 1; }, caps);
  }
  if (kind == "hamge") {
    expect_parts(3);
    const int n = arg(1);
    const int k = arg(2);
    check_arity(n, caps);
    return BoolFun::from_predicate(n, [&](std::uint64_t x) { return std::popcount(x) >= k; }, caps);
  }
  if (kind == "random") {
    expect_parts(4);
    const int n = arg(1);
    check_arity(n, caps);
    const double bias = to_double(parse_rational(parts[2]));
    if (!(bias >= 0.0 && bias <= 1.0)) throw ValidationError("random: bias must lie in [0, 1]");
    std::uint64_t seed = 0;
    try {
      std::size_t used = 0;
      seed = std::stoull(parts[3], &used);
      if (used != parts[3].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError("random: bad seed '" + parts[3] + "'");
    }
    Rng rng(seed, "builtin-random", static_cast<std::uint64_t>(n));
    return BoolFun::from_predicate(n, [&](std::uint64_t) { return rng.bernoulli(bias); }, caps);
  }
  if (std::ifstream probe{std::string(name)}; probe) return BoolFun::load(std::string(name), caps);
  throw ValidationError("unknown function '" + std::string(name) + "'");
}

std::vector<std::string> builtin_examples() {
  return {"parity:5", "and:4", "or:4", "maj:5", "maj3k:1", "maj3k:2", "addr:4", "ip:8", "hamge:8:7",
          "chi:1010", "const:3", "random:10:1/2:7"};
}

// ---- profiles ---------------------------------------------------------------------

std::vector<Rational> symmetric_profile(const Spectrum& s) {
  std::vector<std::uint64_t> sums(s.n + 1, 0);
  for (std::uint64_t a = 0; a < s.coeffs.size(); ++a) sums[std::popcount(a)] += s.sq(a);
  std::vector<Rational> w;
  for (auto v : sums) w.emplace_back(static_cast<std::int64_t>(v), std::int64_t{1} << (2 * s.n));
  return w;
}

std::vector<Rational> symmetric_profile(const BoolFun& f) { return symmetric_profile(wht(f)); }

bool is_symmetric(const BoolFun& f) {
  std::vector<int> by_weight(f.arity() + 1, 0);
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    int& slot = by_weight[std::popcount(x)];
    if (slot == 0) slot = f(x);
    if (slot != f(x)) return false;
  }
  return true;
}

LinearDistance linear_distance(const Spectrum& s) {
  std::uint64_t best = 0;
  for (std::uint64_t a = 1; a < s.coeffs.size(); ++a)
    if (s[a] > s[best]) best = a;
  return {(Rational(1) - s.coefficient(best)) / 2, BitVec(s.n, best)};
}

LinearDistance linear_distance(const BoolFun& f) { return linear_distance(wht(f)); }

}  // namespace f2lab
