#include "f2lab/ltf.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace f2lab {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw ValidationError("LTF weights need too fine a common denominator");
  return out;
}

std::int64_t abs64(std::int64_t v) { return v < 0 ? -v : v; }

}  // namespace

void LtfSpec::rescale() {
  std::int64_t l = theta.denominator();
  for (const auto& w : weights) l = checked_mul(l / std::gcd(l, w.denominator()), w.denominator());
  scale = l;
  scaled_theta = checked_mul(theta.numerator(), l / theta.denominator());
  scaled_weights.clear();
  std::int64_t total = 0;
  for (const auto& w : weights) {
    scaled_weights.push_back(checked_mul(w.numerator(), l / w.denominator()));
    if (__builtin_add_overflow(total, scaled_weights.back(), &total)) throw ValidationError("LTF weight sum overflows");
  }
}

bool LtfSpec::value(std::uint64_t x) const {
  std::int64_t sum = 0;
  while (x) {
    sum += scaled_weights[std::countr_zero(x)];
    x &= x - 1;
  }
  return sum >= scaled_theta;
}

std::vector<std::uint64_t> LtfSpec::below_threshold(std::uint64_t limit) const {
  const int n = arity();
  if (n > 64) throw ValidationError("below_threshold: arity above 64");
  std::vector<std::uint64_t> out;
  // Depth-first over supports in increasing coordinate order; weights are
  // nonnegative so a prefix at or above theta has no extension below it.
  struct Frame {
    std::uint64_t x;
    std::int64_t sum;
    int next;
  };
  if (0 >= scaled_theta) return out;
  std::vector<Frame> stack{{0, 0, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    out.push_back(f.x);
    if (out.size() > limit) throw CapExceeded("below-threshold set exceeds " + std::to_string(limit) + " points");
    for (int j = f.next; j < n; ++j) {
      const std::int64_t s = f.sum + scaled_weights[j];
      if (s < scaled_theta) stack.push_back({f.x | (std::uint64_t{1} << j), s, j + 1});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Rational ltf_margin(const std::vector<Rational>& weights, const Rational& theta, const Caps& caps) {
  LtfSpec tmp{weights, theta, Rational(0), {}, 0, 1};
  tmp.rescale();
  const int n = tmp.arity();
  std::int64_t total = 0;
  for (auto w : tmp.scaled_weights) total += w;
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  if (total <= (std::int64_t{1} << 26)) {
    std::vector<char> reach(static_cast<std::size_t>(total) + 1, 0);
    reach[0] = 1;
    for (auto w : tmp.scaled_weights)
      for (std::int64_t s = total - w; s >= 0; --s)
        if (reach[s]) reach[s + w] = 1;
    for (std::int64_t s = 0; s <= total; ++s)
      if (reach[s]) best = std::min(best, abs64(s - tmp.scaled_theta));
  } else if (n <= caps.max_arity) {
    std::int64_t sum = 0;
    best = abs64(tmp.scaled_theta);
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << n); ++i) {
      const int j = std::countr_zero(i);
      // Gray code: coordinate j flips.
      if (((i ^ (i >> 1)) >> j) & 1) sum += tmp.scaled_weights[j];
      else sum -= tmp.scaled_weights[j];
      best = std::min(best, abs64(sum - tmp.scaled_theta));
    }
  } else {
    throw CapExceeded("margin: too many variables for an exact scan; supply the margin");
  }
  return Rational(best, tmp.scale);
}

LtfSpec make_ltf(std::vector<Rational> weights, Rational theta, const Caps& caps) {
  if (weights.empty()) throw ValidationError("LTF needs at least one weight");
  Rational total(0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0) throw ValidationError("LTF weights must be nonnegative");
    if (i > 0 && weights[i] > weights[i - 1]) throw ValidationError("LTF weights must be nonincreasing");
    total += weights[i];
  }
  if (total == 0) throw ValidationError("LTF weights sum to zero");
  for (auto& w : weights) w /= total;
  theta /= total;
  LtfSpec spec{std::move(weights), theta, Rational(0), {}, 0, 1};
  spec.rescale();
  spec.margin = ltf_margin(spec.weights, spec.theta, caps);
  if (spec.margin <= 0) throw ValidationError("LTF margin is zero: some subset sum equals theta");
  return spec;
}

LtfSpec hamming_ltf(int n, int k) {
  if (n < 1 || n > 64) throw ValidationError("hamming_ltf: n out of range");
  LtfSpec spec{std::vector<Rational>(n, Rational(1, n)), Rational(2 * k - 1, 2 * n), Rational(1, 2 * n), {}, 0, 1};
  spec.rescale();
  return spec;
}

LtfSpec ltf_preprocess(const LtfSpec& spec, const Caps& caps) {
  (void)caps;
  if (spec.margin <= 0) throw ValidationError("ltf_preprocess: nonpositive margin");
  const Rational cutoff = 2 * spec.margin;
  std::size_t t = 0;
  while (t < spec.weights.size() && spec.weights[t] >= cutoff) ++t;
  if (t == 0) {
    // Every weight is dropped: f is constant and theta alone fixes its value.
    LtfSpec out{{}, spec.theta, spec.margin, {}, 0, 1};
    out.rescale();
    return out;
  }
  std::vector<Rational> kept(spec.weights.begin(), spec.weights.begin() + static_cast<std::ptrdiff_t>(t));
  Rational total(0);
  for (const auto& w : kept) total += w;
  for (auto& w : kept) w /= total;
  LtfSpec out{kept, spec.theta / total, kept.back() / 2, {}, 0, 1};
  out.rescale();
  return out;
}

LtfSpec parse_ltf(std::string_view text, const Caps& caps) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool have_theta = false;
  Rational theta;
  std::vector<Rational> weights;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      if (!have_theta) {
        if (line.rfind("theta=", 0) != 0) throw ParseError("expected 'theta=<decimal>'", line_no);
        theta = parse_rational(line.substr(6));
        have_theta = true;
      } else {
        weights.push_back(parse_rational(line));
      }
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!have_theta) throw ParseError("missing 'theta=' header", line_no);
  if (static_cast<int>(weights.size()) > 64) throw CapExceeded("LTF with more than 64 weights");
  return make_ltf(std::move(weights), theta, caps);
}

LtfSpec load_ltf(const std::string& path, const Caps& caps) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open LTF weight file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ltf(ss.str(), caps);
}

}  // namespace f2lab
