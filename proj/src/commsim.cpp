#include "f2lab/commsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <memory>
#include <unordered_map>

#include "f2lab/parallel.hpp"

namespace f2lab {

namespace {

void check_comm_arity(int n, const Caps& caps) {
  if (n > caps.max_comm_arity)
    throw CapExceeded("two-party evaluation needs n <= " + std::to_string(caps.max_comm_arity));
}

Rational pair_probability(std::uint64_t weight_sum, int n) {
  return Rational(static_cast<std::int64_t>(weight_sum), std::int64_t{1} << (2 * n + 1));
}

// Distinct message values relabelled 0..count-1 in order of first appearance.
std::vector<std::uint32_t> compress(const std::vector<std::uint32_t>& message, std::size_t& count) {
  std::unordered_map<std::uint32_t, std::uint32_t> ids;
  std::vector<std::uint32_t> out(message.size());
  for (std::size_t x = 0; x < message.size(); ++x) {
    auto [it, inserted] = ids.emplace(message[x], static_cast<std::uint32_t>(ids.size()));
    out[x] = it->second;
  }
  count = ids.size();
  return out;
}

}  // namespace

PairDistribution sec7_for(const BoolFun& f) {
  const LinearDistance ld = linear_distance(f);
  if (ld.epsilon == 0) throw ValidationError("sec7 distribution needs a non-linear function");
  for (std::uint64_t z = 0; z < f.size(); ++z) {
    const int chi = parity(z & ld.best.bits()) ? -1 : 1;
    if (f(z) != chi) return PairDistribution::sec7(z);
  }
  throw std::logic_error("sec7_for: no disagreement with the closest character");
}

Rational exact_error(const OneWayProtocol& p, const BoolFun& f, const PairDistribution& mu, const Caps& caps) {
  if (p.n != f.arity()) throw ValidationError("exact_error: arity mismatch");
  check_comm_arity(p.n, caps);
  if (!p.decoder) return optimal_rectangle_error(p.message, f, mu, caps);
  std::size_t count = 0;
  const auto ids = compress(p.message, count);
  std::vector<std::uint32_t> value_of(count);
  for (std::size_t x = 0; x < ids.size(); ++x) value_of[ids[x]] = p.message[x];
  const std::uint64_t size = f.size();
  std::uint64_t wrong = 0;
  std::vector<int> out(count);
  for (std::uint64_t y = 0; y < size; ++y) {
    for (std::size_t m = 0; m < count; ++m) out[m] = p.decoder(y, value_of[m]);
    for (std::uint64_t x = 0; x < size; ++x)
      if (out[ids[x]] != f(x ^ y)) wrong += mu.weight(x, y, p.n);
  }
  return pair_probability(wrong, p.n);
}

Rational optimal_rectangle_error(const std::vector<std::uint32_t>& message, const BoolFun& f, const PairDistribution& mu,
                                 const Caps& caps) {
  const int n = f.arity();
  check_comm_arity(n, caps);
  if (message.size() != f.size()) throw ValidationError("message table must have 2^n entries");
  std::size_t count = 0;
  const auto ids = compress(message, count);
  std::vector<std::uint64_t> plus(count), minus(count);
  std::uint64_t wrong = 0;
  for (std::uint64_t y = 0; y < f.size(); ++y) {
    std::fill(plus.begin(), plus.end(), 0);
    std::fill(minus.begin(), minus.end(), 0);
    for (std::uint64_t x = 0; x < f.size(); ++x) (f(x ^ y) > 0 ? plus : minus)[ids[x]] += mu.weight(x, y, n);
    for (std::size_t m = 0; m < count; ++m) wrong += std::min(plus[m], minus[m]);
  }
  return pair_probability(wrong, n);
}

OneBitSearch best_one_bit_error(const BoolFun& f, const PairDistribution& mu, int workers, const Caps& caps) {
  const int n = f.arity();
  if (n > caps.max_onebit_arity || n > 5)
    throw CapExceeded("one-bit search needs n <= " + std::to_string(std::min(caps.max_onebit_arity, 5)));
  const std::uint64_t size = f.size();
  const std::uint64_t total = std::uint64_t{1} << size;
  // weight[y][x] split by the sign of f(x + y).
  std::vector<std::uint64_t> w(size * size);
  std::vector<std::int8_t> sign(size * size);
  for (std::uint64_t y = 0; y < size; ++y)
    for (std::uint64_t x = 0; x < size; ++x) {
      w[y * size + x] = mu.weight(x, y, n);
      sign[y * size + x] = static_cast<std::int8_t>(f(x ^ y));
    }
  workers = std::max(1, workers);
  struct Best {
    std::uint64_t wrong = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t m = 0;
  };
  std::vector<Best> best(workers);
  run_workers(workers, [&](int wk) {
    const std::uint64_t lo = total / workers * wk + std::min<std::uint64_t>(wk, total % workers);
    const std::uint64_t hi = lo + total / workers + (static_cast<std::uint64_t>(wk) < total % workers ? 1 : 0);
    Best& b = best[wk];
    for (std::uint64_t m = lo; m < hi; ++m) {
      std::uint64_t wrong = 0;
      for (std::uint64_t y = 0; y < size && wrong < b.wrong; ++y) {
        std::uint64_t cell[2][2] = {{0, 0}, {0, 0}};  // [bit][minus]
        for (std::uint64_t x = 0; x < size; ++x)
          cell[(m >> x) & 1][sign[y * size + x] < 0] += w[y * size + x];
        wrong += std::min(cell[0][0], cell[0][1]) + std::min(cell[1][0], cell[1][1]);
      }
      if (wrong < b.wrong) {
        b.wrong = wrong;
        b.m = m;
      }
    }
  });
  Best overall;
  for (const auto& b : best)
    if (b.wrong < overall.wrong) overall = b;
  return {pair_probability(overall.wrong, n), overall.m, total};
}

MessageBound check_message_bound(const BoolFun& f, std::uint64_t z, int workers, const Caps& caps) {
  const int n = f.arity();
  if (n > caps.max_onebit_arity || n > 5) throw CapExceeded("message bound check needs n <= the one-bit cap");
  const std::uint64_t size = f.size();
  const std::uint64_t total = std::uint64_t{1} << size;
  MessageBound out;
  out.epsilon = linear_distance(f).epsilon;
  out.bound = std::sqrt(2.0) / 2.0 * (1.0 + to_double(out.epsilon));
  const std::int64_t scale = std::int64_t{1} << n;
  const int fz = f(z);
  // With S(M) = sum_y |2^n M(y+z) f(z) + sum_x M(x) f(x+y)| the quantity is
  // S / (2 4^n); compare 2 S^2 b^2 <= (2 4^n (a + b))^2 for eps = a / b.
  workers = std::max(1, workers);
  struct Worst {
    std::int64_t s = -1;
    std::uint64_t m = 0;
  };
  std::vector<Worst> worst(workers);
  run_workers(workers, [&](int wk) {
    Worst& b = worst[wk];
    for (std::uint64_t m = static_cast<std::uint64_t>(wk); m < total; m += static_cast<std::uint64_t>(workers)) {
      std::int64_t s = 0;
      for (std::uint64_t y = 0; y < size; ++y) {
        const int my = ((m >> (y ^ z)) & 1) ? -1 : 1;
        std::int64_t corr = 0;
        for (std::uint64_t x = 0; x < size; ++x) corr += (((m >> x) & 1) ? -1 : 1) * f(x ^ y);
        const std::int64_t v = scale * my * fz + corr;
        s += v < 0 ? -v : v;
      }
      if (s > b.s || (s == b.s && m < b.m)) {
        b.s = s;
        b.m = m;
      }
    }
  });
  Worst overall;
  for (const auto& b : worst)
    if (b.s > overall.s || (b.s == overall.s && b.m < overall.m)) overall = b;
  const std::int64_t denom = 2 * scale * scale;
  out.worst_value = static_cast<double>(overall.s) / static_cast<double>(denom);
  out.worst_message = overall.m;
  using i128 = __int128;
  const i128 a = out.epsilon.numerator();
  const i128 b = out.epsilon.denominator();
  const i128 lhs = 2 * static_cast<i128>(overall.s) * overall.s * b * b;
  const i128 rhs_root = static_cast<i128>(denom) * (a + b);
  out.holds = lhs <= rhs_root * rhs_root;
  return out;
}

OneWayProtocol trivial_majority_protocol(int n, const Caps& caps) {
  if (n < 1 || n % 2 == 0) throw ValidationError("trivial_majority_protocol needs odd n");
  check_comm_arity(n, caps);
  OneWayProtocol p;
  p.n = n;
  p.c = n - 1;
  p.message.resize(std::size_t{1} << n);
  const std::uint64_t mask = low_mask(n - 1);
  for (std::uint64_t x = 0; x < p.message.size(); ++x) p.message[x] = static_cast<std::uint32_t>(x & mask);
  p.decoder = [n, mask](std::uint64_t y, std::uint64_t msg) {
    const int w = std::popcount((msg ^ y) & mask);
    return 2 * w > n - 1 ? -1 : 1;
  };
  return p;
}

OneWayProtocol protocol_from_sketch(const SketchScheme& scheme, std::uint64_t sample, const Caps& caps) {
  check_comm_arity(scheme.n, caps);
  if (scheme.k > caps.max_sketch_table_bits || scheme.k > 32)
    throw CapExceeded("protocol_from_sketch needs k <= " + std::to_string(caps.max_sketch_table_bits));
  auto inst = std::make_shared<const SketchInstance>(scheme.sample(sample));
  OneWayProtocol p;
  p.n = scheme.n;
  p.c = inst->k();
  p.message.resize(std::size_t{1} << p.n);
  for (std::uint64_t x = 0; x < p.message.size(); ++x) {
    const auto s = inst->sketch(x);
    p.message[x] = s.empty() ? 0 : static_cast<std::uint32_t>(s[0]);
  }
  p.decoder = [inst](std::uint64_t y, std::uint64_t msg) {
    SketchValue s = inst->sketch(y);
    if (!s.empty()) s[0] ^= msg;
    return inst->decode(s);
  };
  return p;
}

nlohmann::json protocol_to_json(const OneWayProtocol& p, bool with_decoders, const Caps& caps) {
  static constexpr char digits[] = "0123456789abcdef";
  const int width = std::max(1, (p.c + 3) / 4);
  std::string msg;
  msg.reserve(p.message.size() * width);
  for (auto m : p.message)
    for (int d = width - 1; d >= 0; --d) msg += digits[(m >> (4 * d)) & 0xf];
  nlohmann::json j = {{"format", "f2lab-protocol/1"}, {"n", p.n}, {"c", p.c}, {"message", msg}};
  if (with_decoders && p.decoder) {
    if (p.n + p.c > caps.max_arity) throw CapExceeded("decoder table too large to serialize");
    std::vector<std::int8_t> table(std::size_t{1} << (p.n + p.c));
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << p.c); ++m)
      for (std::uint64_t y = 0; y < (std::uint64_t{1} << p.n); ++y)
        table[(m << p.n) | y] = static_cast<std::int8_t>(p.decoder(y, m));
    j["decoders"] = hex_pack(table);
  }
  return j;
}

OneWayProtocol protocol_from_json(const nlohmann::json& j, const Caps& caps) {
  try {
    if (j.value("format", "") != "f2lab-protocol/1") throw ValidationError("not an f2lab protocol (format field)");
    OneWayProtocol p;
    p.n = j.at("n").get<int>();
    p.c = j.at("c").get<int>();
    if (p.n < 0 || p.c < 0 || p.c > 32) throw ValidationError("protocol n or c out of range");
    check_comm_arity(p.n, caps);
    const int width = std::max(1, (p.c + 3) / 4);
    const std::string msg = j.at("message").get<std::string>();
    const std::size_t size = std::size_t{1} << p.n;
    if (msg.size() != size * width) throw ValidationError("protocol message hex has the wrong length");
    p.message.resize(size);
    for (std::size_t x = 0; x < size; ++x) {
      std::uint64_t v = 0;
      for (int d = 0; d < width; ++d) {
        const char ch = msg[x * width + d];
        int digit;
        if (ch >= '0' && ch <= '9') digit = ch - '0';
        else if (ch >= 'a' && ch <= 'f') digit = ch - 'a' + 10;
        else if (ch >= 'A' && ch <= 'F') digit = ch - 'A' + 10;
        else throw ValidationError("protocol message has a non-hex character");
        v = (v << 4) | static_cast<std::uint64_t>(digit);
      }
      if (v >> p.c) throw ValidationError("protocol message wider than c bits");
      p.message[x] = static_cast<std::uint32_t>(v);
    }
    if (j.contains("decoders")) {
      if (p.n + p.c > caps.max_arity) throw CapExceeded("decoder table too large");
      auto table = std::make_shared<const std::vector<std::int8_t>>(
          hex_unpack(j.at("decoders").get<std::string>(), std::uint64_t{1} << (p.n + p.c)));
      const int n = p.n;
      p.decoder = [table, n](std::uint64_t y, std::uint64_t m) { return static_cast<int>((*table)[(m << n) | y]); };
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed protocol JSON: ") + e.what());
  }
}

}  // namespace f2lab
