#include "f2lab/sketch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_set>

#include "f2lab/fourierdim.hpp"
#include "f2lab/parallel.hpp"
#include "f2lab/random.hpp"

namespace f2lab {

std::size_t SketchValueHash::operator()(const SketchValue& v) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ v.size();
  for (auto w : v) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 33));
}

// ---- SketchInstance ------------------------------------------------------------

SketchInstance::SketchInstance(int n, std::vector<std::uint64_t> rows, Decoder decoder)
    : n_(n), rows_(std::move(rows)), decoder_(std::move(decoder)) {
  if (n < 0 || n > kMaxBitVecDim) throw ValidationError("sketch arity out of range");
  for (auto r : rows_)
    if (r & ~low_mask(n)) throw ValidationError("sketch row has bits beyond n");
  columns_.assign(n, zero());
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (int j = 0; j < n; ++j)
      if ((rows_[r] >> j) & 1) columns_[j][r / 64] |= std::uint64_t{1} << (r % 64);
}

Gf2Matrix SketchInstance::matrix() const {
  if (rows_.size() > 64) throw ValidationError("matrix view needs k <= 64");
  return Gf2Matrix(n_, rows_);
}

SketchValue SketchInstance::sketch(std::uint64_t x) const {
  SketchValue s = zero();
  for (std::size_t r = 0; r < rows_.size(); ++r)
    if (parity(rows_[r] & x)) s[r / 64] |= std::uint64_t{1} << (r % 64);
  return s;
}

std::vector<std::int8_t> SketchInstance::decoder_table(const Caps& caps) const {
  if (k() > caps.max_sketch_table_bits) throw CapExceeded("decoder table needs k <= " + std::to_string(caps.max_sketch_table_bits));
  std::vector<std::int8_t> t(std::size_t{1} << k());
  SketchValue s = zero();
  for (std::uint64_t v = 0; v < t.size(); ++v) {
    if (!s.empty()) s[0] = v;
    t[v] = static_cast<std::int8_t>(decode(s));
  }
  return t;
}

std::string to_string(SketchKind kind) {
  switch (kind) {
    case SketchKind::deterministic: return "deterministic";
    case SketchKind::sign_trick: return "sign-trick";
    case SketchKind::random_parity: return "random-parity";
    case SketchKind::ltf: return "ltf";
  }
  return "?";
}

SketchKind parse_sketch_kind(const std::string& s) {
  if (s == "deterministic" || s == "det") return SketchKind::deterministic;
  if (s == "sign-trick" || s == "sign") return SketchKind::sign_trick;
  if (s == "random-parity" || s == "parity") return SketchKind::random_parity;
  if (s == "ltf") return SketchKind::ltf;
  throw ValidationError("unknown sketch kind '" + s + "'");
}

namespace {

std::uint64_t low_word(const SketchValue& s) { return s.empty() ? 0 : s[0]; }

SketchInstance::Decoder table_decoder(std::vector<std::int8_t> table) {
  auto shared = std::make_shared<const std::vector<std::int8_t>>(std::move(table));
  return [shared](const SketchValue& s) { return static_cast<int>((*shared)[low_word(s)]); };
}

SketchScheme point_scheme(SketchKind kind, SketchInstance inst) {
  SketchScheme s;
  s.kind = kind;
  s.n = inst.n();
  s.k = inst.k();
  s.support = 1;
  auto shared = std::make_shared<const SketchInstance>(std::move(inst));
  s.by_index = [shared](std::uint64_t) { return *shared; };
  s.by_trial = [shared](std::uint64_t) { return *shared; };
  return s;
}

}  // namespace

// ---- deterministic ----------------------------------------------------------------

SketchScheme deterministic_sketch(const BoolFun& f, const Caps& caps) {
  const auto dim = exact_dim(wht(f, caps));
  std::vector<std::uint64_t> rows(dim.basis.basis_bits().begin(), dim.basis.basis_bits().end());
  // RREF pivots are zero in every other row, so x = sum s_i e_{pivot_i}
  // has sketch s.
  std::vector<std::int8_t> table(std::size_t{1} << rows.size());
  for (std::uint64_t s = 0; s < table.size(); ++s) {
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if ((s >> i) & 1) x |= rows[i] & (~rows[i] + 1);
    table[s] = static_cast<std::int8_t>(f(x));
  }
  return point_scheme(SketchKind::deterministic, SketchInstance(f.arity(), std::move(rows), table_decoder(std::move(table))));
}

// ---- sign trick -------------------------------------------------------------------

SignTrick sign_trick_sketch(const BoolFun& f, const Subspace& a, const Caps& caps) {
  const int n = f.arity();
  if (a.n() != n) throw ValidationError("sign_trick_sketch: subspace dimension mismatch");
  const int d = a.dim();
  if (d > caps.max_sketch_table_bits) throw CapExceeded("sign_trick_sketch: dim(A) exceeds the table cap");
  const Spectrum spec = wht(f, caps);
  const auto basis = a.basis_bits();
  const std::size_t size = std::size_t{1} << d;

  // g(x) = sum_{alpha in A} f^(alpha) chi_alpha(x) depends only on s = Mx:
  // 2^n g = sum_u c(lift u) (-1)^{u . s}.
  std::vector<std::int64_t> g(size);
  {
    std::uint64_t v = 0;
    g[0] = spec[0];
    for (std::uint64_t u = 1; u < size; ++u) {
      v ^= basis[std::countr_zero(u)];
      g[u ^ (u >> 1)] = spec[v];
    }
  }
  integer_wht(g);

  std::vector<std::uint64_t> plus(size, 0), minus(size, 0);
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    std::uint64_t s = 0;
    for (int i = 0; i < d; ++i) s |= static_cast<std::uint64_t>(parity(basis[i] & x)) << i;
    (f(x) > 0 ? plus : minus)[s]++;
  }

  // Sweep thresholds over the distinct values of g in ascending order; at
  // threshold v the decoder outputs +1 exactly where g >= v. The last
  // candidate lies above every value (all -1).
  std::map<std::int64_t, std::pair<std::uint64_t, std::uint64_t>> by_value;
  for (std::size_t s = 0; s < size; ++s) {
    by_value[g[s]].first += plus[s];
    by_value[g[s]].second += minus[s];
  }
  std::uint64_t error = 0;
  for (const auto& [v, pm] : by_value) error += pm.second;  // all +1
  std::uint64_t best_error = error;
  std::int64_t best_threshold = by_value.begin()->first;
  bool best_is_top = false;
  for (auto it = by_value.begin(); it != by_value.end(); ++it) {
    // Move value it->first to the -1 side.
    error = error - it->second.second + it->second.first;
    auto next = std::next(it);
    if (error < best_error) {
      best_error = error;
      if (next == by_value.end()) {
        best_is_top = true;
      } else {
        best_threshold = next->first;
      }
    }
  }
  const std::int64_t top = by_value.rbegin()->first + 1;
  const std::int64_t theta = best_is_top ? top : best_threshold;
  std::vector<std::int8_t> table(size);
  for (std::size_t s = 0; s < size; ++s) table[s] = g[s] >= theta ? 1 : -1;

  SignTrick out;
  out.scheme = point_scheme(SketchKind::sign_trick,
                            SketchInstance(n, std::vector<std::uint64_t>(basis.begin(), basis.end()), table_decoder(table)));
  out.achieved_error = dyadic(static_cast<std::int64_t>(best_error), n);
  out.weight = subspace_weight(spec, a);
  out.threshold = dyadic(theta, n);
  out.scheme.params = {{"threshold", to_string(out.threshold)},
                       {"weight", to_string(out.weight)},
                       {"achieved_error", to_string(out.achieved_error)}};
  return out;
}

// ---- random parities -------------------------------------------------------------------

int random_parity_width(std::uint64_t minority, const Rational& delta) {
  if (delta <= 0 || delta >= 1) throw ValidationError("delta must lie in (0, 1)");
  if (minority == 0) return 0;
  // Smallest k with 2^k delta >= 2 |T|.
  int k = 0;
  Rational lhs = delta;
  const Rational target(static_cast<std::int64_t>(2 * minority));
  while (lhs < target) {
    lhs *= 2;
    ++k;
  }
  return k;
}

namespace {

std::vector<std::uint64_t> random_rows(int k, int n, Rng& rng) {
  std::vector<std::uint64_t> rows(k);
  for (auto& r : rows) r = rng.bits(n);
  return rows;
}

SketchInstance membership_instance(int n, std::vector<std::uint64_t> rows, const std::vector<std::uint64_t>& targets,
                                   int target_value) {
  SketchInstance probe(n, rows, [](const SketchValue&) { return 1; });
  auto images = std::make_shared<std::unordered_set<SketchValue, SketchValueHash>>();
  images->reserve(targets.size() * 2);
  for (auto t : targets) images->insert(probe.sketch(t));
  return SketchInstance(n, std::move(rows), [images, target_value](const SketchValue& s) {
    return images->count(s) ? target_value : -target_value;
  });
}

SketchInstance ml_instance(const BoolFun& f, std::vector<std::uint64_t> rows, const Caps& caps) {
  const int k = static_cast<int>(rows.size());
  if (k > caps.max_sketch_table_bits) throw CapExceeded("ML decoder needs k <= table cap");
  SketchInstance probe(f.arity(), rows, [](const SketchValue&) { return 1; });
  std::vector<std::int64_t> sum(std::size_t{1} << k, 0);
  for (std::uint64_t x = 0; x < f.size(); ++x) sum[low_word(probe.sketch(x))] += f(x);
  std::vector<std::int8_t> table(sum.size());
  for (std::size_t s = 0; s < sum.size(); ++s) table[s] = sum[s] >= 0 ? 1 : -1;
  return SketchInstance(f.arity(), std::move(rows), table_decoder(std::move(table)));
}

}  // namespace

SketchScheme random_parity_sketch(const BoolFun& f, const Rational& delta, std::uint64_t seed, ParityDecoder decoder,
                                  const Caps& caps) {
  const int n = f.arity();
  const std::uint64_t minus = f.count_minus();
  const bool minus_side = minus <= f.size() - minus;
  const int target_value = minus_side ? -1 : 1;
  auto targets = std::make_shared<std::vector<std::uint64_t>>();
  for (std::uint64_t x = 0; x < f.size(); ++x)
    if (f(x) == target_value) targets->push_back(x);
  const int k = random_parity_width(targets->size(), delta);

  SketchScheme s;
  s.kind = SketchKind::random_parity;
  s.n = n;
  s.k = k;
  s.seed = seed;
  s.params = {{"delta", to_string(delta)},
              {"decoder", decoder == ParityDecoder::ml ? "ml" : "membership"},
              {"minority", targets->size()},
              {"minority_value", target_value}};
  auto fptr = std::make_shared<const BoolFun>(f);
  auto build = [fptr, targets, target_value, decoder, caps, n](std::vector<std::uint64_t> rows) {
    if (decoder == ParityDecoder::ml) return ml_instance(*fptr, std::move(rows), caps);
    return membership_instance(n, std::move(rows), *targets, target_value);
  };
  s.by_trial = [build, seed, k, n](std::uint64_t trial) {
    Rng rng(seed, "random-parity", trial);
    return build(random_rows(k, n, rng));
  };
  if (static_cast<std::int64_t>(k) * n <= caps.max_sketch_table_bits) {
    s.support = std::uint64_t{1} << (k * n);
    s.by_index = [build, k, n](std::uint64_t index) {
      std::vector<std::uint64_t> rows(k);
      for (int r = 0; r < k; ++r) rows[r] = (index >> (r * n)) & low_mask(n);
      return build(std::move(rows));
    };
  }
  return s;
}

// ---- LTF ---------------------------------------------------------------------------------

LtfSketchPlan plan_ltf_sketch(const LtfSpec& spec, const Rational& delta, const LtfSketchOptions& opt) {
  if (delta <= 0 || delta >= Rational(1, 2)) throw ValidationError("ltf_sketch: delta must lie in (0, 1/2)");
  if (spec.margin <= 0) throw ValidationError("ltf_sketch: margin must be positive");
  LtfSketchPlan p;
  p.pre = ltf_preprocess(spec);
  const int t = p.pre.arity();
  if (t == 0) return p;
  p.ratio = to_double(p.pre.theta / p.pre.margin);
  p.staged = p.ratio > 100.0;
  // Inputs with f = 0 have fewer than theta / w_t = theta / 2m ones.
  const double half_ratio = p.ratio / 2.0;
  if (p.staged) {
    p.stage1_rows = opt.stage1_repetitions;
    p.stage1_probability = 10.0 / (p.ratio * p.ratio);
    const double b = std::ceil(opt.bucket_constant * std::pow(p.ratio, 4));
    if (b > 1e18) throw CapExceeded("ltf_sketch: bucket count overflows");
    p.buckets = static_cast<std::uint64_t>(b);
    p.stage3_delta = to_double(delta) / 3.0;
    p.stage3_rows = static_cast<int>(std::ceil(std::log2(2.0 / p.stage3_delta) + half_ratio * std::log2(b + 1.0)));
  } else {
    p.stage3_delta = to_double(delta);
    p.stage3_rows = static_cast<int>(std::ceil(std::log2(2.0 / p.stage3_delta) + half_ratio * std::log2(t + 1.0)));
  }
  return p;
}

SketchScheme ltf_sketch(const LtfSpec& spec, const Rational& delta, std::uint64_t seed, const LtfSketchOptions& opt,
                        const Caps& caps) {
  (void)caps;
  const LtfSketchPlan plan = plan_ltf_sketch(spec, delta, opt);
  const int n = spec.arity();
  const int t = plan.pre.arity();
  SketchScheme s;
  s.kind = SketchKind::ltf;
  s.n = n;
  s.seed = seed;
  s.k = plan.stage3_rows + plan.stage1_rows;

  auto below = std::make_shared<std::vector<std::uint64_t>>();
  if (t > 0) *below = plan.pre.below_threshold(opt.max_below);
  s.params = {{"delta", to_string(delta)},
              {"ratio", plan.ratio},
              {"staged", plan.staged},
              {"stage1_rows", plan.stage1_rows},
              {"stage1_probability", plan.stage1_probability},
              {"stage1_vote", opt.stage1_vote},
              {"buckets", plan.buckets},
              {"bucket_constant", opt.bucket_constant},
              {"stage3_rows", plan.stage3_rows},
              {"stage3_delta", plan.stage3_delta},
              {"kept", t},
              {"below_threshold", below->size()}};

  if (t == 0) {
    const int value = plan.pre.theta <= 0 ? -1 : 1;
    return point_scheme(SketchKind::ltf, SketchInstance(n, {}, [value](const SketchValue&) { return value; }));
  }

  const int k3 = plan.stage3_rows;
  const int r1 = plan.stage1_rows;
  const double vote = opt.stage1_vote;
  s.by_trial = [=](std::uint64_t trial) {
    const std::uint64_t base = derive_seed(seed, "ltf", trial);
    std::vector<std::uint64_t> rows(k3 + r1, 0);
    if (plan.staged) {
      // Stage 3 on the hashed input: row alpha in F_2^B acts on x as H^T alpha,
      // so coordinate j joins the row iff alpha has a one at bucket h(j).
      std::vector<std::uint64_t> bucket(t);
      for (int j = 0; j < t; ++j) bucket[j] = derive_seed(base, "bucket", j) % plan.buckets;
      for (int r = 0; r < k3; ++r) {
        const std::uint64_t row_seed = derive_seed(base, "alpha", r);
        for (int j = 0; j < t; ++j)
          if (derive_seed(row_seed, "", bucket[j]) & 1) rows[r] |= std::uint64_t{1} << j;
      }
      Rng rng(base, "sparse");
      for (int r = 0; r < r1; ++r)
        for (int j = 0; j < t; ++j)
          if (rng.bernoulli(plan.stage1_probability)) rows[k3 + r] |= std::uint64_t{1} << j;
    } else {
      Rng rng(base, "parity");
      for (int r = 0; r < k3; ++r) rows[r] = rng.bits(t);
    }
    auto stage1_fired = [k3, r1, vote](const SketchValue& sv) {
      if (r1 == 0) return false;
      int fired = 0;
      for (int r = k3; r < k3 + r1; ++r) fired += (sv[r / 64] >> (r % 64)) & 1;
      return fired > vote * r1;
    };
    if (k3 <= 63) {
      // Stage-3 keys of the below-threshold set fit one word: open addressing,
      // slot value key + 1, 0 empty.
      const std::size_t cap = std::bit_ceil(std::max<std::size_t>(2 * below->size(), 2));
      auto table = std::make_shared<std::vector<std::uint64_t>>(cap, 0);
      auto slot = [](std::uint64_t key, std::size_t mask) {
        return static_cast<std::size_t>((key * 0x9e3779b97f4a7c15ULL) >> 17) & mask;
      };
      for (auto x : *below) {
        std::uint64_t key = 0;
        for (int r = 0; r < k3; ++r) key |= static_cast<std::uint64_t>(parity(rows[r] & x)) << r;
        for (std::size_t i = slot(key, cap - 1);; i = (i + 1) & (cap - 1)) {
          if ((*table)[i] == key + 1) break;
          if ((*table)[i] == 0) {
            (*table)[i] = key + 1;
            break;
          }
        }
      }
      const std::uint64_t mask = low_mask(k3);
      return SketchInstance(n, std::move(rows), [table, mask, slot, stage1_fired](const SketchValue& sv) {
        if (stage1_fired(sv)) return -1;
        const std::uint64_t key = sv[0] & mask;
        const std::size_t m = table->size() - 1;
        for (std::size_t i = slot(key, m);; i = (i + 1) & m) {
          if ((*table)[i] == key + 1) return 1;
          if ((*table)[i] == 0) return -1;
        }
      });
    }
    SketchInstance probe(n, rows, [](const SketchValue&) { return 1; });
    auto images = std::make_shared<std::unordered_set<SketchValue, SketchValueHash>>();
    images->reserve(below->size() * 2);
    for (auto x : *below) {
      SketchValue key = probe.sketch(x);
      for (int r = k3; r < static_cast<int>(key.size()) * 64; ++r) key[r / 64] &= ~(std::uint64_t{1} << (r % 64));
      images->insert(std::move(key));
    }
    return SketchInstance(n, std::move(rows), [images, k3, stage1_fired](const SketchValue& sv) {
      if (stage1_fired(sv)) return -1;
      SketchValue key = sv;
      for (int r = k3; r < static_cast<int>(key.size()) * 64; ++r) key[r / 64] &= ~(std::uint64_t{1} << (r % 64));
      return images->count(key) ? 1 : -1;
    });
  };
  return s;
}

LtfSpec resolve_ltf(const std::string& name, const Caps& caps) {
  if (name.rfind("ltf:", 0) == 0) return load_ltf(name.substr(4), caps);
  if (name.rfind("hamge:", 0) == 0) {
    const auto rest = name.substr(6);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw ValidationError("hamge needs n and k");
    try {
      return hamming_ltf(std::stoi(rest.substr(0, colon)), std::stoi(rest.substr(colon + 1)));
    } catch (const std::invalid_argument&) {
      throw ValidationError("bad hamge arguments in '" + name + "'");
    }
  }
  throw ValidationError("'" + name + "' is not an LTF (expected hamge:n:k or ltf:<path>)");
}

// ---- evaluation -----------------------------------------------------------------------------

namespace {

std::uint64_t draw_input(Rng& rng, int n, InputDist dist) {
  if (dist == InputDist::uniform) return rng.bits(n);
  const auto w = rng.below(static_cast<std::uint64_t>(n) + 1);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::uint64_t x = 0;
  for (std::uint64_t i = 0; i < w; ++i) {
    const auto j = i + rng.below(n - i);
    std::swap(idx[i], idx[j]);
    x |= std::uint64_t{1} << idx[i];
  }
  return x;
}

}  // namespace

SketchError eval_sketch_error(const SketchScheme& scheme, const Oracle& f, const EvalOptions& opt) {
  const int n = scheme.n;
  const int workers = std::max(1, opt.workers);
  SketchError out;
  out.exact = opt.exact;
  if (opt.exact) {
    if (!scheme.support || !scheme.by_index)
      throw ValidationError("exact evaluation needs an enumerable scheme; use monte mode");
    if (n > opt.caps.max_arity) throw CapExceeded("exact evaluation: arity exceeds cap");
    const std::uint64_t support = *scheme.support;
    const std::uint64_t size = std::uint64_t{1} << n;
    if (static_cast<double>(support) * static_cast<double>(size) > static_cast<double>(opt.caps.max_work))
      throw CapExceeded("exact evaluation exceeds the work cap");
    std::vector<std::int64_t> truth(size);
    for (std::uint64_t x = 0; x < size; ++x) truth[x] = f(x);
    std::vector<std::vector<std::uint64_t>> wrong(workers, std::vector<std::uint64_t>(size, 0));
    run_workers(workers, [&](int w) {
      for (std::uint64_t i = static_cast<std::uint64_t>(w); i < support; i += static_cast<std::uint64_t>(workers)) {
        const SketchInstance inst = scheme.by_index(i);
        for (std::uint64_t x = 0; x < size; ++x) wrong[w][x] += inst(x) != truth[x];
      }
    });
    std::uint64_t total = 0, worst = 0;
    for (std::uint64_t x = 0; x < size; ++x) {
      std::uint64_t c = 0;
      for (int w = 0; w < workers; ++w) c += wrong[w][x];
      total += c;
      if (c > worst) {
        worst = c;
        out.worst_x = x;
      }
    }
    out.per_x_max = Rational(static_cast<std::int64_t>(worst), static_cast<std::int64_t>(support));
    // total / (support 2^n), reduced stepwise to stay in range.
    out.uniform_avg = Rational(static_cast<std::int64_t>(total), static_cast<std::int64_t>(support)) /
                      Rational(static_cast<std::int64_t>(size));
    return out;
  }

  const std::uint64_t per = std::max<std::uint64_t>(1, opt.inputs_per_instance);
  const std::uint64_t instances = (opt.trials + per - 1) / per;
  struct Tally {
    std::uint64_t errors = 0;
    std::vector<std::uint64_t> probe_errors;
  };
  std::vector<Tally> tally(workers);
  run_workers(workers, [&](int w) {
    Tally& t = tally[w];
    t.probe_errors.assign(opt.probes.size(), 0);
    for (std::uint64_t i = static_cast<std::uint64_t>(w); i < instances; i += static_cast<std::uint64_t>(workers)) {
      const SketchInstance inst = scheme.sample(i);
      Rng rng(opt.seed, "eval-input", i);
      for (std::uint64_t j = 0; j < per; ++j) {
        const std::uint64_t x = draw_input(rng, n, opt.dist);
        t.errors += inst(x) != f(x);
      }
      for (std::size_t p = 0; p < opt.probes.size(); ++p) t.probe_errors[p] += inst(opt.probes[p]) != f(opt.probes[p]);
    }
  });
  out.instances = instances;
  out.trials = instances * per;
  std::vector<std::uint64_t> probe_errors(opt.probes.size(), 0);
  for (const auto& t : tally) {
    out.errors += t.errors;
    for (std::size_t p = 0; p < probe_errors.size(); ++p) probe_errors[p] += t.probe_errors[p];
  }
  out.avg_estimate = static_cast<double>(out.errors) / static_cast<double>(out.trials);
  out.avg_ci = clopper_pearson(out.errors, out.trials);
  if (!probe_errors.empty()) {
    out.probed = true;
    const auto it = std::max_element(probe_errors.begin(), probe_errors.end());
    out.probe_worst_errors = *it;
    out.worst_x = opt.probes[static_cast<std::size_t>(it - probe_errors.begin())];
    out.per_x_estimate = static_cast<double>(*it) / static_cast<double>(instances);
    out.per_x_ci = clopper_pearson(*it, instances);
  }
  return out;
}

SketchError eval_sketch_error(const SketchScheme& scheme, const BoolFun& f, const EvalOptions& opt) {
  if (f.arity() != scheme.n) throw ValidationError("eval_sketch_error: arity mismatch");
  return eval_sketch_error(scheme, [&f](std::uint64_t x) { return f(x); }, opt);
}

nlohmann::json sketch_error_json(const SketchError& e) {
  if (e.exact)
    return {{"mode", "exact"}, {"per_x_max", to_string(e.per_x_max)}, {"uniform_avg", to_string(e.uniform_avg)},
            {"worst_x", e.worst_x}};
  nlohmann::json j = {{"mode", "monte"},
                      {"trials", e.trials},
                      {"instances", e.instances},
                      {"errors", e.errors},
                      {"uniform_avg", e.avg_estimate},
                      {"uniform_avg_ci", {e.avg_ci.lower, e.avg_ci.upper}}};
  if (e.probed) {
    j["per_x_max"] = e.per_x_estimate;
    j["per_x_max_ci"] = {e.per_x_ci.lower, e.per_x_ci.upper};
    j["worst_probe"] = e.worst_x;
  }
  return j;
}

// ---- serialization --------------------------------------------------------------------------

std::string hex_pack(const std::vector<std::int8_t>& table) {
  static constexpr char digits[] = "0123456789abcdef";
  std::vector<int> nibbles((table.size() + 3) / 4, 0);
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i] < 0) nibbles[i / 4] |= 1 << (i % 4);
  std::string out;
  for (int v : nibbles) out += digits[v];
  return out;
}

std::vector<std::int8_t> hex_unpack(const std::string& hex, std::uint64_t count) {
  if (hex.size() != (count + 3) / 4) throw ValidationError("decoder hex has the wrong length");
  std::vector<std::int8_t> t(count, 1);
  for (std::uint64_t i = 0; i < count; ++i) {
    const char c = hex[i / 4];
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw ValidationError("decoder hex has a non-hex character");
    if ((v >> (i % 4)) & 1) t[i] = -1;
  }
  return t;
}

nlohmann::json scheme_to_json(const SketchScheme& s) {
  nlohmann::json j = {{"format", "f2lab-sketch/1"}, {"kind", to_string(s.kind)}, {"n", s.n}, {"k", s.k},
                      {"seed", s.seed},            {"fn", s.fn},              {"params", s.params}};
  if (s.kind == SketchKind::deterministic || s.kind == SketchKind::sign_trick) {
    const SketchInstance inst = s.by_index(0);
    nlohmann::json rows = nlohmann::json::array();
    for (auto r : inst.rows()) rows.push_back(BitVec(s.n, r).str());
    j["matrix"] = rows;
    if (s.k <= 20) j["decoder"] = hex_pack(inst.decoder_table());
  }
  return j;
}

SketchScheme scheme_from_json(const nlohmann::json& j, const Caps& caps) {
  try {
    if (j.value("format", "") != "f2lab-sketch/1") throw ValidationError("not an f2lab sketch scheme (format field)");
    const SketchKind kind = parse_sketch_kind(j.at("kind").get<std::string>());
    const int n = j.at("n").get<int>();
    const int k = j.at("k").get<int>();
    const auto seed = j.value("seed", std::uint64_t{0});
    const std::string fn = j.value("fn", std::string());
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    SketchScheme s;
    if ((kind == SketchKind::deterministic || kind == SketchKind::sign_trick) && j.contains("matrix") &&
        j.contains("decoder")) {
      std::vector<std::uint64_t> rows;
      for (const auto& r : j.at("matrix")) {
        const BitVec v = BitVec::parse(r.get<std::string>());
        if (v.size() != n) throw ValidationError("matrix row length differs from n");
        rows.push_back(v.bits());
      }
      if (static_cast<int>(rows.size()) != k) throw ValidationError("matrix row count differs from k");
      auto table = hex_unpack(j.at("decoder").get<std::string>(), std::uint64_t{1} << k);
      s = point_scheme(kind, SketchInstance(n, std::move(rows), table_decoder(std::move(table))));
    } else if (kind == SketchKind::deterministic) {
      s = deterministic_sketch(builtin(fn, caps), caps);
    } else if (kind == SketchKind::sign_trick) {
      std::vector<std::uint64_t> rows;
      for (const auto& r : j.at("matrix")) rows.push_back(BitVec::parse(r.get<std::string>()).bits());
      s = sign_trick_sketch(builtin(fn, caps), Subspace::span_of(n, rows), caps).scheme;
    } else if (kind == SketchKind::random_parity) {
      const auto mode = params.value("decoder", std::string("membership")) == "ml" ? ParityDecoder::ml : ParityDecoder::membership;
      s = random_parity_sketch(builtin(fn, caps), parse_rational(params.at("delta").get<std::string>()), seed, mode, caps);
    } else {
      LtfSketchOptions opt;
      opt.stage1_vote = params.value("stage1_vote", opt.stage1_vote);
      opt.bucket_constant = params.value("bucket_constant", opt.bucket_constant);
      if (params.contains("stage1_rows") && params.value("staged", false)) opt.stage1_repetitions = params.at("stage1_rows").get<int>();
      s = ltf_sketch(resolve_ltf(fn, caps), parse_rational(params.at("delta").get<std::string>()), seed, opt, caps);
    }
    if (s.n != n || s.k != k) throw ValidationError("rebuilt scheme does not match the recorded n and k");
    s.seed = seed;
    s.fn = fn;
    if (!params.empty()) s.params = params;
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed sketch scheme JSON: ") + e.what());
  }
}

}  // namespace f2lab
