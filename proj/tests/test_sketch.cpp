#include "doctest.h"

#include <cmath>

#include "f2lab/boolfn.hpp"
#include "f2lab/fourierdim.hpp"
#include "f2lab/ltf.hpp"
#include "f2lab/sketch.hpp"
#include "gen.hpp"

using namespace f2lab;

namespace {

EvalOptions exact_eval() {
  EvalOptions o;
  o.exact = true;
  return o;
}

Rational exact_uniform_error(const SketchInstance& inst, const BoolFun& f) {
  std::int64_t wrong = 0;
  for (std::uint64_t x = 0; x < f.size(); ++x) wrong += inst(x) != f(x);
  return Rational(wrong, static_cast<std::int64_t>(f.size()));
}

LtfSpec ltf_of(std::initializer_list<const char*> ws, const char* theta) {
  std::vector<Rational> w;
  for (const char* s : ws) w.push_back(parse_rational(s));
  return make_ltf(w, parse_rational(theta));
}

}  // namespace

TEST_CASE("deterministic_sketch examples") {
  const auto par = deterministic_sketch(builtin("parity:5"));
  CHECK(par.k == 1);
  const auto inst = par.sample(0);
  CHECK(inst.decode(SketchValue{0}) == 1);
  CHECK(inst.decode(SketchValue{1}) == -1);

  const auto maj = builtin("maj:3");
  const auto m = deterministic_sketch(maj);
  CHECK(m.k == 3);
  for (std::uint64_t x = 0; x < 8; ++x) CHECK(m.sample(0)(x) == maj(x));

  CHECK(deterministic_sketch(builtin("addr:4")).k == 6);
}

TEST_CASE("deterministic_sketch has zero error on random functions") {
  for (std::uint64_t c = 0; c < 40; ++c) {
    auto rng = gen::rng_for("det-sketch", c);
    const auto f = gen::skewed_boolfun(static_cast<int>(rng.below(9)), rng);
    const auto s = deterministic_sketch(f);
    CHECK(s.k == exact_dim(f).d);
    const auto e = eval_sketch_error(s, f, exact_eval());
    CHECK(e.per_x_max == Rational(0));
    CHECK(e.uniform_avg == Rational(0));
  }
}

TEST_CASE("sign_trick_sketch examples") {
  const auto maj = builtin("maj:3");
  const auto full = sign_trick_sketch(maj, Subspace::full(3));
  CHECK(full.achieved_error == Rational(0));

  const auto a = Subspace::span_of(3, std::vector<std::uint64_t>{BitVec::parse("100").bits(), BitVec::parse("010").bits()});
  const auto st = sign_trick_sketch(maj, a);
  CHECK(st.weight == Rational(1, 2));
  CHECK(st.achieved_error <= Rational(1, 4));
  CHECK(st.scheme.k == 2);
  const auto e = eval_sketch_error(st.scheme, maj, exact_eval());
  CHECK(e.uniform_avg == st.achieved_error);
  CHECK(e.uniform_avg <= Rational(1, 4));

  const auto rec = builtin("maj3k:2");
  const auto w3 = max_subspace_weight(wht(rec), 3);
  const auto r = sign_trick_sketch(rec, w3.witness);
  CHECK(r.weight == w3.weight);
  CHECK(exact_uniform_error(r.scheme.sample(0), rec) == r.achieved_error);
  CHECK(r.achieved_error <= (Rational(1) - w3.weight) / 2);
}

TEST_CASE("sign_trick error is at most (1 - weight) / 2 on every profile witness") {
  for (std::uint64_t c = 0; c < 25; ++c) {
    auto rng = gen::rng_for("sign-trick", c);
    const int n = 1 + static_cast<int>(rng.below(8));
    const auto f = gen::skewed_boolfun(n, rng);
    const auto p = dim_profile(wht(f));
    for (int d = 0; d <= n; ++d) {
      const auto st = sign_trick_sketch(f, p.witnesses[d]);
      CHECK(st.weight == p.w[d]);
      CHECK(st.achieved_error <= (Rational(1) - p.w[d]) / 2);
      CHECK(exact_uniform_error(st.scheme.sample(0), f) == st.achieved_error);
      // Never better than the best decoder on the same sketch.
      CHECK(st.achieved_error >= optimal_sketch_error(f, p.witnesses[d]));
    }
  }
}

TEST_CASE("random_parity_width") {
  CHECK(random_parity_width(9, Rational(1, 8)) == 8);
  CHECK(random_parity_width(0, Rational(1, 8)) == 0);
  CHECK(random_parity_width(1, Rational(1, 4)) == 3);
  CHECK(random_parity_width(8, Rational(1, 4)) == 6);
}

TEST_CASE("random_parity_sketch examples") {
  const auto c = BoolFun::constant(5, -1);
  const auto s0 = random_parity_sketch(c, Rational(1, 8), 1);
  CHECK(s0.k == 0);
  const auto e0 = eval_sketch_error(s0, c, exact_eval());
  CHECK(e0.per_x_max == Rational(0));

  const auto ham = builtin("hamge:8:7");
  CHECK(ham.count_minus() == 9);
  CHECK(random_parity_sketch(ham, Rational(1, 8), 1).k == 8);

  // OR of negated inputs on n = 4: the minority side is {1111}. Exhaustive
  // over all 2^12 matrices: an x != 1111 errs iff M(x + 1111) = 0, probability 2^-3.
  const auto nor = BoolFun::from_predicate(4, [](std::uint64_t x) { return x != 0b1111; });
  const auto s = random_parity_sketch(nor, Rational(1, 4), 7);
  CHECK(s.k == 3);
  const auto e = eval_sketch_error(s, nor, exact_eval());
  CHECK(e.per_x_max == Rational(1, 8));
  CHECK(e.uniform_avg == Rational(15, 128));
}

TEST_CASE("random_parity_sketch per-x error stays below delta") {
  // Exact over all matrices for small k n, random functions.
  for (std::uint64_t c = 0; c < 12; ++c) {
    auto rng = gen::rng_for("parity-exact", c);
    const int n = 2 + static_cast<int>(rng.below(2));
    const auto f = gen::skewed_boolfun(n, rng);
    const Rational delta(1, 2 + static_cast<std::int64_t>(rng.below(3)));
    const auto s = random_parity_sketch(f, delta, c);
    if (!s.support) continue;
    CHECK(eval_sketch_error(s, f, exact_eval()).per_x_max <= delta);
  }
  // Monte Carlo on hamge:8:7 with every input probed.
  const auto ham = builtin("hamge:8:7");
  const auto s = random_parity_sketch(ham, Rational(1, 8), 3);
  EvalOptions o;
  o.exact = false;
  o.trials = 2000;
  o.inputs_per_instance = 1;
  o.seed = 5;
  for (std::uint64_t x = 0; x < 256; x += 17) o.probes.push_back(x);
  o.probes.push_back(0b01111111);
  const auto e = eval_sketch_error(s, ham, o);
  CHECK(e.probed);
  CHECK(e.per_x_ci.upper <= 1.2 * 0.125);
  CHECK(e.avg_ci.upper <= 1.2 * 0.125);
}

TEST_CASE("ML decoder is uniform-optimal per instance") {
  for (std::uint64_t c = 0; c < 10; ++c) {
    auto rng = gen::rng_for("ml", c);
    const auto f = gen::skewed_boolfun(6, rng);
    const auto s = random_parity_sketch(f, Rational(1, 4), c, ParityDecoder::ml);
    const auto m = random_parity_sketch(f, Rational(1, 4), c, ParityDecoder::membership);
    for (std::uint64_t t = 0; t < 5; ++t) {
      const auto a = s.sample(t);
      const auto b = m.sample(t);
      CHECK(a.rows() == b.rows());
      const auto sub = Subspace::span_of(6, a.rows());
      CHECK(exact_uniform_error(a, f) == optimal_sketch_error(f, sub));
      CHECK(exact_uniform_error(a, f) <= exact_uniform_error(b, f));
    }
  }
}

TEST_CASE("ltf_preprocess examples") {
  const auto spec = ltf_of({"0.5", "0.3", "0.15", "0.05"}, "0.4");
  CHECK(spec.margin == Rational(1, 20));
  const auto pre = ltf_preprocess(spec);
  CHECK(pre.arity() == 3);
  CHECK(pre.margin == pre.weights.back() / 2);
  Rational total(0);
  for (const auto& w : pre.weights) total += w;
  CHECK(total == Rational(1));
  for (std::uint64_t x = 0; x < 16; ++x) CHECK(pre.value(x & low_mask(3)) == spec.value(x));

  const auto same = ltf_of({"0.4", "0.35", "0.25"}, "0.5");
  const auto kept = ltf_preprocess(same);
  CHECK(kept.weights == same.weights);

  const auto ham = hamming_ltf(10, 3);
  CHECK(ltf_preprocess(ham).arity() == 10);
  for (std::uint64_t x = 0; x < 1024; ++x) CHECK(ham.value(x) == (std::popcount(x) >= 3));
}

TEST_CASE("ltf_preprocess keeps the truth table for random LTFs") {
  for (std::uint64_t c = 0; c < 40; ++c) {
    auto rng = gen::rng_for("ltf-pre", c);
    const int n = 1 + static_cast<int>(rng.below(16));
    std::vector<Rational> w;
    for (int i = 0; i < n; ++i) w.push_back(Rational(1 + static_cast<std::int64_t>(rng.below(1000)), 1000));
    std::sort(w.begin(), w.end(), [](const Rational& a, const Rational& b) { return a > b; });
    Rational total(0);
    for (const auto& v : w) total += v;
    // theta at an odd multiple of 1/2000 avoids hitting a subset sum exactly.
    const Rational theta = total * Rational(1 + 2 * static_cast<std::int64_t>(rng.below(1000)), 2000);
    LtfSpec spec;
    try {
      spec = make_ltf(w, theta);
    } catch (const ValidationError&) {
      continue;  // zero margin
    }
    const auto pre = ltf_preprocess(spec);
    CHECK(pre.margin > 0);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x)
      CHECK(pre.value(x & low_mask(pre.arity())) == spec.value(x));
  }
}

TEST_CASE("ltf_margin agrees with a direct scan") {
  for (std::uint64_t c = 0; c < 30; ++c) {
    auto rng = gen::rng_for("ltf-margin", c);
    const int n = 1 + static_cast<int>(rng.below(10));
    std::vector<Rational> w;
    for (int i = 0; i < n; ++i) w.push_back(Rational(1 + static_cast<std::int64_t>(rng.below(50)), 50));
    std::sort(w.begin(), w.end(), [](const Rational& a, const Rational& b) { return a > b; });
    const Rational theta(1 + static_cast<std::int64_t>(rng.below(200)), 100);
    Rational best(-1);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
      Rational s(0);
      for (int i = 0; i < n; ++i)
        if ((x >> i) & 1) s += w[i];
      const Rational d = s > theta ? s - theta : theta - s;
      if (best < 0 || d < best) best = d;
    }
    CHECK(ltf_margin(w, theta) == best);
  }
}

TEST_CASE("hamming_ltf parameters") {
  const auto h = hamming_ltf(64, 4);
  CHECK(h.theta == Rational(7, 128));
  CHECK(h.margin == Rational(1, 128));
  CHECK(h.theta / h.margin == Rational(7));
}

TEST_CASE("ltf_sketch decodes x = 0 and small LTFs") {
  const auto h = hamming_ltf(64, 4);
  const auto s = ltf_sketch(h, Rational(1, 10), 11);
  const auto plan = plan_ltf_sketch(h, Rational(1, 10));
  CHECK_FALSE(plan.staged);
  CHECK(s.k <= 64);
  CHECK(s.k <= std::ceil(8 * 7 * std::log2(7.0)));
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto inst = s.sample(t);
    for (auto w : inst.sketch(0)) CHECK(w == 0);
    CHECK(inst(0) == h.sign(0));
  }

  const auto small = ltf_of({"0.4", "0.3", "0.2", "0.1"}, "0.45");
  const auto f = BoolFun::from_predicate(4, [&](std::uint64_t x) { return small.value(x); });
  const auto ss = ltf_sketch(small, Rational(1, 8), 2);
  EvalOptions o;
  o.exact = false;
  o.trials = 4000;
  o.inputs_per_instance = 4;
  o.seed = 9;
  for (std::uint64_t x = 0; x < 16; ++x) o.probes.push_back(x);
  const auto e = eval_sketch_error(ss, f, o);
  CHECK(e.per_x_ci.upper <= 1.2 * 0.125);
}

TEST_CASE("staged ltf plan for a large theta / margin ratio") {
  const auto spec = ltf_of({"0.5", "0.49", "0.01"}, "0.505");
  const auto plan = plan_ltf_sketch(spec, Rational(1, 10));
  CHECK(plan.staged);
  CHECK(plan.stage1_rows == 48);
  CHECK(plan.buckets == static_cast<std::uint64_t>(std::ceil(100 * std::pow(plan.ratio, 4))));
  const auto s = ltf_sketch(spec, Rational(1, 10), 4);
  for (std::uint64_t t = 0; t < 5; ++t) {
    const auto inst = s.sample(t);
    for (std::uint64_t x = 0; x < 8; ++x) CHECK(inst(x) == spec.sign(x));
  }
}

TEST_CASE("scheme JSON round trip") {
  auto rng = gen::rng_for("scheme-json", 0);
  const auto f = gen::boolfun(6, rng);
  const auto p = dim_profile(wht(f));
  std::vector<SketchScheme> schemes{deterministic_sketch(f), sign_trick_sketch(f, p.witnesses[3]).scheme,
                                    random_parity_sketch(f, Rational(1, 4), 17),
                                    random_parity_sketch(f, Rational(1, 4), 17, ParityDecoder::ml)};
  for (auto& s : schemes) s.fn = "tt:inline";
  for (const auto& s : schemes) {
    auto j = scheme_to_json(s);
    if (s.kind == SketchKind::random_parity) continue;  // rebuilt from fn, covered below
    const auto back = scheme_from_json(j);
    CHECK(back.k == s.k);
    CHECK(scheme_to_json(back) == j);
    for (std::uint64_t x = 0; x < 64; ++x) CHECK(back.sample(0)(x) == s.sample(0)(x));
  }
  auto rp = random_parity_sketch(builtin("hamge:8:7"), Rational(1, 8), 23);
  rp.fn = "hamge:8:7";
  const auto back = scheme_from_json(scheme_to_json(rp));
  CHECK(back.k == rp.k);
  for (std::uint64_t t = 0; t < 5; ++t) {
    CHECK(back.sample(t).rows() == rp.sample(t).rows());
    for (std::uint64_t x = 0; x < 256; x += 7) CHECK(back.sample(t)(x) == rp.sample(t)(x));
  }
  auto lt = ltf_sketch(hamming_ltf(64, 4), Rational(1, 10), 5);
  lt.fn = "hamge:64:4";
  const auto lb = scheme_from_json(scheme_to_json(lt));
  CHECK(lb.sample(3).rows() == lt.sample(3).rows());
}

TEST_CASE("hex pack round trip") {
  for (std::uint64_t c = 0; c < 30; ++c) {
    auto rng = gen::rng_for("hex", c);
    std::vector<std::int8_t> t(rng.below(70));
    for (auto& v : t) v = (rng.bits() & 1) ? -1 : 1;
    CHECK(hex_unpack(hex_pack(t), t.size()) == t);
  }
  CHECK_THROWS_AS(hex_unpack("zz", 8), ValidationError);
}

TEST_CASE("Monte-Carlo evaluation is reproducible and partition independent") {
  const auto ham = builtin("hamge:8:7");
  const auto s = random_parity_sketch(ham, Rational(1, 8), 3);
  EvalOptions o;
  o.exact = false;
  o.trials = 3000;
  o.seed = 4;
  const auto a = eval_sketch_error(s, ham, o);
  o.workers = 3;
  const auto b = eval_sketch_error(s, ham, o);
  CHECK(a.errors == b.errors);
  CHECK(sketch_error_json(a) == sketch_error_json(b));
}
