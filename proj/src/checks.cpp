#include "f2lab/checks.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "f2lab/boolfn.hpp"
#include "f2lab/commsim.hpp"
#include "f2lab/fourierdim.hpp"
#include "f2lab/gf2.hpp"
#include "f2lab/random.hpp"
#include "f2lab/sketch.hpp"
#include "f2lab/streamsim.hpp"

namespace f2lab {

namespace {

BoolFun random_function(int n, Rng& rng) {
  std::vector<std::int8_t> t(std::size_t{1} << n);
  for (auto& v : t) v = (rng.bits() & 1) ? -1 : 1;
  return BoolFun(n, std::move(t));
}

BoolFun random_balanced(int m, Rng& rng) {
  std::vector<std::int8_t> t(std::size_t{1} << m, 1);
  for (std::size_t i = 0; i < t.size() / 2; ++i) t[i] = -1;
  for (std::size_t i = t.size(); i > 1; --i) std::swap(t[i - 1], t[rng.below(i)]);
  return BoolFun(m, std::move(t));
}

Subspace random_subspace(int n, int d, Rng& rng) {
  std::vector<std::uint64_t> vs;
  Subspace s(n);
  while (s.dim() < d) {
    vs.push_back(rng.bits(n));
    s = Subspace::span_of(n, vs);
  }
  return s;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(4);
  out << v;
  return out.str();
}

// (1 - sqrt(w)) / 2 <= e, decided without square roots.
bool above_sqrt_floor(const Rational& e, const Rational& w) {
  const Rational t = Rational(1) - 2 * e;
  return t <= 0 || t * t <= w;
}

CheckResult parseval_exact(const CheckOptions& opt) {
  CheckResult r;
  std::uint64_t checked = 0, failures = 0;
  nlohmann::json bad = nlohmann::json::array();
  auto check = [&](const BoolFun& f, const std::string& label) {
    const Spectrum s = wht(f, opt.caps);
    std::uint64_t total = 0;
    for (std::uint64_t a = 0; a < s.coeffs.size(); ++a) total += static_cast<std::uint64_t>(s.sq(a));
    ++checked;
    if (total != std::uint64_t{1} << (2 * f.arity())) {
      ++failures;
      bad.push_back(label);
    }
  };
  for (const auto& name : builtin_examples()) check(builtin(name, opt.caps), name);
  for (int n = 1; n <= 12; ++n)
    for (int i = 0; i < 100; ++i) {
      Rng rng(opt.seed, "check-parseval", static_cast<std::uint64_t>(n) * 100 + i);
      check(random_function(n, rng), "random n=" + std::to_string(n) + " #" + std::to_string(i));
    }
  r.pass = failures == 0;
  r.summary = std::to_string(checked) + " functions, sum of squared coefficients = 4^n exactly for " +
              std::to_string(checked - failures);
  r.details = {{"checked", checked}, {"failures", bad}};
  r.limit_seconds = 10;
  return r;
}

CheckResult recmaj(const CheckOptions& opt) {
  CheckResult r;
  const int k = opt.k;
  if (k < 1) throw ValidationError("recmaj-4d-over-n needs --k >= 1");
  const BoolFun f = builtin("maj3k:" + std::to_string(k), opt.caps);
  const int n = f.arity();
  const Spectrum s = wht(f, opt.caps);
  const DimProfile p = dim_profile(s, {opt.caps, opt.workers, false});
  bool ok = true;
  nlohmann::json rows = nlohmann::json::array();
  for (int d = 0; d <= n; ++d) {
    const Rational bound(4 * d, n);
    const bool holds = p.w[d] <= bound;
    ok = ok && holds;
    rows.push_back({{"d", d}, {"w_d", to_string(p.w[d])}, {"bound", to_string(bound)}, {"holds", holds}});
  }
  std::uint64_t standard_bad = 0;
  Rational tightest = 0;
  for (std::uint64_t set = 0; set < (std::uint64_t{1} << n); ++set) {
    const Rational w = subspace_weight(s, Subspace::standard(n, set));
    const int size = std::popcount(set);
    if (w > Rational(size, n)) ++standard_bad;
    if (size > 0) tightest = std::max(tightest, w / Rational(size, n));
  }
  r.pass = ok && standard_bad == 0;
  r.summary = "maj3k:" + std::to_string(k) + " (n=" + std::to_string(n) + "): w_d <= 4d/n for all d " +
              (ok ? "holds" : "FAILS") + "; standard subspaces within |S|/n: " +
              std::to_string((std::uint64_t{1} << n) - standard_bad) + "/" + std::to_string(std::uint64_t{1} << n);
  r.details = {{"n", n},
               {"profile", rows},
               {"standard_subspaces", std::uint64_t{1} << n},
               {"standard_violations", standard_bad},
               {"max_ratio_to_size_over_n", to_string(tightest)}};
  r.limit_seconds = 600;
  return r;
}

CheckResult address(const CheckOptions& opt) {
  CheckResult r;
  const int data = 4;
  const BoolFun f = builtin("addr:" + std::to_string(data), opt.caps);
  const DimProfile p = dim_profile(wht(f, opt.caps), {opt.caps, opt.workers, false});
  bool ok = true;
  nlohmann::json rows = nlohmann::json::array();
  std::vector<int> equal;
  for (int d = 0; d <= f.arity(); ++d) {
    const Rational bound(d, data);
    const bool holds = p.w[d] <= bound;
    ok = ok && holds;
    if (p.w[d] == bound) equal.push_back(d);
    rows.push_back({{"d", d}, {"w_d", to_string(p.w[d])}, {"bound", to_string(bound)}, {"holds", holds}});
  }
  r.pass = ok;
  std::string eq;
  for (int d : equal) eq += (eq.empty() ? "" : ",") + std::to_string(d);
  r.summary = "addr:4 (n=6): w_d <= d/4 for all d " + std::string(ok ? "holds" : "FAILS") + "; equality at d in {" +
              eq + "}";
  r.details = {{"profile", rows}, {"equality_at", equal}};
  r.limit_seconds = 60;
  return r;
}

CheckResult domination(const CheckOptions& opt) {
  CheckResult r;
  const int total = 500;
  int failures = 0;
  nlohmann::json bad = nlohmann::json::array();
  for (int t = 0; t < total; ++t) {
    Rng rng(opt.seed, "check-domination", t);
    const int n = 1 + static_cast<int>(rng.below(10));
    const int d = 1 + static_cast<int>(rng.below(std::min(5, n)));
    const Subspace l = random_subspace(n, d, rng);
    std::string why;
    try {
      const auto dec = standard_domination_decompose(l, opt.caps);
      if (!dec.s1.is_standard() || !dec.s2.is_standard() || !dec.s3.is_standard()) why = "not standard";
      else if (dec.s1.dim() > d - 1 || dec.s2.dim() > d || dec.s3.dim() > std::min(2 * d, n)) why = "dimension";
      std::set<std::uint64_t> odd_l;
      for (const auto& v : odd_set(l, opt.caps)) odd_l.insert(v.bits());
      std::set<std::uint64_t> left, right;
      for (const auto& [u, v] : dec.matching) {
        const bool in_std = parity(u.bits()) &&
                            (dec.s1.contains(u) || dec.s2.contains(u) || dec.s3.contains(u));
        if (!in_std || !odd_l.count(v.bits()) || !u.dominates(v)) why = "bad edge";
        left.insert(u.bits());
        right.insert(v.bits());
      }
      if (left.size() != dec.matching.size() || right.size() != dec.matching.size()) why = "not a matching";
      if (right.size() != odd_l.size()) why = "odd set not covered";
    } catch (const std::exception& e) {
      why = e.what();
    }
    if (!why.empty()) {
      ++failures;
      if (bad.size() < 10) bad.push_back({{"trial", t}, {"n", n}, {"d", d}, {"reason", why}});
    }
  }
  r.pass = failures == 0;
  r.summary = std::to_string(total) + " random subspaces (n <= 10, d <= 5), verified decompositions: " +
              std::to_string(total - failures) + ", failures: " + std::to_string(failures);
  r.details = {{"trials", total}, {"failures", failures}, {"examples", bad}};
  r.limit_seconds = 60;
  return r;
}

std::vector<std::pair<std::string, BoolFun>> sandwich_corpus(const CheckOptions& opt) {
  std::vector<std::pair<std::string, BoolFun>> out;
  for (const char* name : {"parity:4", "parity:3", "and:4", "or:4", "and:3", "maj:3", "maj3k:1", "addr:2", "ip:4",
                           "ip:2", "hamge:4:2", "hamge:4:3", "chi:1010", "chi:0110", "const:3", "maj:1"})
    out.emplace_back(name, builtin(name, opt.caps));
  int i = 0;
  while (out.size() < 50) {
    Rng rng(opt.seed, "check-sandwich", static_cast<std::uint64_t>(i));
    const int n = 2 + static_cast<int>(rng.below(3));
    out.emplace_back("random n=" + std::to_string(n) + " #" + std::to_string(i), random_function(n, rng));
    ++i;
  }
  return out;
}

CheckResult sandwich(const CheckOptions& opt) {
  CheckResult r;
  const auto corpus = sandwich_corpus(opt);
  int part12_fail = 0, part3_fail = 0, part3_checked = 0;
  nlohmann::json bad = nlohmann::json::array();
  for (const auto& [name, f] : corpus) {
    const int n = f.arity();
    const DimProfile p = dim_profile(wht(f, opt.caps), {opt.caps, opt.workers, false});
    for (int d = 0; d <= n; ++d) {
      const Rational e = exhaustive_sketch_error(f, d, opt.caps);
      const bool upper = e <= (Rational(1) - p.w[d]) / 2;
      const bool lower = above_sqrt_floor(e, p.w[d]);
      if (!upper || !lower) {
        ++part12_fail;
        bad.push_back({{"fn", name}, {"d", d}, {"error", to_string(e)}, {"w_d", to_string(p.w[d])}});
      }
    }
    Rational need = 0;
    for (int d = 2; d <= n; ++d) need = std::max(need, p.gaps[d] / 4);
    if (n >= 2 && need > 0) {
      ++part3_checked;
      const auto best = best_one_bit_error(f, PairDistribution::uniform(), opt.workers, opt.caps);
      if (best.error < need) {
        ++part3_fail;
        bad.push_back({{"fn", name}, {"one_bit_error", to_string(best.error)}, {"gap_bound", to_string(need)}});
      }
    }
  }
  r.pass = part12_fail == 0 && part3_fail == 0;
  r.summary = std::to_string(corpus.size()) + " functions: optimal d-sketch error within [(1-sqrt w_d)/2, (1-w_d)/2] " +
              (part12_fail ? "FAILS " + std::to_string(part12_fail) + " times" : "always") +
              "; one-bit error >= max gap/4 on " + std::to_string(part3_checked - part3_fail) + "/" +
              std::to_string(part3_checked);
  r.details = {{"functions", corpus.size()},
               {"part12_failures", part12_fail},
               {"part3_checked", part3_checked},
               {"part3_failures", part3_fail},
               {"examples", bad}};
  r.limit_seconds = 1800;
  return r;
}

CheckResult ltf(const CheckOptions& opt) {
  CheckResult r;
  const int n = 64, k = 4;
  const Rational delta(1, 10);
  const LtfSpec spec = hamming_ltf(n, k);
  const LtfSketchPlan plan = plan_ltf_sketch(spec, delta);
  const SketchScheme scheme = ltf_sketch(spec, delta, opt.seed, {}, opt.caps);
  EvalOptions eo;
  eo.exact = false;
  eo.trials = 10000;
  eo.inputs_per_instance = 1;
  eo.seed = opt.seed;
  eo.dist = InputDist::weight;
  eo.workers = opt.workers;
  eo.caps = opt.caps;
  // Points at the threshold boundary, where errors concentrate.
  for (int w = 0; w <= 6; ++w) eo.probes.push_back(low_mask(w));
  eo.probes.push_back(low_mask(3) << 61);
  eo.probes.push_back((std::uint64_t{1} << 5) | (std::uint64_t{1} << 17) | (std::uint64_t{1} << 40) |
                      (std::uint64_t{1} << 63));
  const auto e = eval_sketch_error(scheme, [&spec](std::uint64_t x) { return spec.sign(x); }, eo);
  const double d = to_double(delta);
  const bool width_ok = scheme.k <= 64;
  const bool avg_ok = e.avg_estimate <= d && e.avg_ci.upper <= 0.12;
  const bool probe_ok = e.per_x_estimate <= d && e.per_x_ci.upper <= 0.12;
  r.pass = width_ok && avg_ok && probe_ok;
  r.summary = "hamge:64:4 (theta/m = " + fmt(plan.ratio) + "): width " + std::to_string(scheme.k) +
              " bits; error " + fmt(e.avg_estimate) + " (CP upper " + fmt(e.avg_ci.upper) + "), worst probe " +
              fmt(e.per_x_estimate) + " (CP upper " + fmt(e.per_x_ci.upper) + ") over " +
              std::to_string(e.trials) + " trials";
  r.details = {{"width", scheme.k},          {"ratio", plan.ratio},       {"staged", plan.staged},
               {"below_count", plan.below_count}, {"eval", sketch_error_json(e)}, {"params", scheme.params}};
  r.limit_seconds = 300;
  return r;
}

CheckResult onebit(const CheckOptions& opt) {
  CheckResult r;
  const int n = 4;
  const BoolFun chi = builtin("chi:1000", opt.caps);
  const Rational floor(1, 200);
  bool ok = true;
  Rational smallest = 1;
  double worst_ratio = 0;
  nlohmann::json rows = nlohmann::json::array();
  for (std::uint64_t flip = 0; flip < (std::uint64_t{1} << n); ++flip) {
    auto table = chi.table();
    table[flip] = static_cast<std::int8_t>(-table[flip]);
    const BoolFun f(n, table);
    const PairDistribution mu = sec7_for(f);
    const auto best = best_one_bit_error(f, mu, opt.workers, opt.caps);
    const auto bound = check_message_bound(f, mu.z, opt.workers, opt.caps);
    const bool row_ok = best.error > floor && bound.holds && best.searched == 65536;
    ok = ok && row_ok;
    smallest = std::min(smallest, best.error);
    worst_ratio = std::max(worst_ratio, bound.worst_value / bound.bound);
    rows.push_back({{"flip", flip},
                    {"z", mu.z},
                    {"epsilon", to_string(bound.epsilon)},
                    {"min_error", to_string(best.error)},
                    {"witness", best.witness},
                    {"max_correlation", bound.worst_value},
                    {"correlation_bound", bound.bound},
                    {"bound_holds", bound.holds}});
  }
  r.pass = ok;
  r.summary = "chi_1000 flipped at each of 16 points: min one-bit error over 65536 messages >= " +
              to_string(smallest) + " (> 1/200: " + (smallest > floor ? "yes" : "no") +
              "); correlation bound holds for every M, max ratio " + fmt(worst_ratio);
  r.details = {{"rows", rows}};
  r.limit_seconds = 600;
  return r;
}

CheckResult majority(const CheckOptions& opt) {
  CheckResult r;
  const std::vector<int> ns = {5, 7, 9, 11};
  std::vector<double> gap_scaled, err_scaled;
  nlohmann::json rows = nlohmann::json::array();
  for (int n : ns) {
    const BoolFun f = builtin("maj:" + std::to_string(n), opt.caps);
    const Spectrum s = wht(f, opt.caps);
    const Rational w = max_subspace_weight(s, n - 1, {opt.caps, opt.workers, false}).weight;
    const Rational err = exact_error(trivial_majority_protocol(n, opt.caps), f, PairDistribution::uniform(), opt.caps);
    gap_scaled.push_back(to_double(Rational(1) - w) * std::sqrt(n));
    err_scaled.push_back(to_double(err) * std::sqrt(n));
    rows.push_back({{"n", n}, {"w_n_minus_1", to_string(w)}, {"trivial_error", to_string(err)}});
  }
  auto fit = [](const std::vector<double>& v) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    bool ok = mean > 0;
    for (double x : v) ok = ok && std::abs(x - mean) <= 0.5 * mean;
    return std::pair{mean, ok};
  };
  const auto [gamma, gamma_ok] = fit(gap_scaled);
  const auto [c, c_ok] = fit(err_scaled);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i]["gap_times_sqrt_n"] = gap_scaled[i];
    rows[i]["error_times_sqrt_n"] = err_scaled[i];
  }
  r.pass = gamma_ok && c_ok;
  r.summary = "maj_n, n in {5,7,9,11}: (1 - w_{n-1}) sqrt n within 50% of gamma = " + fmt(gamma) +
              (gamma_ok ? "" : " (FAILS)") + "; trivial protocol error sqrt n within 50% of c = " + fmt(c) +
              (c_ok ? "" : " (FAILS)");
  r.details = {{"rows", rows}, {"gamma", gamma}, {"c", c}};
  r.limit_seconds = 1200;
  return r;
}

CheckResult slam_composition_extractor(const CheckOptions& opt) {
  CheckResult r;
  int slam_fail = 0;
  for (int t = 0; t < 200; ++t) {
    Rng rng(opt.seed, "check-slam", t);
    const int a_rows = 1 + static_cast<int>(rng.below(3)), n = 1 + static_cast<int>(rng.below(3));
    const int b_rows = 1 + static_cast<int>(rng.below(3)), m = 1 + static_cast<int>(rng.below(6));
    Gf2Matrix a(n), b(m);
    for (int i = 0; i < a_rows; ++i) a.push_back(rng.bits(n));
    for (int i = 0; i < b_rows; ++i) b.push_back(rng.bits(m));
    if (rank(super_slam(a, b, opt.caps)) < rank(a) * rank(b)) ++slam_fail;
  }
  int comp_fail = 0;
  for (int t = 0; t < 100; ++t) {
    Rng rng(opt.seed, "check-composition", t);
    const int n = 1 + static_cast<int>(rng.below(4));
    const int m = 1 + static_cast<int>(rng.below(12 / n));
    const BoolFun f = random_function(n, rng);
    const BoolFun g = random_balanced(m, rng);
    const BoolFun fg = compose(f, g, opt.caps);
    if (exact_dim(fg).d < exact_dim(f).d * exact_dim(g).d) ++comp_fail;
  }
  const BoolFun ip = builtin("ip:8", opt.caps);
  const Rational eps_target(1, 20);
  const auto ac = affine_structure_check(ip, 6, Rational(1, 2) - eps_target, {opt.caps, opt.workers, false});
  const Rational eps = Rational(1, 2) - ac.min_side;
  const bool ip_ok = ac.complete && ac.extractor && eps < eps_target && ac.lower_bound >= 3;
  r.pass = slam_fail == 0 && comp_fail == 0 && ip_ok;
  r.summary = "super-slam rank >= rank(A) rank(B) on " + std::to_string(200 - slam_fail) +
              "/200; dim(f o g) >= dim f dim g on " + std::to_string(100 - comp_fail) +
              "/100; ip:8 on affine subspaces of dim >= 6: min side " + to_string(ac.min_side) + ", eps " +
              to_string(eps) + (ip_ok ? " < 1/20" : " not < 1/20") + ", lower bound " +
              std::to_string(ac.lower_bound);
  r.details = {{"slam_failures", slam_fail},
               {"composition_failures", comp_fail},
               {"ip",
                {{"min_side", to_string(ac.min_side)},
                 {"epsilon", to_string(eps)},
                 {"disperser", ac.disperser},
                 {"extractor_at_1/2-1/20", ac.extractor},
                 {"lower_bound", ac.lower_bound},
                 {"cosets", ac.cosets},
                 {"complete", ac.complete},
                 {"worst_subspace", ac.worst_sub.basis().to_text()},
                 {"worst_shift", ac.worst_shift.str()}}}};
  r.limit_seconds = 900;
  return r;
}

CheckResult streaming(const CheckOptions& opt) {
  CheckResult r;
  const int n = 8;
  int automaton_fail = 0, kernel_fail = 0;
  for (int t = 0; t < 100; ++t) {
    Rng rng(opt.seed, "check-stream-matrix", t);
    const int k = 1 + static_cast<int>(rng.below(n));
    std::vector<std::uint64_t> rows(k);
    for (auto& row : rows) row = rng.bits(n);
    const SketchInstance inst(n, rows, [](const SketchValue& s) { return parity(s[0]) ? -1 : 1; });
    const Automaton a = automaton_from_sketch(inst, opt.caps);
    const auto cc = coset_check(a, opt.caps);
    if (!check_path_independence(a).holds || !cc.holds) ++automaton_fail;
    if (!(kernel(a, opt.caps).kernel == null_space(Gf2Matrix(n, rows)))) ++kernel_fail;
  }
  const BoolFun f = builtin("hamge:8:7", opt.caps);
  const Rational delta(1, 10);
  const SketchScheme scheme = random_parity_sketch(f, delta, opt.seed, ParityDecoder::membership, opt.caps);
  const auto e = stream_error(scheme, [&f](std::uint64_t x) { return f(x); }, 1, 10000, opt.seed, opt.workers);
  const bool err_ok = e.rate <= to_double(delta) + 0.02;
  r.pass = automaton_fail == 0 && kernel_fail == 0 && err_ok;
  r.summary = "100 sketch automata: path independent with coset structure " + std::to_string(100 - automaton_fail) +
              "/100, kernel = null space " + std::to_string(100 - kernel_fail) +
              "/100; model-1 error of random parities (k=" + std::to_string(scheme.k) + ") on hamge:8:7 " +
              fmt(e.rate) + " <= 0.12: " + (err_ok ? "yes" : "no");
  r.details = {{"automaton_failures", automaton_fail},
               {"kernel_failures", kernel_fail},
               {"stream_errors", e.errors},
               {"stream_trials", e.trials},
               {"rate", e.rate},
               {"ci", {e.ci.lower, e.ci.upper}},
               {"k", scheme.k}};
  r.limit_seconds = 300;
  return r;
}

using CheckFn = std::function<CheckResult(const CheckOptions&)>;

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> checks = {
      {"parseval-exact", parseval_exact},
      {"recmaj-4d-over-n", recmaj},
      {"address-d-over-n", address},
      {"domination-lemma", domination},
      {"sandwich-small-n", sandwich},
      {"ltf-sketch", ltf},
      {"onebit-theorem", onebit},
      {"majority-tightness", majority},
      {"slam-composition-extractor", slam_composition_extractor},
      {"streaming", streaming},
  };
  return checks;
}

}  // namespace

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [id, fn] : registry()) v.push_back(id);
    return v;
  }();
  return ids;
}

CheckResult run_check(const std::string& id, const CheckOptions& opt) {
  for (const auto& [name, fn] : registry()) {
    if (name != id) continue;
    const auto start = std::chrono::steady_clock::now();
    CheckResult r = fn(opt);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.id = id;
    if (r.seconds >= r.limit_seconds) {
      r.pass = false;
      r.summary += "; runtime " + fmt(r.seconds) + " s over the " + fmt(r.limit_seconds) + " s limit";
    }
    return r;
  }
  std::string known;
  for (const auto& i : check_ids()) known += " " + i;
  throw ValidationError("unknown check id '" + id + "'; known:" + known);
}

}  // namespace f2lab
