#include "f2lab/streamsim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "f2lab/parallel.hpp"
#include "f2lab/random.hpp"

namespace f2lab {

std::uint64_t Stream::freq(std::size_t begin, std::size_t end) const {
  std::uint64_t v = 0;
  for (std::size_t t = begin; t < end; ++t) v ^= std::uint64_t{1} << (updates[t] - 1);
  return v;
}

void Stream::validate() const {
  if (n < 1 || n > kMaxBitVecDim) throw ValidationError("stream arity out of range: " + std::to_string(n));
  for (int i : updates)
    if (i < 1 || i > n) throw ValidationError("stream index out of range: " + std::to_string(i));
}

std::string stream_to_text(const Stream& s) {
  std::string out = "n=" + std::to_string(s.n) + "\n";
  for (int i : s.updates) out += std::to_string(i) + "\n";
  return out;
}

Stream parse_stream(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  Stream s;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line.rfind("n=", 0) != 0) throw ParseError("stream file must start with n=<int>", lineno);
      try {
        std::size_t used = 0;
        s.n = std::stoi(line.substr(2), &used);
        if (used != line.size() - 2) throw std::invalid_argument("trailing");
      } catch (const std::logic_error&) {
        throw ParseError("bad arity in stream header", lineno);
      }
      if (s.n < 1 || s.n > kMaxBitVecDim) throw ParseError("stream arity out of range", lineno);
      header = true;
      continue;
    }
    int idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoi(line, &used);
      if (used != line.size()) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw ParseError("stream update is not an integer", lineno);
    }
    if (idx < 1 || idx > s.n) throw ParseError("stream index out of range [1, n]", lineno);
    s.updates.push_back(idx);
  }
  if (!header) throw ParseError("empty stream file", std::max(lineno, 1));
  return s;
}

Stream load_stream(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open stream file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_stream(buf.str());
}

std::size_t default_model2_length(int n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(4.0 * n * std::log(static_cast<double>(n)))));
}

GeneratedStream gen_stream(int model, int n, std::uint64_t seed, std::optional<std::size_t> len) {
  if (n < 1 || n > kMaxBitVecDim) throw ValidationError("stream arity out of range: " + std::to_string(n));
  GeneratedStream g;
  g.stream.n = n;
  auto& u = g.stream.updates;
  if (model == 1) {
    if (len) throw ValidationError("model 1 streams have no length parameter");
    Rng rng(seed, "stream-model1");
    for (int half = 0; half < 2; ++half) {
      const std::size_t begin = u.size();
      for (int i = 1; i <= n; ++i)
        if (rng.bits() & 1) u.push_back(i);
      for (std::size_t t = u.size() - begin; t > 1; --t) std::swap(u[begin + t - 1], u[begin + rng.below(t)]);
      if (half == 0) g.split = u.size();
    }
    return g;
  }
  if (model != 2) throw ValidationError("stream model must be 1 or 2");
  Rng rng(seed, "stream-model2");
  const std::size_t length = len.value_or(default_model2_length(n));
  u.resize(length);
  for (auto& i : u) i = 1 + static_cast<int>(rng.below(n));
  g.split = length / 2;
  std::uint64_t seen[2] = {0, 0};
  for (std::size_t t = 0; t < length; ++t) seen[t >= g.split] |= std::uint64_t{1} << (u[t] - 1);
  g.covered = seen[0] == low_mask(n) && seen[1] == low_mask(n);
  return g;
}

void Automaton::validate() const {
  if (n < 1 || n > kMaxBitVecDim) throw ValidationError("automaton arity out of range");
  if (states == 0) throw ValidationError("automaton has no states");
  if (initial >= states) throw ValidationError("automaton initial state out of range");
  if (delta.size() != static_cast<std::size_t>(states) * n) throw ValidationError("automaton delta table is not total");
  if (output.size() != states) throw ValidationError("automaton output table is not total");
  for (auto t : delta)
    if (t >= states) throw ValidationError("automaton transition to a missing state");
  for (auto o : output)
    if (o != 1 && o != -1) throw ValidationError("automaton outputs must be +1 or -1");
}

nlohmann::json automaton_to_json(const Automaton& a) {
  nlohmann::json delta = nlohmann::json::array();
  for (std::uint32_t s = 0; s < a.states; ++s) {
    nlohmann::json row = nlohmann::json::array();
    for (int i = 0; i < a.n; ++i) row.push_back(a.step(s, i));
    delta.push_back(std::move(row));
  }
  nlohmann::json out = nlohmann::json::array();
  for (auto o : a.output) out.push_back(static_cast<int>(o));
  return {{"format", "f2lab-automaton/1"}, {"n", a.n},         {"states", a.states},
          {"initial", a.initial},          {"delta", delta},   {"output", out}};
}

Automaton automaton_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "f2lab-automaton/1") != "f2lab-automaton/1")
      throw ValidationError("not an f2lab automaton (format field)");
    Automaton a;
    a.n = j.at("n").get<int>();
    a.states = j.at("states").get<std::uint32_t>();
    a.initial = j.at("initial").get<std::uint32_t>();
    const auto& delta = j.at("delta");
    if (!delta.is_array() || delta.size() != a.states) throw ValidationError("automaton delta needs one row per state");
    for (const auto& row : delta) {
      if (!row.is_array() || row.size() != static_cast<std::size_t>(a.n))
        throw ValidationError("automaton delta rows need n entries");
      for (const auto& t : row) a.delta.push_back(t.get<std::uint32_t>());
    }
    for (const auto& o : j.at("output")) a.output.push_back(static_cast<std::int8_t>(o.get<int>()));
    a.validate();
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed automaton JSON: ") + e.what());
  }
}

Automaton automaton_from_sketch(const SketchInstance& inst, const Caps& caps) {
  Automaton a;
  a.n = inst.n();
  std::unordered_map<SketchValue, std::uint32_t, SketchValueHash> id;
  std::vector<SketchValue> values{inst.zero()};
  id.emplace(values[0], 0);
  for (std::size_t s = 0; s < values.size(); ++s) {
    for (int i = 0; i < a.n; ++i) {
      SketchValue next = values[s];
      const auto& col = inst.column(i);
      for (std::size_t w = 0; w < next.size(); ++w) next[w] ^= col[w];
      auto [it, inserted] = id.emplace(next, static_cast<std::uint32_t>(values.size()));
      if (inserted) {
        if (values.size() >= (std::size_t{1} << caps.max_sketch_table_bits))
          throw CapExceeded("sketch automaton needs more than 2^" + std::to_string(caps.max_sketch_table_bits) +
                            " states");
        values.push_back(next);
      }
      a.delta.push_back(it->second);
    }
  }
  a.states = static_cast<std::uint32_t>(values.size());
  a.output.reserve(values.size());
  for (const auto& v : values) a.output.push_back(static_cast<std::int8_t>(inst.decode(v)));
  return a;
}

StreamRun run(const SketchInstance& inst, const Stream& s) {
  if (s.n != inst.n()) throw ValidationError("stream arity does not match the sketch");
  s.validate();
  StreamRun r;
  r.sketch_state = inst.zero();
  for (int i : s.updates) {
    const auto& col = inst.column(i - 1);
    for (std::size_t w = 0; w < col.size(); ++w) r.sketch_state[w] ^= col[w];
  }
  r.output = inst.decode(r.sketch_state);
  r.space_bits = inst.k();
  return r;
}

std::vector<std::uint32_t> reachable_states(const Automaton& a) {
  std::vector<char> seen(a.states, 0);
  std::vector<std::uint32_t> order{a.initial};
  seen[a.initial] = 1;
  for (std::size_t q = 0; q < order.size(); ++q)
    for (int i = 0; i < a.n; ++i) {
      const auto t = a.step(order[q], i);
      if (!seen[t]) {
        seen[t] = 1;
        order.push_back(t);
      }
    }
  return order;
}

StreamRun run(const Automaton& a, const Stream& s) {
  if (s.n != a.n) throw ValidationError("stream arity does not match the automaton");
  s.validate();
  StreamRun r;
  r.state = a.initial;
  for (int i : s.updates) r.state = a.step(r.state, i - 1);
  r.output = a.output[r.state];
  r.space_bits = std::log2(static_cast<double>(reachable_states(a).size()));
  return r;
}

namespace {

// BFS parents from the initial state; path_to(s) is a shortest stream reaching s.
struct Bfs {
  std::vector<std::uint32_t> order;
  std::vector<std::int64_t> parent;
  std::vector<int> via;

  explicit Bfs(const Automaton& a) : parent(a.states, -1), via(a.states, 0) {
    std::vector<char> seen(a.states, 0);
    order.push_back(a.initial);
    seen[a.initial] = 1;
    for (std::size_t q = 0; q < order.size(); ++q)
      for (int i = 0; i < a.n; ++i) {
        const auto t = a.step(order[q], i);
        if (!seen[t]) {
          seen[t] = 1;
          parent[t] = order[q];
          via[t] = i + 1;
          order.push_back(t);
        }
      }
  }

  std::vector<int> path_to(std::uint32_t s) const {
    std::vector<int> p;
    while (parent[s] >= 0) {
      p.push_back(via[s]);
      s = static_cast<std::uint32_t>(parent[s]);
    }
    std::reverse(p.begin(), p.end());
    return p;
  }
};

void require_enumerable(const Automaton& a, const Caps& caps) {
  if (a.n > caps.max_arity) throw CapExceeded("kernel extraction walks all 2^n frequency vectors; n <= " +
                                              std::to_string(caps.max_arity));
}

// state_of[x] = x * initial, built from x without its lowest bit.
std::vector<std::uint32_t> state_table(const Automaton& a) {
  std::vector<std::uint32_t> st(std::size_t{1} << a.n);
  st[0] = a.initial;
  for (std::uint64_t x = 1; x < st.size(); ++x) st[x] = a.step(st[x & (x - 1)], std::countr_zero(x));
  return st;
}

}  // namespace

PathIndependence check_path_independence(const Automaton& a) {
  a.validate();
  const Bfs bfs(a);
  PathIndependence out;
  for (auto s : bfs.order) {
    for (int i = 0; i < a.n; ++i) {
      const auto si = a.step(s, i);
      if (a.step(si, i) != s) {
        out.holds = false;
        out.first = {a.n, bfs.path_to(s)};
        out.first.updates.push_back(i + 1);
        out.first.updates.push_back(i + 1);
        out.second = {a.n, bfs.path_to(s)};
        return out;
      }
      for (int j = i + 1; j < a.n; ++j) {
        if (a.step(si, j) != a.step(a.step(s, j), i)) {
          out.holds = false;
          out.first = {a.n, bfs.path_to(s)};
          out.second = out.first;
          out.first.updates.insert(out.first.updates.end(), {i + 1, j + 1});
          out.second.updates.insert(out.second.updates.end(), {j + 1, i + 1});
          return out;
        }
      }
    }
  }
  return out;
}

KernelResult kernel(const Automaton& a, const Caps& caps) {
  require_enumerable(a, caps);
  const auto path = check_path_independence(a);
  if (!path.holds) {
    auto show = [](const Stream& s) {
      std::string t = "[";
      for (std::size_t i = 0; i < s.updates.size(); ++i) t += (i ? "," : "") + std::to_string(s.updates[i]);
      return t + "]";
    };
    throw ValidationError("automaton is not path independent: streams " + show(path.first) + " and " +
                          show(path.second) + " have equal freq but end in different states");
  }
  const auto st = state_table(a);
  std::vector<std::uint64_t> members;
  for (std::uint64_t x = 0; x < st.size(); ++x)
    if (st[x] == a.initial) members.push_back(x);
  KernelResult r;
  r.kernel = Subspace::span_of(a.n, members);
  if ((std::uint64_t{1} << r.kernel.dim()) != members.size())
    throw std::logic_error("kernel of a path-independent automaton is not closed under addition");
  r.reachable = reachable_states(a).size();
  return r;
}

CosetCheck coset_check(const Automaton& a, const Caps& caps) {
  require_enumerable(a, caps);
  CosetCheck out;
  out.path = check_path_independence(a);
  if (!out.path.holds) return out;
  out.kernel = kernel(a, caps).kernel;
  const auto st = state_table(a);
  // Same coset => same state, checked on the kernel basis.
  for (std::uint64_t x = 0; x < st.size(); ++x)
    for (auto b : out.kernel.basis_bits())
      if (st[x] != st[x ^ b]) {
        out.witness_x = x;
        out.witness_y = x ^ b;
        return out;
      }
  // Different cosets => different states: one representative per coset.
  std::unordered_map<std::uint32_t, std::uint64_t> first;
  for (std::uint64_t x = 0; x < st.size(); ++x) {
    if (out.kernel.reduce(x) != x) continue;
    auto [it, inserted] = first.emplace(st[x], x);
    if (!inserted && out.witness_x == out.witness_y) {
      out.witness_x = it->second;
      out.witness_y = x;
    }
  }
  out.distinct_states = first.size();
  out.expected_states = std::uint64_t{1} << (a.n - out.kernel.dim());
  out.holds = out.distinct_states == out.expected_states && reachable_states(a).size() == out.expected_states;
  return out;
}

StreamExperiment stream_error(const SketchScheme& scheme, const Oracle& f, int model, std::uint64_t trials,
                              std::uint64_t seed, int workers) {
  workers = std::max(1, workers);
  std::vector<std::uint64_t> errors(workers, 0);
  run_workers(workers, [&](int w) {
    for (std::uint64_t t = static_cast<std::uint64_t>(w); t < trials; t += static_cast<std::uint64_t>(workers)) {
      const auto g = gen_stream(model, scheme.n, derive_seed(seed, "stream-trial", t));
      const auto inst = scheme.sample(t);
      if (run(inst, g.stream).output != f(g.stream.freq())) ++errors[w];
    }
  });
  StreamExperiment e;
  e.trials = trials;
  for (auto c : errors) e.errors += c;
  e.rate = trials ? static_cast<double>(e.errors) / static_cast<double>(trials) : 0.0;
  e.ci = clopper_pearson(e.errors, trials);
  return e;
}

nlohmann::json space_lb_report(const BoolFun& f, const SearchOptions& opt) {
  const Spectrum s = wht(f, opt.caps);
  const Rational third(1, 3);
  int d = 0;
  Rational w = 0;
  for (; d <= f.arity(); ++d) {
    w = max_subspace_weight(s, d, opt).weight;
    if (w >= third) break;
  }
  return {{"n", f.arity()},
          {"random_stream",
           {{"bits_at_least", d}, {"w_d", to_string(w)}, {"error", "1/3"}, {"model", "uniform freq, linear sketch"}}},
          {"adversarial_stream",
           {{"statement", "space >= R^lin_{6 delta}(f) - O(log n + log(1/delta))"},
            {"note", "randomized linear sketch complexity at error 6 delta, not computed"}}}};
}

}  // namespace f2lab
