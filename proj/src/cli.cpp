#include "f2lab/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "f2lab/boolfn.hpp"
#include "f2lab/checks.hpp"
#include "f2lab/commsim.hpp"
#include "f2lab/error.hpp"
#include "f2lab/fourierdim.hpp"
#include "f2lab/parallel.hpp"
#include "f2lab/sketch.hpp"
#include "f2lab/streamsim.hpp"

namespace f2lab {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct Globals {
  bool json_out = false;
  std::uint64_t seed = 1;
  int workers = 1;
  std::vector<std::string> caps;
  Caps resolved;
};

Caps parse_caps(const std::vector<std::string>& items) {
  Caps c;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("--caps expects key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    std::uint64_t v = 0;
    try {
      std::size_t used = 0;
      v = std::stoull(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw ValidationError("--caps value for " + key + " is not a nonnegative integer");
    }
    auto small = [&](int& field) {
      if (v > 64) throw ValidationError("--caps " + key + " must be at most 64");
      field = static_cast<int>(v);
    };
    if (key == "max_arity") small(c.max_arity);
    else if (key == "max_enum_dim") small(c.max_enum_dim);
    else if (key == "max_span_dim") small(c.max_span_dim);
    else if (key == "max_comm_arity") small(c.max_comm_arity);
    else if (key == "max_onebit_arity") small(c.max_onebit_arity);
    else if (key == "max_affine_arity") small(c.max_affine_arity);
    else if (key == "max_sketch_table_bits") small(c.max_sketch_table_bits);
    else if (key == "max_work") c.max_work = v;
    else if (key == "max_slam_cells") c.max_slam_cells = v;
    else throw ValidationError("unknown cap '" + key + "'");
  }
  return c;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

bool is_ltf_name(const std::string& spec) { return spec.rfind("hamge:", 0) == 0 || spec.rfind("ltf:", 0) == 0; }

// LTF names go through the weight form so arities above the table cap work.
Oracle resolve_oracle(const std::string& spec, int n, const Caps& caps) {
  if (is_ltf_name(spec)) {
    auto ltf = std::make_shared<const LtfSpec>(resolve_ltf(spec, caps));
    if (ltf->arity() != n) throw ValidationError("function arity does not match the scheme");
    return [ltf](std::uint64_t x) { return ltf->sign(x); };
  }
  auto f = std::make_shared<const BoolFun>(builtin(spec, caps));
  if (f->arity() != n) throw ValidationError("function arity does not match the scheme");
  return [f](std::uint64_t x) { return (*f)(x); };
}

json subspace_json(const Subspace& s) {
  json rows = json::array();
  for (auto b : s.basis_bits()) rows.push_back(BitVec(s.n(), b).str());
  return rows;
}

std::string message_table(std::uint64_t witness, int n) {
  std::string s;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) s += ((witness >> x) & 1) ? '1' : '0';
  return s;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"f2lab: F2 sketches, Fourier dimension, one-way protocols and stream automata"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  bool version = false;
  app.add_flag("--json", g.json_out, "JSON report on standard output");
  app.add_option("--seed", g.seed, "root seed for every random choice");
  app.add_option("--workers", g.workers, "worker threads for partitionable searches")->check(CLI::PositiveNumber);
  app.add_option("--caps", g.caps, "size guard override, key=value")->take_all();
  app.add_flag("--version", version, "print the tool and file format versions");

  std::function<int()> action;

  // spectrum
  auto* spectrum_cmd = app.add_subcommand("spectrum", "nonzero Fourier coefficients");
  std::string fn;
  spectrum_cmd->add_option("--fn", fn, "function spec")->required();
  spectrum_cmd->callback([&] {
    action = [&] {
      const BoolFun f = builtin(fn, g.resolved);
      const Spectrum s = wht(f, g.resolved);
      if (g.json_out) {
        json coeffs = json::array();
        for (auto a : s.support())
          coeffs.push_back({{"alpha", BitVec(s.n, a).str()}, {"value", to_string(s.coefficient(a))}});
        emit(out, {{"fn", fn}, {"n", s.n}, {"coefficients", coeffs}});
      } else {
        for (auto a : s.support()) out << BitVec(s.n, a).str() << " " << to_string(s.coefficient(a)) << "\n";
      }
      return 0;
    };
  });

  // dim
  auto* dim_cmd = app.add_subcommand("dim", "exact Fourier dimension");
  dim_cmd->add_option("--fn", fn, "function spec")->required();
  dim_cmd->callback([&] {
    action = [&] {
      const ExactDim d = exact_dim(builtin(fn, g.resolved));
      if (g.json_out) emit(out, {{"fn", fn}, {"dim", d.d}, {"basis", subspace_json(d.basis)}});
      else out << d.d << "\n";
      return 0;
    };
  });

  // profile
  auto* profile_cmd = app.add_subcommand("profile", "w_d for every d with the derived bounds");
  bool greedy = false;
  profile_cmd->add_option("--fn", fn, "function spec")->required();
  profile_cmd->add_flag("--greedy", greedy, "greedy lower bounds on w_d instead of exact search");
  profile_cmd->callback([&] {
    action = [&] {
      const Spectrum s = wht(builtin(fn, g.resolved), g.resolved);
      if (greedy) {
        json rows = json::array();
        for (int d = 0; d <= s.n; ++d) {
          const auto w = greedy_subspace(s, d);
          rows.push_back({{"d", d}, {"w_d_at_least", to_string(w.weight)}, {"witness", subspace_json(w.witness)}});
        }
        if (g.json_out) emit(out, {{"fn", fn}, {"n", s.n}, {"greedy", rows}});
        else
          for (const auto& r : rows)
            out << r["d"].get<int>() << " >= " << r["w_d_at_least"].get<std::string>() << "\n";
        return 0;
      }
      const DimProfile p = dim_profile(s, {g.resolved, g.workers, false});
      json report = bound_report(p);
      report["fn"] = fn;
      if (g.json_out) {
        emit(out, report);
      } else {
        out << "d w_d gap\n";
        for (int d = 0; d <= p.n; ++d)
          out << d << " " << to_string(p.w[d]) << " " << (p.undefined[d] ? "-" : to_string(p.gaps[d])) << "\n";
        out << "largest gap at d=" << p.best_gap_d << "\n";
      }
      return 0;
    };
  });

  // sketch build / eval
  auto* sketch_cmd = app.add_subcommand("sketch", "build and evaluate F2 sketches");
  sketch_cmd->require_subcommand(1);
  auto* build_cmd = sketch_cmd->add_subcommand("build", "build a sketch scheme");
  std::string kind_name = "deterministic", delta_text = "1/10", decoder_name = "membership", out_path;
  int d_arg = -1;
  build_cmd->add_option("--fn", fn, "function spec")->required();
  build_cmd->add_option("--kind", kind_name, "deterministic|sign-trick|random-parity|ltf");
  build_cmd->add_option("--d", d_arg, "sign-trick dimension");
  build_cmd->add_option("--delta", delta_text, "target error for random kinds");
  build_cmd->add_option("--decoder", decoder_name, "random-parity decoder: membership|ml");
  build_cmd->add_flag("--greedy", greedy, "sign-trick subspace from the greedy search");
  build_cmd->add_option("--out", out_path, "write the scheme here instead of standard output");
  build_cmd->callback([&] {
    action = [&] {
      const SketchKind kind = parse_sketch_kind(kind_name);
      const Rational delta = parse_rational(delta_text);
      SketchScheme scheme;
      json extra = json::object();
      switch (kind) {
        case SketchKind::deterministic:
          scheme = deterministic_sketch(builtin(fn, g.resolved), g.resolved);
          break;
        case SketchKind::sign_trick: {
          if (d_arg < 0) throw ValidationError("sign-trick needs --d");
          const BoolFun f = builtin(fn, g.resolved);
          const Spectrum s = wht(f, g.resolved);
          const Subspace a = greedy ? greedy_subspace(s, d_arg).witness
                                    : max_subspace_weight(s, d_arg, {g.resolved, g.workers, false}).witness;
          const SignTrick st = sign_trick_sketch(f, a, g.resolved);
          scheme = st.scheme;
          extra = {{"achieved_error", to_string(st.achieved_error)},
                   {"weight", to_string(st.weight)},
                   {"threshold", to_string(st.threshold)}};
          break;
        }
        case SketchKind::random_parity:
          if (decoder_name != "membership" && decoder_name != "ml")
            throw ValidationError("--decoder must be membership or ml");
          scheme = random_parity_sketch(builtin(fn, g.resolved), delta, g.seed,
                                        decoder_name == "ml" ? ParityDecoder::ml : ParityDecoder::membership,
                                        g.resolved);
          break;
        case SketchKind::ltf:
          scheme = ltf_sketch(resolve_ltf(fn, g.resolved), delta, g.seed, {}, g.resolved);
          break;
      }
      scheme.fn = fn;
      const json j = scheme_to_json(scheme);
      if (!out_path.empty()) {
        write_text_file(out_path, j.dump(2) + "\n");
        if (g.json_out) emit(out, {{"written", out_path}, {"kind", to_string(kind)}, {"k", scheme.k}, {"build", extra}});
        else out << "wrote " << out_path << " (" << to_string(kind) << ", k=" << scheme.k << ")\n";
      } else {
        emit(out, j);
      }
      return 0;
    };
  });

  auto* eval_cmd = sketch_cmd->add_subcommand("eval", "error of a sketch scheme");
  std::string scheme_path, dist_name = "uniform";
  bool force_exact = false, force_monte = false;
  std::uint64_t trials = 10000, per_instance = 100;
  std::vector<std::string> probes;
  std::string mode;
  eval_cmd->add_option("--scheme", scheme_path, "scheme JSON")->required();
  eval_cmd->add_option("--mode", mode, "exact, monte or monte:<trials>");
  eval_cmd->add_option("--fn", fn, "function spec (defaults to the scheme's)");
  eval_cmd->add_flag("--exact", force_exact, "enumerate the scheme's support and every input");
  eval_cmd->add_flag("--monte", force_monte, "Monte-Carlo estimate");
  eval_cmd->add_option("--trials", trials, "Monte-Carlo (instance, input) pairs");
  eval_cmd->add_option("--per-instance", per_instance, "inputs drawn per sampled instance");
  eval_cmd->add_option("--dist", dist_name, "Monte-Carlo input law: uniform|weight");
  eval_cmd->add_option("--probe", probes, "input evaluated on every instance, as a 0/1 string");
  eval_cmd->callback([&] {
    action = [&] {
      if (!mode.empty()) {
        if (mode == "exact") {
          force_exact = true;
        } else if (mode.rfind("monte", 0) == 0) {
          force_monte = true;
          if (mode.size() > 5) {
            if (mode[5] != ':') throw ValidationError("--mode must be exact, monte or monte:<trials>");
            try {
              std::size_t used = 0;
              trials = std::stoull(mode.substr(6), &used);
              if (used != mode.size() - 6 || trials == 0) throw std::invalid_argument("trials");
            } catch (const std::logic_error&) {
              throw ValidationError("--mode monte:<trials> needs a positive integer");
            }
          }
        } else {
          throw ValidationError("--mode must be exact, monte or monte:<trials>");
        }
      }
      if (force_exact && force_monte) throw ValidationError("--exact and --monte are exclusive");
      const SketchScheme scheme = scheme_from_json(read_json_file(scheme_path), g.resolved);
      const std::string spec = fn.empty() ? scheme.fn : fn;
      if (spec.empty()) throw ValidationError("the scheme records no function; pass --fn");
      EvalOptions eo;
      eo.caps = g.resolved;
      eo.workers = g.workers;
      eo.seed = g.seed;
      eo.trials = trials;
      eo.inputs_per_instance = per_instance;
      if (dist_name == "uniform") eo.dist = InputDist::uniform;
      else if (dist_name == "weight") eo.dist = InputDist::weight;
      else throw ValidationError("--dist must be uniform or weight");
      for (const auto& p : probes) {
        const BitVec v = BitVec::parse(p);
        if (v.size() != scheme.n) throw ValidationError("probe length differs from n");
        eo.probes.push_back(v.bits());
      }
      const bool enumerable = scheme.support && scheme.n <= g.resolved.max_arity &&
                              static_cast<double>(*scheme.support) * std::ldexp(1.0, scheme.n) <=
                                  static_cast<double>(g.resolved.max_work);
      eo.exact = force_exact || (!force_monte && enumerable);
      const auto e = eval_sketch_error(scheme, resolve_oracle(spec, scheme.n, g.resolved), eo);
      json j = sketch_error_json(e);
      j["kind"] = to_string(scheme.kind);
      j["fn"] = spec;
      j["k"] = scheme.k;
      if (g.json_out) {
        emit(out, j);
      } else if (e.exact) {
        out << "k=" << scheme.k << " per_x_max=" << to_string(e.per_x_max) << " uniform_avg=" << to_string(e.uniform_avg)
            << " worst_x=" << BitVec(scheme.n, e.worst_x).str() << "\n";
      } else {
        out << "k=" << scheme.k << " error=" << e.avg_estimate << " ci=[" << e.avg_ci.lower << ", " << e.avg_ci.upper
            << "] trials=" << e.trials;
        if (e.probed)
          out << " worst_probe=" << BitVec(scheme.n, e.worst_x).str() << " per_x=" << e.per_x_estimate << " ci=["
              << e.per_x_ci.lower << ", " << e.per_x_ci.upper << "]";
        out << "\n";
      }
      return 0;
    };
  });

  // comm
  auto* comm_cmd = app.add_subcommand("comm", "one-way protocols for f(x + y)");
  comm_cmd->require_subcommand(1);
  auto* onebit_cmd = comm_cmd->add_subcommand("onebit", "best one-bit protocol by exhaustion");
  onebit_cmd->add_option("--fn", fn, "function spec")->required();
  onebit_cmd->add_option("--dist", dist_name, "sec7|uniform");
  onebit_cmd->callback([&] {
    action = [&] {
      const BoolFun f = builtin(fn, g.resolved);
      PairDistribution mu;
      if (dist_name == "sec7") mu = sec7_for(f);
      else if (dist_name != "uniform") throw ValidationError("--dist must be sec7 or uniform");
      const auto best = best_one_bit_error(f, mu, g.workers, g.resolved);
      json j = {{"fn", fn},
                {"dist", dist_name},
                {"error", to_string(best.error)},
                {"witness", message_table(best.witness, f.arity())},
                {"searched", best.searched}};
      std::optional<MessageBound> bound;
      if (dist_name == "sec7") {
        j["z"] = BitVec(f.arity(), mu.z).str();
        bound = check_message_bound(f, mu.z, g.workers, g.resolved);
        j["epsilon"] = to_string(bound->epsilon);
        j["correlation"] = {{"max", bound->worst_value},
                            {"bound", bound->bound},
                            {"holds", bound->holds},
                            {"worst_message", message_table(bound->worst_message, f.arity())}};
      }
      if (g.json_out) {
        emit(out, j);
      } else {
        out << "error=" << to_string(best.error) << " witness=" << message_table(best.witness, f.arity());
        if (bound)
          out << " z=" << BitVec(f.arity(), mu.z).str() << " epsilon=" << to_string(bound->epsilon)
              << " correlation_max=" << bound->worst_value << " bound=" << bound->bound
              << (bound->holds ? " holds" : " VIOLATED");
        out << "\n";
      }
      return 0;
    };
  });

  auto* ceval_cmd = comm_cmd->add_subcommand("eval", "exact error of a protocol file");
  std::string protocol_path;
  ceval_cmd->add_option("--protocol", protocol_path, "protocol JSON")->required();
  ceval_cmd->add_option("--fn", fn, "function spec")->required();
  ceval_cmd->add_option("--dist", dist_name, "sec7|uniform");
  ceval_cmd->callback([&] {
    action = [&] {
      const BoolFun f = builtin(fn, g.resolved);
      const OneWayProtocol p = protocol_from_json(read_json_file(protocol_path), g.resolved);
      PairDistribution mu;
      if (dist_name == "sec7") mu = sec7_for(f);
      else if (dist_name != "uniform") throw ValidationError("--dist must be sec7 or uniform");
      const Rational e = exact_error(p, f, mu, g.resolved);
      const Rational opt_e = optimal_rectangle_error(p.message, f, mu, g.resolved);
      if (g.json_out)
        emit(out, {{"fn", fn}, {"c", p.c}, {"dist", dist_name}, {"error", to_string(e)},
                   {"optimal_decoder_error", to_string(opt_e)}, {"decoders", static_cast<bool>(p.decoder)}});
      else
        out << "c=" << p.c << " error=" << to_string(e) << " optimal_decoder_error=" << to_string(opt_e) << "\n";
      return 0;
    };
  });

  auto* from_sketch_cmd = comm_cmd->add_subcommand("from-sketch", "protocol induced by a sketch instance");
  std::uint64_t sample = 0;
  from_sketch_cmd->add_option("--scheme", scheme_path, "scheme JSON")->required();
  from_sketch_cmd->add_option("--sample", sample, "instance index");
  from_sketch_cmd->add_option("--out", out_path, "output file");
  from_sketch_cmd->callback([&] {
    action = [&] {
      const SketchScheme scheme = scheme_from_json(read_json_file(scheme_path), g.resolved);
      const json j = protocol_to_json(protocol_from_sketch(scheme, sample, g.resolved), true, g.resolved);
      if (out_path.empty()) emit(out, j);
      else write_text_file(out_path, j.dump(2) + "\n");
      return 0;
    };
  });

  auto* trivial_cmd = comm_cmd->add_subcommand("trivial", "n-1 bit majority protocol");
  int n_arg = 0;
  trivial_cmd->add_option("--n", n_arg, "odd arity")->required();
  trivial_cmd->add_option("--out", out_path, "output file");
  trivial_cmd->callback([&] {
    action = [&] {
      const json j = protocol_to_json(trivial_majority_protocol(n_arg, g.resolved), true, g.resolved);
      if (out_path.empty()) emit(out, j);
      else write_text_file(out_path, j.dump(2) + "\n");
      return 0;
    };
  });

  // stream
  auto* stream_cmd = app.add_subcommand("stream", "turnstile streams over F2");
  stream_cmd->require_subcommand(1);
  auto* gen_cmd = stream_cmd->add_subcommand("gen", "random stream");
  int model = 1;
  std::optional<std::size_t> len;
  gen_cmd->add_option("--model", model, "1 or 2")->required();
  gen_cmd->add_option("--n", n_arg, "arity")->required();
  gen_cmd->add_option("--len", len, "model 2 length");
  gen_cmd->add_option("--out", out_path, "stream file to write");
  gen_cmd->callback([&] {
    action = [&] {
      const auto gs = gen_stream(model, n_arg, g.seed, len);
      const std::string text = stream_to_text(gs.stream);
      if (!out_path.empty()) write_text_file(out_path, text);
      if (g.json_out) {
        emit(out, {{"n", gs.stream.n},
                   {"model", model},
                   {"updates", gs.stream.updates},
                   {"split", gs.split},
                   {"covered", gs.covered},
                   {"freq", BitVec(gs.stream.n, gs.stream.freq()).str()}});
      } else if (out_path.empty()) {
        out << text;
      } else {
        out << "wrote " << out_path << " (" << gs.stream.updates.size() << " updates, split " << gs.split << ")\n";
      }
      return 0;
    };
  });

  auto* srun_cmd = stream_cmd->add_subcommand("run", "run a sketch or automaton on a stream");
  std::string automaton_path, stream_path;
  srun_cmd->add_option("--algo", scheme_path, "scheme JSON");
  srun_cmd->add_option("--automaton", automaton_path, "automaton JSON");
  srun_cmd->add_option("--stream", stream_path, "stream file")->required();
  srun_cmd->add_option("--fn", fn, "compare against f(freq)");
  srun_cmd->add_option("--sample", sample, "scheme instance index");
  srun_cmd->callback([&] {
    action = [&] {
      if (scheme_path.empty() == automaton_path.empty()) throw ValidationError("give exactly one of --algo, --automaton");
      const Stream s = load_stream(stream_path);
      json j = {{"n", s.n}, {"updates", s.updates.size()}, {"freq", BitVec(s.n, s.freq()).str()}};
      StreamRun r;
      std::string spec = fn;
      if (!scheme_path.empty()) {
        const SketchScheme scheme = scheme_from_json(read_json_file(scheme_path), g.resolved);
        r = run(scheme.sample(sample), s);
        std::string bits;
        for (int i = 0; i < scheme.k; ++i) bits += ((r.sketch_state[i / 64] >> (i % 64)) & 1) ? '1' : '0';
        j["state"] = bits;
        if (spec.empty()) spec = scheme.fn;
      } else {
        const Automaton a = automaton_from_json(read_json_file(automaton_path));
        r = run(a, s);
        j["state"] = r.state;
      }
      j["output"] = r.output;
      j["space_bits"] = r.space_bits;
      if (!spec.empty()) {
        const int expected = resolve_oracle(spec, s.n, g.resolved)(s.freq());
        j["expected"] = expected;
        j["correct"] = expected == r.output;
      }
      if (g.json_out) {
        emit(out, j);
      } else {
        out << "output=" << r.output << " space_bits=" << r.space_bits;
        if (j.contains("expected")) out << " expected=" << j["expected"].get<int>();
        out << "\n";
      }
      return 0;
    };
  });

  auto* kernel_cmd = stream_cmd->add_subcommand("kernel", "kernel and coset structure of a stream automaton");
  kernel_cmd->add_option("--automaton", automaton_path, "automaton JSON");
  kernel_cmd->add_option("--algo", scheme_path, "scheme JSON; its instance as an automaton");
  kernel_cmd->add_option("--sample", sample, "scheme instance index");
  kernel_cmd->callback([&] {
    action = [&] {
      if (scheme_path.empty() == automaton_path.empty()) throw ValidationError("give exactly one of --algo, --automaton");
      const Automaton a = automaton_path.empty()
                              ? automaton_from_sketch(scheme_from_json(read_json_file(scheme_path), g.resolved).sample(sample),
                                                      g.resolved)
                              : automaton_from_json(read_json_file(automaton_path));
      const KernelResult k = kernel(a, g.resolved);
      const CosetCheck c = coset_check(a, g.resolved);
      if (g.json_out) {
        emit(out, {{"n", a.n},
                   {"kernel_dim", k.kernel.dim()},
                   {"kernel_basis", subspace_json(k.kernel)},
                   {"reachable_states", k.reachable},
                   {"coset_check", c.holds},
                   {"distinct_states", c.distinct_states},
                   {"expected_states", c.expected_states}});
      } else {
        out << "kernel dim=" << k.kernel.dim() << " reachable=" << k.reachable
            << " coset_check=" << (c.holds ? "true" : "false") << "\n";
        for (auto b : k.kernel.basis_bits()) out << BitVec(a.n, b).str() << "\n";
      }
      return 0;
    };
  });

  auto* automaton_cmd = stream_cmd->add_subcommand("automaton", "write a sketch instance as an automaton");
  automaton_cmd->add_option("--algo", scheme_path, "scheme JSON")->required();
  automaton_cmd->add_option("--sample", sample, "scheme instance index");
  automaton_cmd->add_option("--out", out_path, "output file");
  automaton_cmd->callback([&] {
    action = [&] {
      const auto scheme = scheme_from_json(read_json_file(scheme_path), g.resolved);
      const json j = automaton_to_json(automaton_from_sketch(scheme.sample(sample), g.resolved));
      if (out_path.empty()) emit(out, j);
      else write_text_file(out_path, j.dump(2) + "\n");
      return 0;
    };
  });

  auto* lb_cmd = stream_cmd->add_subcommand("lb", "streaming space lower bound");
  lb_cmd->add_option("--fn", fn, "function spec")->required();
  lb_cmd->callback([&] {
    action = [&] {
      json j = space_lb_report(builtin(fn, g.resolved), {g.resolved, g.workers, false});
      j["fn"] = fn;
      if (g.json_out) emit(out, j);
      else
        out << "random streams: space >= " << j["random_stream"]["bits_at_least"].get<int>() << " bits (w_d = "
            << j["random_stream"]["w_d"].get<std::string>() << ")\nadversarial streams: "
            << j["adversarial_stream"]["statement"].get<std::string>() << "\n";
      return 0;
    };
  });

  // check
  auto* check_cmd = app.add_subcommand("check", "run a named acceptance check");
  std::string check_id;
  bool all = false;
  int k_arg = 2;
  check_cmd->add_option("id", check_id, "check id, or 'list'");
  check_cmd->add_flag("--all", all, "run every check");
  check_cmd->add_option("--k", k_arg, "recmaj-4d-over-n depth");
  check_cmd->callback([&] {
    action = [&] {
      if (check_id == "list") {
        for (const auto& id : check_ids()) out << id << "\n";
        return 0;
      }
      if (check_id.empty() == !all) throw ValidationError("give a check id or --all");
      CheckOptions co;
      co.seed = g.seed;
      co.workers = g.workers;
      co.caps = g.resolved;
      co.k = k_arg;
      std::vector<std::string> ids = all ? check_ids() : std::vector<std::string>{check_id};
      bool pass = true;
      json results = json::array();
      for (const auto& id : ids) {
        const CheckResult r = run_check(id, co);
        pass = pass && r.pass;
        if (g.json_out) {
          results.push_back({{"id", r.id}, {"pass", r.pass}, {"summary", r.summary}, {"details", r.details}});
        } else {
          out << (r.pass ? "PASS " : "FAIL ") << r.id << ": " << r.summary << " [" << std::fixed
              << std::setprecision(1) << r.seconds << " s]\n";
          out.unsetf(std::ios::floatfield);
        }
      }
      if (g.json_out) emit(out, all ? results : results[0]);
      return pass ? 0 : 1;
    };
  });

  std::vector<std::string> argv_store{"f2lab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  // --version works without a subcommand.
  for (const auto& a : args)
    if (a == "--version") {
      out << "f2lab " << kVersion << "\n"
          << "sketch scheme: f2lab-sketch/1\n"
          << "protocol: f2lab-protocol/1\n"
          << "automaton: f2lab-automaton/1\n"
          << "truth table: n=<int> then 2^n 0/1 characters, x_1 least significant\n"
          << "ltf: theta=<rational> then one weight per line\n"
          << "stream: n=<int> then one index in [1, n] per line\n";
      return 0;
    }

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    g.resolved = parse_caps(g.caps);
    default_caps() = g.resolved;
    default_workers() = g.workers;
    if (!action) throw ValidationError("no subcommand given");
    return action();
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace f2lab
