#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "f2lab/boolfn.hpp"
#include "f2lab/error.hpp"
#include "f2lab/fourierdim.hpp"
#include "f2lab/gf2.hpp"
#include "f2lab/sketch.hpp"
#include "f2lab/stats.hpp"

namespace f2lab {

// Updates are 1-based coordinate indices; each toggles one bit of freq.
struct Stream {
  int n = 0;
  std::vector<int> updates;

  std::uint64_t freq() const { return freq(0, updates.size()); }
  std::uint64_t freq(std::size_t begin, std::size_t end) const;
  void validate() const;
};

std::string stream_to_text(const Stream& s);
Stream parse_stream(std::string_view text);
Stream load_stream(const std::string& path);

struct GeneratedStream {
  Stream stream;
  std::size_t split = 0;  // Alice holds updates [0, split), Bob the rest
  bool covered = true;    // model 2: each half touches every index
};

// Model 1: each half lists every index independently with probability 1/2,
// shuffled. Model 2: len uniform indices split at len / 2; the default
// length is ceil(4 n ln n), at least 1.
GeneratedStream gen_stream(int model, int n, std::uint64_t seed, std::optional<std::size_t> len = std::nullopt);
std::size_t default_model2_length(int n);

// Explicit stream automaton. delta[s * n + i] is the state after index i + 1.
struct Automaton {
  int n = 0;
  std::uint32_t states = 0;
  std::uint32_t initial = 0;
  std::vector<std::uint32_t> delta;
  std::vector<std::int8_t> output;

  std::uint32_t step(std::uint32_t s, int index0) const { return delta[static_cast<std::size_t>(s) * n + index0]; }
  void validate() const;
};

nlohmann::json automaton_to_json(const Automaton& a);
Automaton automaton_from_json(const nlohmann::json& j);

// States are the sketch values reachable from 0, numbered in BFS order over
// index 1..n; output is the decoder on each value.
Automaton automaton_from_sketch(const SketchInstance& inst, const Caps& caps = default_caps());

struct StreamRun {
  int output = 1;
  SketchValue sketch_state;      // sketch algorithms
  std::uint32_t state = 0;       // automata
  double space_bits = 0;
};
StreamRun run(const SketchInstance& inst, const Stream& s);
StreamRun run(const Automaton& a, const Stream& s);

std::vector<std::uint32_t> reachable_states(const Automaton& a);

// Decided exactly on reachable states: commuting updates and involutive
// updates hold everywhere iff the state depends on freq alone. On failure
// `first` and `second` are streams with equal freq ending in different states.
struct PathIndependence {
  bool holds = true;
  Stream first;
  Stream second;
};
PathIndependence check_path_independence(const Automaton& a);

struct KernelResult {
  Subspace kernel;
  std::uint64_t reachable = 0;
};
// Throws ValidationError naming the witness streams if a is not path independent.
KernelResult kernel(const Automaton& a, const Caps& caps = default_caps());

struct CosetCheck {
  bool holds = false;
  Subspace kernel;
  std::uint64_t distinct_states = 0;
  std::uint64_t expected_states = 0;
  PathIndependence path;
  std::uint64_t witness_x = 0, witness_y = 0;  // when the coset map fails
};
CosetCheck coset_check(const Automaton& a, const Caps& caps = default_caps());

// Fraction of seeded streams on which the algorithm disagrees with f(freq).
// Trial t draws stream gen_stream(model, n, derive_seed(seed, "stream-trial", t))
// and instance scheme.sample(t).
struct StreamExperiment {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double rate = 0;
  Interval ci;
};
StreamExperiment stream_error(const SketchScheme& scheme, const Oracle& f, int model, std::uint64_t trials,
                              std::uint64_t seed, int workers = 1);

// Smallest d with (1 - w_d) / 2 <= 1/3, plus the adversarial-model form.
nlohmann::json space_lb_report(const BoolFun& f, const SearchOptions& opt = {});

}  // namespace f2lab
