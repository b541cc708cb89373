#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "f2lab/bitvec.hpp"
#include "f2lab/boolfn.hpp"
#include "f2lab/error.hpp"
#include "f2lab/gf2.hpp"
#include "f2lab/ltf.hpp"
#include "f2lab/rational.hpp"
#include "f2lab/stats.hpp"

namespace f2lab {

// Sketch bits packed 64 per word; bit r of the value is row r's parity.
using SketchValue = std::vector<std::uint64_t>;

struct SketchValueHash {
  std::size_t operator()(const SketchValue& v) const;
};

// One matrix drawn from a scheme together with its decoder. Rows are n-bit
// masks; k may exceed 64.
class SketchInstance {
 public:
  using Decoder = std::function<int(const SketchValue&)>;

  SketchInstance(int n, std::vector<std::uint64_t> rows, Decoder decoder);

  int n() const { return n_; }
  int k() const { return static_cast<int>(rows_.size()); }
  const std::vector<std::uint64_t>& rows() const { return rows_; }
  Gf2Matrix matrix() const;  // k <= 64 rows only

  SketchValue zero() const { return SketchValue((rows_.size() + 63) / 64, 0); }
  SketchValue sketch(std::uint64_t x) const;
  // Sketch of the unit vector e_{j+1}: the streaming update for index j.
  const SketchValue& column(int j) const { return columns_[j]; }
  int decode(const SketchValue& s) const { return decoder_(s); }
  int operator()(std::uint64_t x) const { return decode(sketch(x)); }

  // decode(s) for every s in F_2^k, indexed by s; k <= cap.
  std::vector<std::int8_t> decoder_table(const Caps& caps = default_caps()) const;

 private:
  int n_;
  std::vector<std::uint64_t> rows_;
  std::vector<SketchValue> columns_;
  Decoder decoder_;
};

enum class SketchKind { deterministic, sign_trick, random_parity, ltf };
std::string to_string(SketchKind kind);
SketchKind parse_sketch_kind(const std::string& s);

// A seeded distribution over sketch instances. Point distributions have a
// single instance. When the distribution is uniform over an enumerable
// support, `support` holds its size and `by_index` enumerates it.
struct SketchScheme {
  SketchKind kind = SketchKind::deterministic;
  int n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  std::string fn;  // function spec the scheme was built for, if known
  nlohmann::json params = nlohmann::json::object();
  std::optional<std::uint64_t> support;
  std::function<SketchInstance(std::uint64_t)> by_index;
  std::function<SketchInstance(std::uint64_t)> by_trial;

  SketchInstance sample(std::uint64_t trial) const { return by_trial(trial); }
};

SketchScheme deterministic_sketch(const BoolFun& f, const Caps& caps = default_caps());

struct SignTrick {
  SketchScheme scheme;
  Rational achieved_error;  // exact uniform error
  Rational weight;          // spectral weight of A
  Rational threshold;       // decoder is sgn(g - threshold), sgn(0) = +1
};
SignTrick sign_trick_sketch(const BoolFun& f, const Subspace& a, const Caps& caps = default_caps());

enum class ParityDecoder {
  membership,  // minority value iff the sketch equals M t for some t in the minority set
  ml           // per-coset majority of f, ties +1
};

// k = ceil(log2(2 |T| / delta)) uniformly random parities, T the minority side.
SketchScheme random_parity_sketch(const BoolFun& f, const Rational& delta, std::uint64_t seed,
                                  ParityDecoder decoder = ParityDecoder::membership, const Caps& caps = default_caps());
int random_parity_width(std::uint64_t minority, const Rational& delta);

struct LtfSketchOptions {
  int stage1_repetitions = 48;
  double stage1_vote = 0.3;
  double bucket_constant = 100.0;
  std::uint64_t max_below = std::uint64_t{1} << 24;  // cap on the enumerated below-threshold set
};

struct LtfSketchPlan {
  LtfSpec pre;               // after ltf_preprocess
  double ratio = 0;          // theta / m
  bool staged = false;       // ratio > 100: threshold test and hashing run first
  int stage1_rows = 0;
  double stage1_probability = 0;
  std::uint64_t buckets = 0;
  int stage3_rows = 0;
  double stage3_delta = 0;
  std::uint64_t below_count = 0;
};
LtfSketchPlan plan_ltf_sketch(const LtfSpec& spec, const Rational& delta, const LtfSketchOptions& opt = {});
SketchScheme ltf_sketch(const LtfSpec& spec, const Rational& delta, std::uint64_t seed, const LtfSketchOptions& opt = {},
                        const Caps& caps = default_caps());

// hamge:n:k (any n <= 64) or ltf:<path>.
LtfSpec resolve_ltf(const std::string& name, const Caps& caps = default_caps());

enum class InputDist {
  uniform,
  weight  // Hamming weight uniform in [0, n], then a uniform support of that size
};

struct EvalOptions {
  bool exact = true;
  std::uint64_t trials = 10000;     // monte: total (instance, input) pairs
  std::uint64_t inputs_per_instance = 100;
  std::uint64_t seed = 0;
  InputDist dist = InputDist::uniform;
  std::vector<std::uint64_t> probes;  // monte: fixed inputs evaluated on every instance
  int workers = 1;
  Caps caps = default_caps();
};

struct SketchError {
  bool exact = true;
  // Exact mode.
  Rational per_x_max;
  Rational uniform_avg;
  std::uint64_t worst_x = 0;
  // Monte-Carlo mode.
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double avg_estimate = 0;
  Interval avg_ci;
  std::uint64_t instances = 0;
  bool probed = false;
  std::uint64_t probe_worst_errors = 0;
  double per_x_estimate = 0;
  Interval per_x_ci;
};

using Oracle = std::function<int(std::uint64_t)>;
SketchError eval_sketch_error(const SketchScheme& scheme, const Oracle& f, const EvalOptions& opt);
SketchError eval_sketch_error(const SketchScheme& scheme, const BoolFun& f, const EvalOptions& opt);

nlohmann::json sketch_error_json(const SketchError& e);

// JSON with kind, n, k, seed, fn, params; deterministic kinds add the matrix
// rows and a hex decoder table when k <= 20.
nlohmann::json scheme_to_json(const SketchScheme& s);
// Random kinds are rebuilt from fn, params and seed.
SketchScheme scheme_from_json(const nlohmann::json& j, const Caps& caps = default_caps());

std::string hex_pack(const std::vector<std::int8_t>& table);
std::vector<std::int8_t> hex_unpack(const std::string& hex, std::uint64_t count);

}  // namespace f2lab
