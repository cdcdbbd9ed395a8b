#pragma once

// Core value types for the sequence-stream clustering engine: symbols,
// sequences, micro-cluster models, and the shared hyperparameter set.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seqstream {

// Discrete observation symbol. 0 is reserved as the sequence delimiter and
// never appears inside a stored sequence.
using Symbol = std::uint32_t;
using Sequence = std::vector<Symbol>;
using Tick = std::uint64_t;

constexpr Symbol kDelimiter = 0;

// A learned sequence model: last-touched tick, decaying hit weight, the
// model sequence, and one weight per character position.
struct MicroCluster {
  Tick t = 0;
  double w = 0.0;
  Sequence se;
  std::vector<double> sw;

  bool operator==(const MicroCluster&) const = default;
};

struct Hyperparams {
  double epsilon = 0.3;               // merge distance threshold
  double lambda = 0.01;               // forgetting rate, halves weight every 1/lambda ticks
  double mu = 10.0;                   // weight-gap cutoff for stale characters
  Tick t_gap = 20;                    // ticks between maintenance passes
  std::size_t m_u = 64;               // model store capacity
  std::size_t min_models_for_matching = 2;  // matching runs once the store exceeds this

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

// Exponential forgetting: weight w observed at t_last, read back at t_now.
double decay_weight(double w, Tick t_now, Tick t_last, double lambda);

// Current effective weight of a model.
double decayed_weight(const MicroCluster& mc, Tick t_now, double lambda);

// Fresh single-observation model for a just-finished sequence.
MicroCluster make_micro_cluster(Tick t, Sequence se);

// Structural checks used by tests and debug assertions: matching se/sw sizes,
// positive weights, no delimiter, no adjacent repeats.
bool well_formed(const MicroCluster& mc);

// Squashes runs of equal symbols, summing the weights of each run.
void collapse_runs(Sequence& se, std::vector<double>& sw);
// Sequence-only variant for generated data.
void collapse_runs(Sequence& se);

// "4CEA2" -> {4, 12, 14, 10, 2}. Accepts digits and A-F (either case).
Sequence seq_from_hex(std::string_view text);

// Compact display form: hex digits while symbols fit, decimal otherwise.
std::string seq_to_string(const Sequence& se);

}  // namespace seqstream
