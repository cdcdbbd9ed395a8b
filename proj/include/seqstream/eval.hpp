#pragma once

// Clustering quality measurement against ground-truth labels, plus the
// parameter-sweep and convergence drivers built on it.

#include <cstdint>
#include <vector>

#include "seqstream/node.hpp"
#include "seqstream/synth.hpp"
#include "seqstream/types.hpp"

namespace seqstream {

// One record per finished sequence. matched_model is the stable id of the
// model the sequence folded into, or 0 when it opened a new model instead;
// unmatched sequences never count as correctly clustered.
struct AssignmentEntry {
  std::uint64_t sequence_id = 0;
  std::int32_t label = 0;
  std::uint64_t matched_model = 0;
  Tick t = 0;
};

using AssignmentLog = std::vector<AssignmentEntry>;

// Correct clustering rate: each model gets the majority label of its
// entries (ties to the label seen first); an entry scores when its label
// agrees. Sum of scores over the total entry count. Throws on an empty log.
double ccr(const AssignmentLog& log);

// ccr over a sliding window of the most recent `window` entries, one value
// per log position.
std::vector<double> windowed_ccr(const AssignmentLog& log, std::size_t window);

// Streams sequences through the node, one tick per sequence (all of its
// symbols and the closing delimiter share the tick), and records where
// each sequence landed. Sequence-grained time keeps the decay horizon in
// step with the stream no matter how long individual sequences run.
AssignmentLog run_sequences(ClusterNode& node, const std::vector<LabeledSequence>& sequences,
                            Tick start_tick = 1);

struct SweepOptions {
  std::vector<Sequence> patterns;
  std::size_t n = 230;
  SequenceNoise noise{0.1, 0.5};
  std::vector<double> epsilons{0.05, 0.2, 0.3, 0.5, 0.8};
  std::size_t repeats = 10;
  std::uint64_t seed = 42;
  Hyperparams base;  // epsilon replaced per sweep point
};

struct SweepPoint {
  double epsilon = 0.0;
  double mean_ccr = 0.0;
  double var_ccr = 0.0;  // sample variance over the repeats
  double mean_models = 0.0;
};

// Runs `repeats` independently seeded streams at each epsilon. The streams
// are shared across epsilons so points differ only by the threshold.
std::vector<SweepPoint> sweep_epsilon(const SweepOptions& options);

struct ConvergeOptions {
  std::vector<Sequence> patterns;
  std::size_t n = 230;
  SequenceNoise noise{0.1, 0.5};
  std::size_t window = 30;
  std::uint64_t seed = 42;
  Hyperparams params;
};

// Windowed ccr after each finished sequence of one run.
std::vector<double> convergence_curve(const ConvergeOptions& options);

}  // namespace seqstream
