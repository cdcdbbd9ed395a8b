#pragma once

// Deterministic synthetic data: labeled symbol sequences with controlled
// corruption, and labeled point tracks that exercise the encoder.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "seqstream/encoder.hpp"
#include "seqstream/types.hpp"

namespace seqstream {

// Seeded generator with fully pinned-down derivations, so identical seeds
// give identical streams on every platform and rerun.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  std::uint32_t below(std::uint32_t bound);  // uniform in [0, bound)
  double unit();                             // uniform in [0, 1)
  double gaussian();                         // standard normal, Box-Muller

  // Stream splitter for independent sub-seeds.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct LabeledSequence {
  std::int32_t label = 0;
  Sequence symbols;
};

struct SequenceNoise {
  double rate = 0.0;             // per-symbol corruption probability, at most 0.5
  double insert_fraction = 0.5;  // corruption splits between inserts and substitutions
};

// n corrupted copies of the patterns, balanced across them and shuffled.
// Label i marks copies of patterns[i]. Emitted sequences never contain 0 or
// adjacent repeats.
std::vector<LabeledSequence> gen_sequence_stream(const std::vector<Sequence>& patterns,
                                                 std::size_t n, SequenceNoise noise,
                                                 std::uint64_t seed);
std::vector<LabeledSequence> gen_sequence_stream(const std::vector<Sequence>& patterns,
                                                 std::size_t n, double noise_rate,
                                                 std::uint64_t seed);

// Motion pattern for point tracks: a polyline walked at constant speed.
struct PatternSpec {
  std::int32_t pattern_id = 0;
  std::vector<std::pair<double, double>> waypoints;  // scene coordinates
  double speed = 1.0;                                // scene units per tick
  double jitter_sigma = 0.0;                         // positional noise
};

struct PointOptions {
  double bbox_w = 6.0;
  double bbox_h = 6.0;
  Tick idle_gap = 2;  // quiet ticks between consecutive objects
};

struct PointStream {
  std::vector<ObjectObservation> observations;  // ascending by tick
  std::size_t clamped = 0;  // samples pulled back inside the frame
};

// One object at a time walks its pattern (round-robin); positions jittered,
// boxes clamped to the frame with a warning count.
PointStream gen_point_stream(const std::vector<PatternSpec>& patterns, const GridSpec& grid,
                             std::size_t n_objects, std::uint64_t seed,
                             const PointOptions& options = {});

// Eight well-separated eight-symbol fixtures over the 1..15 alphabet, each
// with distinct characters. Every pair keeps a common subsequence of at
// most three symbols, and nearly all pairs share at least two.
const std::vector<Sequence>& standard_patterns();

// Simple straight-line crossings of the frame for encoder-driven runs.
std::vector<PatternSpec> crossing_patterns(const GridSpec& grid);

}  // namespace seqstream
