#pragma once

// Command implementations behind the command-line tool. Kept callable as
// plain functions so tests can drive them and compare output files.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "seqstream/config.hpp"
#include "seqstream/eval.hpp"
#include "seqstream/synth.hpp"

namespace seqstream {

// Output files never carry wall-clock data, so a rerun with the same
// arguments reproduces them byte for byte.

struct ClusterArgs {
  std::string input;            // labeled sequences, one JSON object per line
  std::string assignments_out;  // empty skips the file
  std::string snapshot_out;     // empty skips the file
  std::uint32_t node_id = 1;
  Config config;
};
int cmd_cluster(const ClusterArgs& args, std::ostream& out);

struct PipelineArgs {
  std::string input;          // observations, one JSON object per line
  std::string symbols_out;    // per-cell symbol events
  std::string events_out;     // match events from both layers
  std::string snapshots_out;  // every node's store, one JSON document
  Config config;
};
int cmd_pipeline(const PipelineArgs& args, std::ostream& out);

struct SynthSequencesArgs {
  std::string output;
  std::size_t n = 230;
  SequenceNoise noise{0.1, 0.5};
  std::uint64_t seed = 42;
};
int cmd_synth_sequences(const SynthSequencesArgs& args, std::ostream& out);

struct SynthPointsArgs {
  std::string output;
  std::size_t n_objects = 30;
  std::uint64_t seed = 42;
  PointOptions options;
  Config config;  // supplies the grid
};
int cmd_synth_points(const SynthPointsArgs& args, std::ostream& out);

struct SweepArgs {
  std::string output;  // sweep points as CSV, empty skips the file
  SweepOptions options;
};
int cmd_sweep(const SweepArgs& args, std::ostream& out);

struct ConvergeArgs {
  std::string output;  // windowed rate series as CSV, empty skips the file
  ConvergeOptions options;
};
int cmd_converge(const ConvergeArgs& args, std::ostream& out);

struct ModelsArgs {
  std::string snapshot;  // snapshot JSON produced by cluster or pipeline
};
int cmd_models(const ModelsArgs& args, std::ostream& out);

}  // namespace seqstream
