#include <cstddef>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "seqstream/cli.hpp"

namespace {

using namespace seqstream;

// One optional per tunable so a flag given on the command line overrides
// the config file without clobbering file values that were not flagged.
struct ParamFlags {
  std::optional<double> epsilon;
  std::optional<double> lambda;
  std::optional<double> mu;
  std::optional<std::size_t> t_gap;
  std::optional<std::size_t> m_u;
  std::optional<std::size_t> min_models;
};

void add_param_flags(CLI::App* cmd, ParamFlags& f) {
  cmd->add_option("--epsilon", f.epsilon, "Merge distance threshold in [0, 1]");
  cmd->add_option("--lambda", f.lambda, "Forgetting rate per tick");
  cmd->add_option("--mu", f.mu, "Largest character weight gap kept when pruning");
  cmd->add_option("--t-gap", f.t_gap, "Ticks between maintenance passes");
  cmd->add_option("--m-u", f.m_u, "Model capacity per node");
  cmd->add_option("--min-models", f.min_models, "Models required before matching starts");
}

void apply_param_flags(const ParamFlags& f, Hyperparams& p) {
  if (f.epsilon) p.epsilon = *f.epsilon;
  if (f.lambda) p.lambda = *f.lambda;
  if (f.mu) p.mu = *f.mu;
  if (f.t_gap) p.t_gap = *f.t_gap;
  if (f.m_u) p.m_u = *f.m_u;
  if (f.min_models) p.min_models_for_matching = *f.min_models;
}

struct GridFlags {
  std::optional<std::size_t> rows;
  std::optional<std::size_t> cols;
  std::optional<double> frame_w;
  std::optional<double> frame_h;
  std::optional<std::size_t> group_rows;
  std::optional<std::size_t> group_cols;
};

void add_grid_flags(CLI::App* cmd, GridFlags& f) {
  cmd->add_option("--grid-rows", f.rows, "Grid rows");
  cmd->add_option("--grid-cols", f.cols, "Grid columns");
  cmd->add_option("--frame-width", f.frame_w, "Scene width");
  cmd->add_option("--frame-height", f.frame_h, "Scene height");
  cmd->add_option("--group-rows", f.group_rows, "Cells per layer-2 group, vertically");
  cmd->add_option("--group-cols", f.group_cols, "Cells per layer-2 group, horizontally");
}

void apply_grid_flags(const GridFlags& f, Config& cfg) {
  if (f.rows) cfg.grid.rows = static_cast<std::uint32_t>(*f.rows);
  if (f.cols) cfg.grid.cols = static_cast<std::uint32_t>(*f.cols);
  if (f.frame_w) cfg.grid.frame_width = *f.frame_w;
  if (f.frame_h) cfg.grid.frame_height = *f.frame_h;
  if (f.group_rows) cfg.group_rows = *f.group_rows;
  if (f.group_cols) cfg.group_cols = *f.group_cols;
}

Config resolve_config(const std::string& config_path) {
  return config_path.empty() ? Config{} : load_config(config_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online clustering of symbol sequences from tracked motion"};
  app.require_subcommand(1);

  std::string config_path;
  ParamFlags params;
  GridFlags grid;

  // cluster: one node over a labeled sequence stream
  auto* cluster = app.add_subcommand("cluster", "Cluster a symbol sequence stream");
  ClusterArgs cluster_args;
  cluster->add_option("--input", cluster_args.input, "Sequence stream, one JSON record per line")
      ->required();
  cluster->add_option("--assignments", cluster_args.assignments_out,
                      "Write per-sequence assignment records here");
  cluster->add_option("--snapshot", cluster_args.snapshot_out, "Write the final store here");
  cluster->add_option("--node-id", cluster_args.node_id, "Node id recorded in the snapshot");
  cluster->add_option("--config", config_path, "Config file");
  add_param_flags(cluster, params);

  // pipeline: encoder plus both node layers over an observation stream
  auto* pipeline = app.add_subcommand("pipeline", "Run the two-layer pipeline on observations");
  PipelineArgs pipeline_args;
  pipeline
      ->add_option("--input", pipeline_args.input, "Observations, one JSON record per line")
      ->required();
  pipeline->add_option("--symbols", pipeline_args.symbols_out, "Write encoder symbol events here");
  pipeline->add_option("--events", pipeline_args.events_out, "Write match events here");
  pipeline->add_option("--snapshots", pipeline_args.snapshots_out, "Write all node stores here");
  pipeline->add_option("--config", config_path, "Config file");
  add_param_flags(pipeline, params);
  add_grid_flags(pipeline, grid);

  // synth: generate labeled test data
  auto* synth = app.add_subcommand("synth", "Generate synthetic data");
  std::string synth_mode = "sequences";
  SynthSequencesArgs synth_seq_args;
  SynthPointsArgs synth_pts_args;
  synth->add_option("--mode", synth_mode, "sequences or points")
      ->check(CLI::IsMember({"sequences", "points"}));
  std::string synth_out;
  synth->add_option("--out", synth_out, "Output file")->required();
  std::size_t synth_n = 230;
  synth->add_option("--n", synth_n, "Sequences to generate");
  double synth_noise = 0.1;
  synth->add_option("--noise", synth_noise, "Per-symbol corruption probability");
  synth->add_option("--insert-fraction", synth_seq_args.noise.insert_fraction,
                    "Fraction of corruptions that insert rather than substitute");
  std::uint64_t synth_seed = 42;
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("--objects", synth_pts_args.n_objects, "Tracked objects (points mode)");
  synth->add_option("--bbox-w", synth_pts_args.options.bbox_w, "Box width (points mode)");
  synth->add_option("--bbox-h", synth_pts_args.options.bbox_h, "Box height (points mode)");
  synth->add_option("--idle-gap", synth_pts_args.options.idle_gap,
                    "Quiet ticks between objects (points mode)");
  synth->add_option("--config", config_path, "Config file (points mode grid)");
  add_grid_flags(synth, grid);

  // eval-sweep: threshold sweep on the standard fixture
  auto* sweep = app.add_subcommand("eval-sweep", "Sweep the merge threshold");
  SweepArgs sweep_args;
  sweep->add_option("--out", sweep_args.output, "Write sweep rows as CSV here");
  sweep->add_option("--n", sweep_args.options.n, "Sequences per run");
  sweep->add_option("--noise", sweep_args.options.noise.rate, "Per-symbol corruption probability");
  sweep->add_option("--repeats", sweep_args.options.repeats, "Seeded runs per threshold");
  sweep->add_option("--seed", sweep_args.options.seed, "Base seed");
  sweep->add_option("--epsilons", sweep_args.options.epsilons, "Thresholds to test");
  sweep->add_option("--config", config_path, "Config file");
  add_param_flags(sweep, params);

  // eval-converge: windowed quality along one run
  auto* converge = app.add_subcommand("eval-converge", "Track windowed clustering quality");
  ConvergeArgs converge_args;
  converge->add_option("--out", converge_args.output, "Write the series as CSV here");
  converge->add_option("--n", converge_args.options.n, "Sequences in the run");
  converge->add_option("--noise", converge_args.options.noise.rate,
                       "Per-symbol corruption probability");
  converge->add_option("--window", converge_args.options.window, "Window length");
  converge->add_option("--seed", converge_args.options.seed, "Generator seed");
  converge->add_option("--config", config_path, "Config file");
  add_param_flags(converge, params);

  // models: inspect a snapshot
  auto* models = app.add_subcommand("models", "Pretty-print a snapshot");
  ModelsArgs models_args;
  models->add_option("snapshot", models_args.snapshot, "Snapshot file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cluster) {
      cluster_args.config = resolve_config(config_path);
      apply_param_flags(params, cluster_args.config.params);
      cluster_args.config.params.validate();
      return cmd_cluster(cluster_args, std::cout);
    }
    if (*pipeline) {
      pipeline_args.config = resolve_config(config_path);
      apply_param_flags(params, pipeline_args.config.params);
      apply_param_flags(params, pipeline_args.config.layer2);
      apply_grid_flags(grid, pipeline_args.config);
      pipeline_args.config.params.validate();
      pipeline_args.config.layer2.validate();
      pipeline_args.config.grid.validate();
      return cmd_pipeline(pipeline_args, std::cout);
    }
    if (*synth) {
      if (synth_mode == "sequences") {
        synth_seq_args.output = synth_out;
        synth_seq_args.n = synth_n;
        synth_seq_args.noise.rate = synth_noise;
        synth_seq_args.seed = synth_seed;
        return cmd_synth_sequences(synth_seq_args, std::cout);
      }
      synth_pts_args.output = synth_out;
      synth_pts_args.seed = synth_seed;
      synth_pts_args.config = resolve_config(config_path);
      apply_grid_flags(grid, synth_pts_args.config);
      synth_pts_args.config.grid.validate();
      return cmd_synth_points(synth_pts_args, std::cout);
    }
    if (*sweep) {
      Config cfg = resolve_config(config_path);
      apply_param_flags(params, cfg.params);
      cfg.params.validate();
      sweep_args.options.base = cfg.params;
      return cmd_sweep(sweep_args, std::cout);
    }
    if (*converge) {
      Config cfg = resolve_config(config_path);
      apply_param_flags(params, cfg.params);
      cfg.params.validate();
      converge_args.options.params = cfg.params;
      return cmd_converge(converge_args, std::cout);
    }
    if (*models) return cmd_models(models_args, std::cout);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
