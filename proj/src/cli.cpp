#include "seqstream/cli.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "seqstream/io.hpp"
#include "seqstream/pipeline.hpp"

namespace seqstream {

namespace {

using nlohmann::json;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

// Shortest round-trip decimal form, identical on every run.
std::string fmt_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json tagged_event_to_json(const TaggedEvent& ev) {
  return json{{"t", ev.t},
              {"layer", ev.layer},
              {"node_id", ev.node_id},
              {"object_id", ev.object_id},
              {"model_index", ev.event.model_index},
              {"distance", ev.event.distance},
              {"predicted_suffix", ev.event.predicted_suffix},
              {"emitted", ev.event.emitted},
              {"output_symbol", ev.output_symbol}};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  std::chrono::duration<double> d = std::chrono::steady_clock::now() - start;
  return d.count() > 0.0 ? d.count() : 1e-9;
}

}  // namespace

int cmd_cluster(const ClusterArgs& args, std::ostream& out) {
  auto in = open_in(args.input);
  const auto sequences = read_labeled_sequences(in);

  std::size_t total_symbols = 0;
  for (const LabeledSequence& rec : sequences) total_symbols += rec.symbols.size() + 1;

  ClusterNode node(args.node_id, args.config.params);
  const auto start = std::chrono::steady_clock::now();
  const AssignmentLog log = run_sequences(node, sequences);
  node.flush(node.clock());
  const double elapsed = seconds_since(start);

  if (!args.assignments_out.empty()) {
    std::ostringstream body;
    write_assignments(body, log);
    save_text_file(args.assignments_out, body.str());
  }
  if (!args.snapshot_out.empty()) {
    save_text_file(args.snapshot_out, snapshot_to_json(node).dump(2) + "\n");
  }

  const auto& st = node.stats();
  out << "sequences: " << st.sequences << '\n'
      << "merged: " << st.merges << '\n'
      << "created: " << st.creations << '\n'
      << "cleanups: " << st.cleanups << '\n'
      << "models: " << node.store().size() << '\n';
  if (!log.empty()) {
    out << "rate: " << std::fixed << std::setprecision(4) << ccr(log) << '\n';
    out.unsetf(std::ios::floatfield);
  }
  out << "throughput: " << static_cast<std::uint64_t>(total_symbols / elapsed)
      << " symbols/sec\n";
  if (!args.assignments_out.empty()) out << "assignments: " << args.assignments_out << '\n';
  if (!args.snapshot_out.empty()) out << "snapshot: " << args.snapshot_out << '\n';
  return 0;
}

int cmd_pipeline(const PipelineArgs& args, std::ostream& out) {
  auto in = open_in(args.input);
  const auto observations = read_observations(in);

  std::map<Tick, std::vector<ObjectObservation>> by_tick;
  for (const ObjectObservation& obs : observations) by_tick[obs.t].push_back(obs);

  Pipeline pipeline(args.config.pipeline_config());

  std::vector<SymbolEvent> symbols;
  std::vector<TaggedEvent> events;
  std::size_t contentions = 0;
  Tick last_t = 0;
  const auto start = std::chrono::steady_clock::now();
  if (!by_tick.empty()) {
    const Tick first_t = by_tick.begin()->first;
    last_t = by_tick.rbegin()->first;
    static const std::vector<ObjectObservation> kNone;
    for (Tick t = first_t; t <= last_t; ++t) {
      auto it = by_tick.find(t);
      auto result = pipeline.tick(it == by_tick.end() ? kNone : it->second, t);
      symbols.insert(symbols.end(), result.symbols.begin(), result.symbols.end());
      events.insert(events.end(), result.events.begin(), result.events.end());
      contentions += result.contentions.size();
    }
  }
  pipeline.flush(last_t + 1);
  const double elapsed = seconds_since(start);

  if (!args.symbols_out.empty()) {
    std::ostringstream body;
    write_symbol_events(body, symbols);
    save_text_file(args.symbols_out, body.str());
  }
  if (!args.events_out.empty()) {
    std::ostringstream body;
    for (const TaggedEvent& ev : events) body << tagged_event_to_json(ev).dump() << '\n';
    save_text_file(args.events_out, body.str());
  }
  if (!args.snapshots_out.empty()) {
    json snaps{{"layer1", json::array()}, {"layer2", json::array()}};
    for (std::uint32_t c = 0; c < args.config.grid.cell_count(); ++c) {
      snaps["layer1"].push_back(snapshot_to_json(pipeline.layer1(c)));
    }
    for (std::uint32_t g = 0; g < pipeline.layer2_count(); ++g) {
      snaps["layer2"].push_back(snapshot_to_json(pipeline.layer2(g)));
    }
    save_text_file(args.snapshots_out, snaps.dump(2) + "\n");
  }

  std::size_t layer2_events = 0;
  for (const TaggedEvent& ev : events) layer2_events += ev.layer == 2;
  std::size_t layer1_models = 0;
  for (std::uint32_t c = 0; c < args.config.grid.cell_count(); ++c) {
    layer1_models += pipeline.layer1(c).store().size();
  }
  std::size_t layer2_models = 0;
  for (std::uint32_t g = 0; g < pipeline.layer2_count(); ++g) {
    layer2_models += pipeline.layer2(g).store().size();
  }

  out << "observations: " << observations.size() << '\n'
      << "ticks: " << by_tick.size() << '\n'
      << "symbols: " << symbols.size() << '\n'
      << "events: " << events.size() - layer2_events << " layer1, " << layer2_events
      << " layer2\n"
      << "models: " << layer1_models << " layer1, " << layer2_models << " layer2\n"
      << "throughput: " << static_cast<std::uint64_t>(symbols.size() / elapsed)
      << " symbols/sec\n";
  if (contentions > 0) out << "contended cells skipped: " << contentions << '\n';
  if (!args.symbols_out.empty()) out << "symbols file: " << args.symbols_out << '\n';
  if (!args.events_out.empty()) out << "events file: " << args.events_out << '\n';
  if (!args.snapshots_out.empty()) out << "snapshots file: " << args.snapshots_out << '\n';
  return 0;
}

int cmd_synth_sequences(const SynthSequencesArgs& args, std::ostream& out) {
  const auto stream = gen_sequence_stream(standard_patterns(), args.n, args.noise, args.seed);
  std::ostringstream body;
  write_labeled_sequences(body, stream);
  save_text_file(args.output, body.str());
  out << "wrote " << stream.size() << " sequences over " << standard_patterns().size()
      << " patterns to " << args.output << '\n';
  return 0;
}

int cmd_synth_points(const SynthPointsArgs& args, std::ostream& out) {
  const auto patterns = crossing_patterns(args.config.grid);
  const PointStream stream =
      gen_point_stream(patterns, args.config.grid, args.n_objects, args.seed, args.options);
  std::ostringstream body;
  write_observations(body, stream.observations);
  save_text_file(args.output, body.str());
  out << "wrote " << stream.observations.size() << " observations for " << args.n_objects
      << " objects to " << args.output << '\n';
  if (stream.clamped > 0) out << "clamped " << stream.clamped << " samples to the frame\n";
  return 0;
}

int cmd_sweep(const SweepArgs& args, std::ostream& out) {
  SweepOptions options = args.options;
  if (options.patterns.empty()) options.patterns = standard_patterns();
  const auto points = sweep_epsilon(options);

  out << std::setw(9) << "epsilon" << std::setw(11) << "mean_rate" << std::setw(11)
      << "var_rate" << std::setw(13) << "mean_models" << '\n';
  out << std::fixed;
  for (const SweepPoint& p : points) {
    out << std::setprecision(3) << std::setw(9) << p.epsilon << std::setw(11) << p.mean_ccr
        << std::setprecision(5) << std::setw(11) << p.var_ccr << std::setprecision(1)
        << std::setw(13) << p.mean_models << '\n';
  }
  out.unsetf(std::ios::floatfield);

  if (!args.output.empty()) {
    std::ostringstream csv;
    csv << "epsilon,mean_ccr,var_ccr,mean_models\n";
    for (const SweepPoint& p : points) {
      csv << fmt_double(p.epsilon) << ',' << fmt_double(p.mean_ccr) << ','
          << fmt_double(p.var_ccr) << ',' << fmt_double(p.mean_models) << '\n';
    }
    save_text_file(args.output, csv.str());
    out << "sweep file: " << args.output << '\n';
  }
  return 0;
}

int cmd_converge(const ConvergeArgs& args, std::ostream& out) {
  ConvergeOptions options = args.options;
  if (options.patterns.empty()) options.patterns = standard_patterns();
  const auto curve = convergence_curve(options);

  out << "points: " << curve.size() << '\n';
  if (!curve.empty()) {
    out << std::fixed << std::setprecision(4) << "first window: " << curve.front() << '\n'
        << "final window: " << curve.back() << '\n';
    out.unsetf(std::ios::floatfield);
  }
  if (!args.output.empty()) {
    std::ostringstream csv;
    csv << "sequence,windowed_rate\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
      csv << i + 1 << ',' << fmt_double(curve[i]) << '\n';
    }
    save_text_file(args.output, csv.str());
    out << "curve file: " << args.output << '\n';
  }
  return 0;
}

int cmd_models(const ModelsArgs& args, std::ostream& out) {
  const ClusterNode node = node_from_snapshot(load_json_file(args.snapshot));
  const auto& params = node.params();

  out << "node " << node.node_id() << ", clock " << node.clock() << ", " << node.store().size()
      << " models\n";
  out << "epsilon=" << params.epsilon << " lambda=" << params.lambda << " mu=" << params.mu
      << " t_gap=" << params.t_gap << " m_u=" << params.m_u << '\n';

  out << std::setw(4) << "idx" << std::setw(10) << "weight" << std::setw(10) << "decayed"
      << std::setw(8) << "t" << "  sequence (char weights)\n";
  for (std::size_t i = 0; i < node.store().size(); ++i) {
    const MicroCluster& mc = node.store()[i];
    out << std::setw(4) << i + 1 << std::fixed << std::setprecision(2) << std::setw(10) << mc.w
        << std::setw(10) << decayed_weight(mc, node.clock(), params.lambda) << std::setw(8)
        << mc.t << "  " << seq_to_string(mc.se) << " (";
    for (std::size_t k = 0; k < mc.sw.size(); ++k) {
      if (k) out << ' ';
      out << std::setprecision(1) << mc.sw[k];
    }
    out << ")\n";
    out.unsetf(std::ios::floatfield);
  }
  return 0;
}

}  // namespace seqstream
