#include "seqstream/eval.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace seqstream {

namespace {

double ccr_range(const AssignmentLog& log, std::size_t lo, std::size_t hi) {
  // Tally labels per model, keeping first-seen order for tie-breaking.
  std::map<std::uint64_t, std::vector<std::pair<std::int32_t, std::size_t>>> groups;
  for (std::size_t i = lo; i < hi; ++i) {
    const AssignmentEntry& e = log[i];
    if (e.matched_model == 0) continue;
    auto& tallies = groups[e.matched_model];
    auto it = std::find_if(tallies.begin(), tallies.end(),
                           [&](const auto& p) { return p.first == e.label; });
    if (it == tallies.end())
      tallies.emplace_back(e.label, 1);
    else
      ++it->second;
  }
  std::size_t correct = 0;
  for (const auto& [model, tallies] : groups) {
    std::size_t best = 0;
    for (const auto& [label, count] : tallies) {
      if (count > best) best = count;  // first-seen label wins ties
    }
    correct += best;
  }
  return static_cast<double>(correct) / static_cast<double>(hi - lo);
}

}  // namespace

double ccr(const AssignmentLog& log) {
  if (log.empty()) throw std::invalid_argument("ccr: empty assignment log");
  return ccr_range(log, 0, log.size());
}

std::vector<double> windowed_ccr(const AssignmentLog& log, std::size_t window) {
  if (window == 0) throw std::invalid_argument("windowed_ccr: window must be positive");
  std::vector<double> out;
  out.reserve(log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    const std::size_t lo = i + 1 >= window ? i + 1 - window : 0;
    out.push_back(ccr_range(log, lo, i + 1));
  }
  return out;
}

AssignmentLog run_sequences(ClusterNode& node, const std::vector<LabeledSequence>& sequences,
                            Tick start_tick) {
  AssignmentLog log;
  log.reserve(sequences.size());
  Tick t = start_tick;
  std::uint64_t seq_id = 0;
  for (const LabeledSequence& ls : sequences) {
    ++seq_id;
    for (Symbol s : ls.symbols) node.ingest_symbol(s, t);
    node.ingest_symbol(kDelimiter, t);
    ++t;
    const auto& a = node.last_assignment();
    if (!a) continue;  // vacuous input produced no sequence
    log.push_back({seq_id, ls.label, a->merged ? a->model_id : 0, a->t});
  }
  return log;
}

std::vector<SweepPoint> sweep_epsilon(const SweepOptions& options) {
  if (options.epsilons.empty()) throw std::invalid_argument("sweep_epsilon: no epsilons");
  if (options.repeats == 0) throw std::invalid_argument("sweep_epsilon: repeats must be positive");
  options.base.validate();

  // Shared streams across sweep points: repeat r always sees the same data.
  std::vector<std::vector<LabeledSequence>> streams;
  streams.reserve(options.repeats);
  for (std::size_t r = 0; r < options.repeats; ++r)
    streams.push_back(gen_sequence_stream(options.patterns, options.n, options.noise,
                                          Rng::mix(options.seed, r)));

  std::vector<SweepPoint> out;
  out.reserve(options.epsilons.size());
  for (double eps : options.epsilons) {
    Hyperparams params = options.base;
    params.epsilon = eps;
    params.validate();

    std::vector<double> ccrs;
    double model_sum = 0.0;
    for (std::size_t r = 0; r < options.repeats; ++r) {
      ClusterNode node(1, params);
      const AssignmentLog log = run_sequences(node, streams[r]);
      ccrs.push_back(ccr(log));
      model_sum += static_cast<double>(node.store().size());
    }

    SweepPoint point;
    point.epsilon = eps;
    for (double c : ccrs) point.mean_ccr += c;
    point.mean_ccr /= static_cast<double>(ccrs.size());
    if (ccrs.size() > 1) {
      for (double c : ccrs) point.var_ccr += (c - point.mean_ccr) * (c - point.mean_ccr);
      point.var_ccr /= static_cast<double>(ccrs.size() - 1);
    }
    point.mean_models = model_sum / static_cast<double>(ccrs.size());
    out.push_back(point);
  }
  return out;
}

std::vector<double> convergence_curve(const ConvergeOptions& options) {
  options.params.validate();
  const std::vector<LabeledSequence> stream =
      gen_sequence_stream(options.patterns, options.n, options.noise, options.seed);
  ClusterNode node(1, options.params);
  const AssignmentLog log = run_sequences(node, stream);
  return windowed_ccr(log, options.window);
}

}  // namespace seqstream
