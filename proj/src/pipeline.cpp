#include "seqstream/pipeline.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace seqstream {

void PipelineConfig::validate() const {
  grid.validate();
  layer1.validate();
  layer2.validate();
  if (group_rows == 0 || group_cols == 0)
    throw std::invalid_argument("pipeline needs at least one layer-2 group");
  if (group_rows > grid.rows || group_cols > grid.cols)
    throw std::invalid_argument("layer-2 supergrid cannot be finer than the grid");
}

Pipeline::Pipeline(PipelineConfig config) : config_(config), encoder_(config.grid) {
  config_.validate();
  layer1_.reserve(config_.grid.cell_count());
  for (std::uint32_t cell = 0; cell < config_.grid.cell_count(); ++cell)
    layer1_.emplace_back(layer1_node_id(cell), config_.layer1);
  const std::uint32_t groups = config_.group_rows * config_.group_cols;
  layer2_.reserve(groups);
  for (std::uint32_t g = 0; g < groups; ++g)
    layer2_.emplace_back(layer2_node_id(g), config_.layer2);
}

std::uint32_t Pipeline::group_of_cell(std::uint32_t cell) const {
  const std::uint32_t row = cell / config_.grid.cols;
  const std::uint32_t col = cell % config_.grid.cols;
  const std::uint32_t gr = row * config_.group_rows / config_.grid.rows;
  const std::uint32_t gc = col * config_.group_cols / config_.grid.cols;
  return gr * config_.group_cols + gc;
}

std::uint32_t Pipeline::layer2_node_id(std::uint32_t group) const {
  return config_.grid.cell_count() + group + 1;
}

Pipeline::TickResult Pipeline::tick(const std::vector<ObjectObservation>& observations, Tick t) {
  if (last_tick_ && t <= *last_tick_)
    throw std::invalid_argument("pipeline ticks must be strictly increasing");
  last_tick_ = t;

  TickResult result;
  StepEncoder::StepResult encoded = encoder_.step(observations, t);
  result.symbols = encoded.events;
  result.contentions = std::move(encoded.contentions);

  // Layer 1 ingests its cell streams; emitted match changes are re-encoded
  // for the next layer.
  struct Forward {
    std::uint32_t source_node;
    std::uint32_t group;
    std::uint64_t object_id;
    Symbol symbol;
  };
  std::vector<Forward> forwards;
  for (const SymbolEvent& se : result.symbols) {
    ClusterNode& node = layer1_[se.cell];
    std::optional<MatchEvent> ev = node.ingest_symbol(se.symbol, t);
    if (!ev) continue;
    TaggedEvent tagged{t, 1, node.node_id(), se.object_id, *ev, 0};
    if (ev->emitted) {
      tagged.output_symbol =
          encode_output(node.node_id(), ev->model_index, config_.layer1.m_u);
      forwards.push_back(
          {node.node_id(), group_of_cell(se.cell), se.object_id, tagged.output_symbol});
    }
    result.events.push_back(std::move(tagged));
  }

  std::stable_sort(forwards.begin(), forwards.end(),
                   [](const Forward& a, const Forward& b) { return a.source_node < b.source_node; });
  for (const Forward& f : forwards) {
    ClusterNode& node = layer2_[f.group];
    std::optional<MatchEvent> ev = node.ingest_symbol(f.symbol, t);
    open_upstream_[{f.group, f.object_id}] = true;
    if (ev) result.events.push_back({t, 2, node.node_id(), f.object_id, *ev, 0});
  }

  // Which (group, object) pairs were present at all this tick, by geometry.
  std::set<std::pair<std::uint32_t, std::uint64_t>> present;
  for (const ObjectObservation& obs : observations) {
    for (std::uint32_t cell : config_.grid.cells_overlapping(obs.bbox))
      present.insert({group_of_cell(cell), obs.object_id});
  }

  // An open upstream sequence whose object sat out the whole tick ends now.
  for (auto it = open_upstream_.begin(); it != open_upstream_.end();) {
    if (present.count(it->first) == 0) {
      layer2_[it->first.first].ingest_symbol(kDelimiter, t);
      it = open_upstream_.erase(it);
    } else {
      ++it;
    }
  }

  // Idle nodes still age; maintenance stays on schedule everywhere.
  for (ClusterNode& node : layer1_) node.advance_tick(t);
  for (ClusterNode& node : layer2_) node.advance_tick(t);
  return result;
}

void Pipeline::flush(Tick t) {
  for (auto& [key, _] : open_upstream_) layer2_[key.first].ingest_symbol(kDelimiter, t);
  open_upstream_.clear();
  for (ClusterNode& node : layer1_) {
    node.ingest_symbol(kDelimiter, t);
    node.flush(t);
  }
  for (ClusterNode& node : layer2_) node.flush(t);
}

}  // namespace seqstream
