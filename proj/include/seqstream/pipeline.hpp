#pragma once

// Two-layer node pipeline. Layer 1 holds one clustering node per grid cell;
// match changes there are re-encoded as (node, model) symbols and forwarded
// to a coarser layer-2 node chosen by a supergrid grouping.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "seqstream/encoder.hpp"
#include "seqstream/node.hpp"
#include "seqstream/types.hpp"

namespace seqstream {

struct PipelineConfig {
  GridSpec grid;
  std::uint32_t group_rows = 1;  // layer-2 supergrid; 1x1 funnels everything
  std::uint32_t group_cols = 1;  // into a single top node
  Hyperparams layer1;
  Hyperparams layer2;

  void validate() const;
};

// A match event with enough context to trace it through the pipeline.
struct TaggedEvent {
  Tick t = 0;
  int layer = 1;
  std::uint32_t node_id = 0;
  std::uint64_t object_id = 0;
  MatchEvent event;
  Symbol output_symbol = 0;  // re-encoded symbol handed upward, 0 if none
};

class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config);

  struct TickResult {
    std::vector<TaggedEvent> events;
    std::vector<SymbolEvent> symbols;  // raw encoder output for this tick
    std::vector<ContentionEvent> contentions;
  };

  // Processes one tick of observations. Ticks must be strictly increasing.
  // Within the tick, forwarded symbols reach layer 2 ordered by source node
  // id; a 0 follows for any object absent from a group for the entire tick.
  TickResult tick(const std::vector<ObjectObservation>& observations, Tick t);

  // Settles every node's store; call once the stream has ended.
  void flush(Tick t);

  std::uint32_t group_of_cell(std::uint32_t cell) const;
  std::uint32_t layer1_node_id(std::uint32_t cell) const { return cell + 1; }
  std::uint32_t layer2_node_id(std::uint32_t group) const;

  const ClusterNode& layer1(std::uint32_t cell) const { return layer1_.at(cell); }
  ClusterNode& layer1(std::uint32_t cell) { return layer1_.at(cell); }
  const ClusterNode& layer2(std::uint32_t group) const { return layer2_.at(group); }
  ClusterNode& layer2(std::uint32_t group) { return layer2_.at(group); }
  std::size_t layer2_count() const { return layer2_.size(); }
  const PipelineConfig& config() const { return config_; }

 private:
  PipelineConfig config_;
  StepEncoder encoder_;
  std::vector<ClusterNode> layer1_;
  std::vector<ClusterNode> layer2_;
  // (group, object) pairs with forwarded symbols awaiting their closing 0.
  std::map<std::pair<std::uint32_t, std::uint64_t>, bool> open_upstream_;
  std::optional<Tick> last_tick_;
};

}  // namespace seqstream
