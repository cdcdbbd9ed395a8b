#pragma once

// Online clustering node. Consumes a delimiter-separated symbol stream,
// maintains a bounded store of decaying sequence models, and reports which
// model the in-progress sequence currently matches.

#include <cstdint>
#include <optional>
#include <vector>

#include "seqstream/types.hpp"

namespace seqstream {

// Emitted while a sequence accumulates, once matching is active. `emitted`
// is true only when the best-match index moved, which is the signal a
// downstream consumer re-encodes.
struct MatchEvent {
  std::uint32_t model_index = 0;  // 1-based position in the store
  double distance = 1.0;
  Sequence predicted_suffix;
  bool emitted = false;
};

// Outcome of the most recent finished sequence. `merged` distinguishes
// folding into an existing model from creating a new one.
struct Assignment {
  bool merged = false;
  std::uint64_t model_id = 0;     // stable across store reshuffles
  std::uint32_t model_index = 0;  // 1-based position at assignment time
  double distance = 1.0;
  Tick t = 0;
};

class ClusterNode {
 public:
  ClusterNode(std::uint32_t node_id, Hyperparams params);

  // Feeds one observation at time t_now (>= clock, multiple per tick allowed).
  // Non-delimiter symbols extend the sequence buffer and, once the store
  // holds more than min_models_for_matching models, yield a MatchEvent.
  // A delimiter finishes the buffer into the store.
  std::optional<MatchEvent> ingest_symbol(Symbol s, Tick t_now);

  // Clock catch-up for ticks without observations; runs the scheduled
  // maintenance pass when a t_gap boundary is reached.
  void advance_tick(Tick t_now);

  // Maintenance: decay and drop stale models, prune low-weight characters,
  // then merge any model pair within epsilon (closest pairs first).
  void cleanup(Tick t_now);

  // Runs cleanup passes until the store stops changing. Used at end of
  // stream so a snapshot reflects a fully settled store.
  void flush(Tick t_now);

  // Closest model for an arbitrary query: (1-based index, distance). Empty
  // store gives nullopt. Ties go to the lowest index.
  std::optional<std::pair<std::uint32_t, double>> match_closest(const Sequence& query) const;

  // Model suffix after the last query character the alignment consumed.
  Sequence predict(const Sequence& query, std::uint32_t model_index) const;

  const std::vector<MicroCluster>& store() const { return store_; }
  const std::vector<std::uint64_t>& model_ids() const { return ids_; }
  std::uint32_t node_id() const { return node_id_; }
  const Hyperparams& params() const { return params_; }
  Tick clock() const { return clock_; }
  const Sequence& buffer() const { return buffer_; }
  std::optional<std::uint32_t> current_match() const { return current_match_; }

  // Set on the ingest call that finished a sequence, cleared by the next one.
  const std::optional<Assignment>& last_assignment() const { return last_assignment_; }

  // Replaces the store wholesale (snapshot restore, test setup).
  void set_store(std::vector<MicroCluster> models, Tick clock);

  struct Stats {
    std::uint64_t sequences = 0;
    std::uint64_t merges = 0;          // sequence-into-model
    std::uint64_t creations = 0;
    std::uint64_t evictions = 0;
    std::uint64_t cleanups = 0;
    std::uint64_t expired_models = 0;  // dropped by the weight threshold
    std::uint64_t model_merges = 0;    // model-into-model
  };
  const Stats& stats() const { return stats_; }

 private:
  void bump_clock(Tick t_now);
  void maybe_cleanup();
  void finalize_buffer();
  void refresh_match_cache() const;
  std::optional<std::pair<std::uint32_t, double>> cached_closest() const;
  void invalidate_cache() const;

  std::uint32_t node_id_;
  Hyperparams params_;
  std::vector<MicroCluster> store_;
  std::vector<std::uint64_t> ids_;
  std::uint64_t next_id_ = 1;
  Sequence buffer_;
  Tick clock_ = 0;
  Symbol last_symbol_ = kDelimiter;
  std::optional<std::uint32_t> current_match_;
  std::optional<Assignment> last_assignment_;
  Tick last_cleanup_bucket_ = 0;
  Stats stats_;

  // Incremental score rows, one per stored model, covering the current
  // buffer. Rebuilt lazily after any store change.
  mutable std::vector<std::vector<double>> cache_rows_;
  mutable std::vector<std::vector<double>> cache_norms_;
  mutable std::size_t cache_len_ = 0;
  mutable bool cache_valid_ = false;
};

}  // namespace seqstream
