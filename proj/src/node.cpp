#include "seqstream/node.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "seqstream/merge.hpp"
#include "seqstream/similarity.hpp"

namespace seqstream {

namespace {

// Brings a model's stored weights forward to t_now so additions and
// threshold tests see current values. Scale-invariant operations (matching,
// normalized weights) are unaffected by when this happens.
void materialize_decay(MicroCluster& mc, Tick t_now, double lambda) {
  const double f = std::exp2(-lambda * static_cast<double>(t_now - mc.t));
  mc.w *= f;
  for (double& x : mc.sw) x *= f;
  mc.t = t_now;
}

}  // namespace

ClusterNode::ClusterNode(std::uint32_t node_id, Hyperparams params)
    : node_id_(node_id), params_(params) {
  if (node_id_ == 0) throw std::invalid_argument("node_id must be at least 1");
  params_.validate();
}

void ClusterNode::bump_clock(Tick t_now) {
  if (t_now < clock_) throw std::invalid_argument("ingest time precedes node clock");
  clock_ = t_now;
}

void ClusterNode::maybe_cleanup() {
  const Tick bucket = clock_ / params_.t_gap;
  if (bucket > last_cleanup_bucket_) {
    last_cleanup_bucket_ = bucket;
    cleanup(clock_);
  }
}

void ClusterNode::advance_tick(Tick t_now) {
  bump_clock(t_now);
  maybe_cleanup();
}

std::optional<MatchEvent> ClusterNode::ingest_symbol(Symbol s, Tick t_now) {
  bump_clock(t_now);
  last_assignment_.reset();

  std::optional<MatchEvent> event;
  const bool accepted = buffer_.empty() || s != last_symbol_;
  if (accepted) {
    if (s != kDelimiter) {
      buffer_.push_back(s);
      if (store_.size() > params_.min_models_for_matching) {
        refresh_match_cache();
        const auto best = cached_closest();
        MatchEvent ev;
        ev.model_index = best->first;
        ev.distance = best->second;
        ev.predicted_suffix = predict(buffer_, best->first);
        ev.emitted = !current_match_ || *current_match_ != best->first;
        current_match_ = best->first;
        event = ev;
      }
    } else if (!buffer_.empty()) {
      finalize_buffer();
    }
  }
  last_symbol_ = s;
  maybe_cleanup();
  return event;
}

void ClusterNode::finalize_buffer() {
  ++stats_.sequences;
  Assignment a;
  a.t = clock_;

  std::optional<std::pair<std::uint32_t, double>> best;
  if (store_.size() > params_.min_models_for_matching) {
    refresh_match_cache();
    best = cached_closest();
  }

  if (best && best->second <= params_.epsilon) {
    const std::size_t idx = best->first - 1;
    MicroCluster target = store_[idx];
    materialize_decay(target, clock_, params_.lambda);
    store_[idx] = merge(target, make_micro_cluster(clock_, buffer_), clock_);
    a.merged = true;
    a.model_id = ids_[idx];
    a.model_index = best->first;
    a.distance = best->second;
    ++stats_.merges;
  } else {
    if (store_.size() >= params_.m_u) {
      std::size_t victim = 0;
      double lowest = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < store_.size(); ++i) {
        const double w = decayed_weight(store_[i], clock_, params_.lambda);
        if (w < lowest) {
          lowest = w;
          victim = i;
        }
      }
      store_.erase(store_.begin() + static_cast<std::ptrdiff_t>(victim));
      ids_.erase(ids_.begin() + static_cast<std::ptrdiff_t>(victim));
      ++stats_.evictions;
    }
    store_.push_back(make_micro_cluster(clock_, buffer_));
    ids_.push_back(next_id_++);
    a.merged = false;
    a.model_id = ids_.back();
    a.model_index = static_cast<std::uint32_t>(store_.size());
    a.distance = best ? best->second : 1.0;
    ++stats_.creations;
  }

  buffer_.clear();
  current_match_.reset();
  last_assignment_ = a;
  invalidate_cache();
}

void ClusterNode::cleanup(Tick t_now) {
  bump_clock(t_now);
  ++stats_.cleanups;
  const double threshold = std::exp2(-params_.lambda * static_cast<double>(params_.t_gap));
  bool structure_changed = false;

  // Decay pass: drop models whose weight fell to the threshold, refresh the
  // survivors, and prune characters whose weight trails the peak by more
  // than mu.
  for (std::size_t i = 0; i < store_.size();) {
    MicroCluster& mc = store_[i];
    if (decayed_weight(mc, t_now, params_.lambda) <= threshold) {
      store_.erase(store_.begin() + static_cast<std::ptrdiff_t>(i));
      ids_.erase(ids_.begin() + static_cast<std::ptrdiff_t>(i));
      ++stats_.expired_models;
      structure_changed = true;
      continue;
    }
    materialize_decay(mc, t_now, params_.lambda);

    double peak = 0.0;
    for (double w : mc.sw) peak = std::max(peak, w);
    Sequence kept_se;
    std::vector<double> kept_sw;
    kept_se.reserve(mc.se.size());
    kept_sw.reserve(mc.sw.size());
    for (std::size_t k = 0; k < mc.se.size(); ++k) {
      if (peak - mc.sw[k] <= params_.mu) {
        kept_se.push_back(mc.se[k]);
        kept_sw.push_back(mc.sw[k]);
      }
    }
    if (kept_se.size() != mc.se.size()) {
      collapse_runs(kept_se, kept_sw);
      mc.se = std::move(kept_se);
      mc.sw = std::move(kept_sw);
      structure_changed = true;
    }
    ++i;
  }

  // Merge pass: repeatedly fold the closest pair within epsilon, refreshing
  // the affected distances after each fold. Ties go to the lowest index pair.
  std::size_t m = store_.size();
  if (m >= 2) {
    std::vector<std::vector<double>> d(m);
    for (std::size_t j = 1; j < m; ++j) {
      d[j].resize(j);
      for (std::size_t i = 0; i < j; ++i) d[j][i] = model_distance(store_[i], store_[j]);
    }
    while (m >= 2) {
      std::size_t bi = 0, bj = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i + 1 < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
          if (d[j][i] < best) {
            best = d[j][i];
            bi = i;
            bj = j;
          }
        }
      }
      if (!(best <= params_.epsilon)) break;

      store_[bi] = merge_models(store_[bi], store_[bj], t_now);
      store_.erase(store_.begin() + static_cast<std::ptrdiff_t>(bj));
      ids_.erase(ids_.begin() + static_cast<std::ptrdiff_t>(bj));
      ++stats_.model_merges;
      structure_changed = true;

      d.erase(d.begin() + static_cast<std::ptrdiff_t>(bj));
      for (std::size_t j = bj; j < d.size(); ++j)
        d[j].erase(d[j].begin() + static_cast<std::ptrdiff_t>(bj));
      --m;
      for (std::size_t j = bi + 1; j < m; ++j) d[j][bi] = model_distance(store_[bi], store_[j]);
      for (std::size_t i = 0; i < bi; ++i) d[bi][i] = model_distance(store_[i], store_[bi]);
    }
  }

  if (structure_changed) current_match_.reset();
  invalidate_cache();
}

void ClusterNode::flush(Tick t_now) {
  while (true) {
    const std::vector<MicroCluster> before = store_;
    cleanup(t_now);
    if (store_ == before) break;
  }
}

std::optional<std::pair<std::uint32_t, double>> ClusterNode::match_closest(
    const Sequence& query) const {
  if (store_.empty()) return std::nullopt;
  std::uint32_t best_idx = 1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < store_.size(); ++i) {
    const double dist = distance(query, store_[i]);
    if (dist < best_dist) {
      best_dist = dist;
      best_idx = static_cast<std::uint32_t>(i + 1);
    }
  }
  return std::make_pair(best_idx, best_dist);
}

Sequence ClusterNode::predict(const Sequence& query, std::uint32_t model_index) const {
  if (model_index == 0 || model_index > store_.size())
    throw std::out_of_range("predict: model index out of range");
  const MicroCluster& mc = store_[model_index - 1];
  const DpTable tab = lcs_table(query, mc);
  std::size_t i = mc.se.size(), j = query.size();
  std::size_t consumed = 0;
  while (i > 0 && j > 0) {
    if (tab.at(j, i) == tab.at(j - 1, i)) {
      --j;
    } else if (tab.at(j, i) == tab.at(j, i - 1)) {
      --i;
    } else {
      consumed = i;  // walking backward, the first aligned position is the largest
      break;
    }
  }
  return Sequence(mc.se.begin() + static_cast<std::ptrdiff_t>(consumed), mc.se.end());
}

void ClusterNode::set_store(std::vector<MicroCluster> models, Tick clock) {
  for (const MicroCluster& mc : models) {
    if (!well_formed(mc)) throw std::invalid_argument("set_store: malformed model");
    if (mc.t > clock) throw std::invalid_argument("set_store: model newer than clock");
  }
  if (models.size() > params_.m_u) throw std::invalid_argument("set_store: over capacity");
  store_ = std::move(models);
  ids_.clear();
  for (std::size_t i = 0; i < store_.size(); ++i) ids_.push_back(next_id_++);
  clock_ = clock;
  last_cleanup_bucket_ = clock_ / params_.t_gap;
  buffer_.clear();
  last_symbol_ = kDelimiter;
  current_match_.reset();
  last_assignment_.reset();
  invalidate_cache();
}

void ClusterNode::refresh_match_cache() const {
  if (!cache_valid_) {
    cache_norms_.clear();
    cache_norms_.reserve(store_.size());
    for (const MicroCluster& mc : store_) cache_norms_.push_back(normalized_weights(mc));
    cache_rows_.assign(store_.size(), {});
    for (std::size_t k = 0; k < store_.size(); ++k)
      cache_rows_[k].assign(store_[k].se.size() + 1, 0.0);
    cache_len_ = 0;
    cache_valid_ = true;
  }
  static thread_local std::vector<double> scratch;
  while (cache_len_ < buffer_.size()) {
    const Symbol s = buffer_[cache_len_];
    for (std::size_t k = 0; k < store_.size(); ++k) {
      extend_lcs_row(store_[k].se, cache_norms_[k], s, cache_rows_[k], scratch);
      cache_rows_[k].swap(scratch);
    }
    ++cache_len_;
  }
}

std::optional<std::pair<std::uint32_t, double>> ClusterNode::cached_closest() const {
  if (store_.empty()) return std::nullopt;
  std::uint32_t best_idx = 1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < store_.size(); ++k) {
    const double denom = static_cast<double>(std::min(buffer_.size(), store_[k].se.size()));
    double dist = 1.0 - cache_rows_[k].back() / denom;
    if (dist < 0.0) dist = 0.0;
    if (dist > 1.0) dist = 1.0;
    if (dist < best_dist) {
      best_dist = dist;
      best_idx = static_cast<std::uint32_t>(k + 1);
    }
  }
  return std::make_pair(best_idx, best_dist);
}

void ClusterNode::invalidate_cache() const {
  cache_valid_ = false;
  cache_len_ = 0;
}

}  // namespace seqstream
