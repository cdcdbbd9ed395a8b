#pragma once

// JSON serialization: model-store snapshots as single documents, data
// streams as one JSON object per line.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqstream/encoder.hpp"
#include "seqstream/eval.hpp"
#include "seqstream/node.hpp"
#include "seqstream/synth.hpp"

namespace seqstream {

// Snapshot schema: { node_id, clock, params: {epsilon, lambda, mu, t_gap,
// m_u, min_models_for_matching}, models: [{t, w, SE, SW}, ...] }.
nlohmann::json snapshot_to_json(const ClusterNode& node);
ClusterNode node_from_snapshot(const nlohmann::json& doc);

nlohmann::json hyperparams_to_json(const Hyperparams& p);
Hyperparams hyperparams_from_json(const nlohmann::json& doc);

// Line-delimited records. Readers validate field presence and report the
// offending line number on error.
std::vector<LabeledSequence> read_labeled_sequences(std::istream& in);
void write_labeled_sequences(std::ostream& out, const std::vector<LabeledSequence>& sequences);

std::vector<ObjectObservation> read_observations(std::istream& in);
void write_observations(std::ostream& out, const std::vector<ObjectObservation>& observations);

void write_assignments(std::ostream& out, const AssignmentLog& log);
void write_symbol_events(std::ostream& out, const std::vector<SymbolEvent>& events);

// File helpers; throw std::runtime_error with the path on failure.
nlohmann::json load_json_file(const std::string& path);
void save_text_file(const std::string& path, const std::string& contents);
std::string load_text_file(const std::string& path);

}  // namespace seqstream
