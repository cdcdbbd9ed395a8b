#include "seqstream/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace seqstream {

namespace {

using nlohmann::json;

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line_no) + ": " + what);
}

json parse_line(const std::string& line, std::size_t line_no) {
  json doc = json::parse(line, nullptr, false);
  if (doc.is_discarded()) fail_line(line_no, "invalid JSON");
  if (!doc.is_object()) fail_line(line_no, "expected a JSON object");
  return doc;
}

const json& field(const json& doc, const char* name, std::size_t line_no) {
  auto it = doc.find(name);
  if (it == doc.end()) fail_line(line_no, std::string("missing field '") + name + "'");
  return *it;
}

// Iterate non-empty lines of a stream, parsing each as a JSON object.
template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    fn(parse_line(line, line_no), line_no);
  }
}

}  // namespace

json hyperparams_to_json(const Hyperparams& p) {
  return json{{"epsilon", p.epsilon},
              {"lambda", p.lambda},
              {"mu", p.mu},
              {"t_gap", p.t_gap},
              {"m_u", p.m_u},
              {"min_models_for_matching", p.min_models_for_matching}};
}

Hyperparams hyperparams_from_json(const json& doc) {
  Hyperparams p;
  p.epsilon = doc.at("epsilon").get<double>();
  p.lambda = doc.at("lambda").get<double>();
  p.mu = doc.at("mu").get<double>();
  p.t_gap = doc.at("t_gap").get<Tick>();
  p.m_u = doc.at("m_u").get<std::size_t>();
  p.min_models_for_matching = doc.at("min_models_for_matching").get<std::size_t>();
  p.validate();
  return p;
}

json snapshot_to_json(const ClusterNode& node) {
  json models = json::array();
  for (const MicroCluster& mc : node.store()) {
    models.push_back(json{{"t", mc.t}, {"w", mc.w}, {"SE", mc.se}, {"SW", mc.sw}});
  }
  return json{{"node_id", node.node_id()},
              {"clock", node.clock()},
              {"params", hyperparams_to_json(node.params())},
              {"models", std::move(models)}};
}

ClusterNode node_from_snapshot(const json& doc) {
  Hyperparams params = hyperparams_from_json(doc.at("params"));
  ClusterNode node(doc.at("node_id").get<int>(), params);

  std::vector<MicroCluster> models;
  for (const json& entry : doc.at("models")) {
    MicroCluster mc;
    mc.t = entry.at("t").get<Tick>();
    mc.w = entry.at("w").get<double>();
    mc.se = entry.at("SE").get<Sequence>();
    mc.sw = entry.at("SW").get<std::vector<double>>();
    models.push_back(std::move(mc));
  }
  node.set_store(std::move(models), doc.at("clock").get<Tick>());
  return node;
}

std::vector<LabeledSequence> read_labeled_sequences(std::istream& in) {
  std::vector<LabeledSequence> out;
  for_each_record(in, [&](const json& doc, std::size_t line_no) {
    LabeledSequence rec;
    rec.label = field(doc, "label", line_no).get<int>();
    rec.symbols = field(doc, "symbols", line_no).get<Sequence>();
    for (Symbol s : rec.symbols) {
      if (s == kDelimiter) fail_line(line_no, "symbol 0 is reserved");
    }
    out.push_back(std::move(rec));
  });
  return out;
}

void write_labeled_sequences(std::ostream& out, const std::vector<LabeledSequence>& sequences) {
  for (const LabeledSequence& rec : sequences) {
    out << json{{"label", rec.label}, {"symbols", rec.symbols}}.dump() << '\n';
  }
}

std::vector<ObjectObservation> read_observations(std::istream& in) {
  std::vector<ObjectObservation> out;
  for_each_record(in, [&](const json& doc, std::size_t line_no) {
    ObjectObservation obs;
    obs.t = field(doc, "t", line_no).get<Tick>();
    obs.object_id = field(doc, "object_id", line_no).get<int>();
    obs.bbox.x = field(doc, "x", line_no).get<double>();
    obs.bbox.y = field(doc, "y", line_no).get<double>();
    obs.bbox.w = field(doc, "w", line_no).get<double>();
    obs.bbox.h = field(doc, "h", line_no).get<double>();
    if (auto it = doc.find("label"); it != doc.end()) obs.label = it->get<int>();
    out.push_back(obs);
  });
  return out;
}

void write_observations(std::ostream& out, const std::vector<ObjectObservation>& observations) {
  for (const ObjectObservation& obs : observations) {
    json doc{{"t", obs.t},
             {"object_id", obs.object_id},
             {"x", obs.bbox.x},
             {"y", obs.bbox.y},
             {"w", obs.bbox.w},
             {"h", obs.bbox.h}};
    if (obs.label >= 0) doc["label"] = obs.label;
    out << doc.dump() << '\n';
  }
}

void write_assignments(std::ostream& out, const AssignmentLog& log) {
  for (const AssignmentEntry& entry : log) {
    out << json{{"sequence_id", entry.sequence_id},
                {"label", entry.label},
                {"matched_model", entry.matched_model},
                {"t", entry.t}}
               .dump()
        << '\n';
  }
}

void write_symbol_events(std::ostream& out, const std::vector<SymbolEvent>& events) {
  for (const SymbolEvent& ev : events) {
    out << json{{"t", ev.t}, {"cell", ev.cell}, {"object_id", ev.object_id}, {"symbol", ev.symbol}}
               .dump()
        << '\n';
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw std::runtime_error("invalid JSON in " + path);
  return doc;
}

void save_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string load_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace seqstream
