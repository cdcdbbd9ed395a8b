#include "seqstream/config.hpp"

#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqstream {

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r";
  auto begin = s.find_first_not_of(ws);
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("config line " + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& value, std::size_t line_no) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    fail(line_no, "expected a number, got '" + value + "'");
  }
  if (used != value.size()) fail(line_no, "trailing junk after number '" + value + "'");
  return out;
}

std::size_t parse_size(const std::string& value, std::size_t line_no) {
  if (!value.empty() && value[0] == '-') fail(line_no, "expected a non-negative integer");
  std::size_t used = 0;
  unsigned long long out = 0;
  try {
    out = std::stoull(value, &used);
  } catch (const std::exception&) {
    fail(line_no, "expected an integer, got '" + value + "'");
  }
  if (used != value.size()) fail(line_no, "trailing junk after integer '" + value + "'");
  return static_cast<std::size_t>(out);
}

// Applies one base-parameter key; returns false if the key is not one.
bool apply_param_key(Hyperparams& p, const std::string& key, const std::string& value,
                     std::size_t line_no) {
  if (key == "epsilon") {
    p.epsilon = parse_double(value, line_no);
  } else if (key == "lambda") {
    p.lambda = parse_double(value, line_no);
  } else if (key == "mu") {
    p.mu = parse_double(value, line_no);
  } else if (key == "t_gap") {
    p.t_gap = parse_size(value, line_no);
  } else if (key == "m_u") {
    p.m_u = parse_size(value, line_no);
  } else if (key == "min_models_for_matching") {
    p.min_models_for_matching = parse_size(value, line_no);
  } else {
    return false;
  }
  return true;
}

}  // namespace

PipelineConfig Config::pipeline_config() const {
  PipelineConfig cfg;
  cfg.grid = grid;
  cfg.group_rows = static_cast<std::uint32_t>(group_rows);
  cfg.group_cols = static_cast<std::uint32_t>(group_cols);
  cfg.layer1 = params;
  cfg.layer2 = layer2;
  return cfg;
}

Config parse_config(std::istream& in) {
  Config cfg;
  // layer2.* overrides are applied after the base params so line order
  // never matters.
  std::vector<std::pair<std::string, std::pair<std::string, std::size_t>>> layer2_keys;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;

    auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (value.empty()) fail(line_no, "empty value for '" + key + "'");

    if (apply_param_key(cfg.params, key, value, line_no)) continue;
    if (key.rfind("layer2.", 0) == 0) {
      layer2_keys.push_back({key.substr(7), {value, line_no}});
    } else if (key == "grid.rows") {
      cfg.grid.rows = parse_size(value, line_no);
    } else if (key == "grid.cols") {
      cfg.grid.cols = parse_size(value, line_no);
    } else if (key == "frame.width") {
      cfg.grid.frame_width = parse_double(value, line_no);
    } else if (key == "frame.height") {
      cfg.grid.frame_height = parse_double(value, line_no);
    } else if (key == "group.rows") {
      cfg.group_rows = parse_size(value, line_no);
    } else if (key == "group.cols") {
      cfg.group_cols = parse_size(value, line_no);
    } else {
      fail(line_no, "unknown key '" + key + "'");
    }
  }

  cfg.layer2 = cfg.params;
  for (const auto& [key, entry] : layer2_keys) {
    if (!apply_param_key(cfg.layer2, key, entry.first, entry.second)) {
      fail(entry.second, "unknown key 'layer2." + key + "'");
    }
  }

  cfg.params.validate();
  cfg.layer2.validate();
  cfg.grid.validate();
  if (cfg.group_rows == 0 || cfg.group_cols == 0) {
    throw std::runtime_error("config: group.rows and group.cols must be positive");
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  try {
    return parse_config(in);
  } catch (const std::runtime_error& err) {
    throw std::runtime_error(path + ": " + err.what());
  }
}

std::string format_config(const Config& cfg) {
  std::ostringstream out;
  auto emit_params = [&out](const Hyperparams& p, const char* prefix) {
    out << prefix << "epsilon = " << p.epsilon << '\n'
        << prefix << "lambda = " << p.lambda << '\n'
        << prefix << "mu = " << p.mu << '\n'
        << prefix << "t_gap = " << p.t_gap << '\n'
        << prefix << "m_u = " << p.m_u << '\n'
        << prefix << "min_models_for_matching = " << p.min_models_for_matching << '\n';
  };
  emit_params(cfg.params, "");
  emit_params(cfg.layer2, "layer2.");
  out << "grid.rows = " << cfg.grid.rows << '\n'
      << "grid.cols = " << cfg.grid.cols << '\n'
      << "frame.width = " << cfg.grid.frame_width << '\n'
      << "frame.height = " << cfg.grid.frame_height << '\n'
      << "group.rows = " << cfg.group_rows << '\n'
      << "group.cols = " << cfg.group_cols << '\n';
  return out.str();
}

}  // namespace seqstream
