#pragma once

// Flat key/value config files: one `key = value` per line, `#` comments,
// blank lines ignored. Unknown keys are rejected so typos surface early.

#include <iosfwd>
#include <string>

#include "seqstream/pipeline.hpp"
#include "seqstream/types.hpp"

namespace seqstream {

struct Config {
  Hyperparams params;      // single-node runs and pipeline layer 1
  Hyperparams layer2;      // pipeline layer 2, defaults mirror params
  GridSpec grid{64.0, 64.0, 2, 2};
  std::size_t group_rows = 1;
  std::size_t group_cols = 1;

  PipelineConfig pipeline_config() const;
};

Config parse_config(std::istream& in);
Config load_config(const std::string& path);

// Text form that parse_config accepts; used by the CLI to echo settings.
std::string format_config(const Config& cfg);

}  // namespace seqstream
