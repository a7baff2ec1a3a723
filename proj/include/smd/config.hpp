#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "smd/harness.hpp"

namespace smd {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raw key = value settings of one cell section.
using Settings = std::map<std::string, std::string>;

/// Keys accepted in a config file or assembled from command-line flags.
const std::vector<std::string>& config_keys();

/// Expands one settings block into cells, looping n, then m, then shape
/// (innermost). List values are whitespace separated; m accepts n^p tokens.
std::vector<ExperimentConfig> expand_settings(const Settings& settings);

/// Config file: `key = value` lines and `#` comments. Settings before the
/// first `[cell]` header are defaults inherited by every cell. A file with
/// no `[cell]` header is a single cell.
std::vector<ExperimentConfig> parse_config(std::istream& in, const std::string& source = "<config>");
std::vector<ExperimentConfig> load_config(const std::string& path);

}  // namespace smd
