#include "smd/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "smd/csv.hpp"

namespace smd {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> tokens(const std::string& value) {
  std::istringstream in(value);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

long parse_long(const std::string& key, const std::string& token) {
  const auto v = parse_double(token);
  if (!v || *v != std::floor(*v) || std::abs(*v) > 9e15) {
    throw ConfigError(key + ": expected an integer, got '" + token + "'");
  }
  return static_cast<long>(*v);
}

double parse_fraction(const std::string& key, const std::string& token) {
  const auto slash = token.find('/');
  if (slash == std::string::npos) {
    if (auto v = parse_double(token)) return *v;
  } else {
    const auto num = parse_double(token.substr(0, slash));
    const auto den = parse_double(token.substr(slash + 1));
    if (num && den && *den != 0.0) return *num / *den;
  }
  throw ConfigError(key + ": expected a number, got '" + token + "'");
}

long parse_horizon(const std::string& token, long n) {
  if (token.rfind("n^", 0) == 0) {
    const double p = parse_fraction("m", token.substr(2));
    if (!(p > 0.0)) throw ConfigError("m: exponent must be positive in '" + token + "'");
    return std::lround(std::pow(static_cast<double>(n), p));
  }
  return parse_long("m", token);
}

std::string setting(const Settings& s, const std::string& key, const std::string& fallback) {
  const auto it = s.find(key);
  return it == s.end() ? fallback : it->second;
}

void apply_scalars(const Settings& s, ExperimentConfig& c) {
  c.reps = parse_long("reps", setting(s, "reps", std::to_string(c.reps)));
  c.seed = static_cast<std::uint64_t>(parse_long("seed", setting(s, "seed", std::to_string(c.seed))));
  c.grid_points = static_cast<int>(parse_long("grid_points", setting(s, "grid_points", "201")));

  const auto est = tokens(lower(setting(s, "estimators", "pe ne")));
  c.run_pe = c.run_ne = false;
  for (const auto& e : est) {
    if (e == "pe") {
      c.run_pe = true;
    } else if (e == "ne") {
      c.run_ne = true;
    } else if (e == "both") {
      c.run_pe = c.run_ne = true;
    } else {
      throw ConfigError("estimators: unknown estimator '" + e + "' (pe, ne, both)");
    }
  }

  const auto block = lower(trim(setting(s, "block", "auto")));
  if (block == "auto") {
    c.block.kind = BlockRule::Kind::Auto;
  } else if (block == "m") {
    c.block.kind = BlockRule::Kind::EqualHorizon;
  } else if (block == "logsq") {
    c.block.kind = BlockRule::Kind::LogSquared;
  } else {
    c.block.kind = BlockRule::Kind::Fixed;
    c.block.k = static_cast<std::size_t>(parse_long("block", block));
  }

  const auto kernel = lower(trim(setting(s, "kernel", "auto")));
  if (kernel == "auto") {
    c.kernel.kind = KernelRule::Kind::Auto;
  } else if (kernel == "gaussian") {
    c.kernel.kind = KernelRule::Kind::Gaussian;
  } else if (kernel == "epanechnikov") {
    c.kernel.kind = KernelRule::Kind::Epanechnikov;
  } else {
    throw ConfigError("kernel: unknown kernel '" + kernel + "' (auto, gaussian, epanechnikov)");
  }

  const auto bw = lower(trim(setting(s, "bandwidth", "plugin")));
  if (bw == "plugin") {
    c.bandwidth.kind = BandwidthRule::Kind::PlugIn;
  } else if (bw == "oracle") {
    c.bandwidth.kind = BandwidthRule::Kind::Oracle;
  } else {
    c.bandwidth.kind = BandwidthRule::Kind::Fixed;
    c.bandwidth.h = parse_fraction("bandwidth", bw);
  }

  const auto rescale = lower(trim(setting(s, "rescale_pe", "false")));
  if (rescale != "true" && rescale != "false") throw ConfigError("rescale_pe: expected true or false");
  c.rescale_pe = rescale == "true";
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {"family", "shape",  "n",         "m",           "reps",
                                                "seed",   "estimators", "block", "bandwidth", "kernel",
                                                "grid_points", "rescale_pe"};
  return keys;
}

std::vector<ExperimentConfig> expand_settings(const Settings& settings) {
  for (const auto& [key, value] : settings) {
    if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end()) {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  for (const char* required : {"family", "shape", "n", "m"}) {
    if (!settings.count(required) || tokens(settings.at(required)).empty()) {
      throw ConfigError(std::string("missing required key '") + required + "'");
    }
  }

  ExperimentConfig base;
  apply_scalars(settings, base);
  const std::string family = lower(trim(settings.at("family")));

  std::vector<ExperimentConfig> cells;
  for (const auto& n_token : tokens(settings.at("n"))) {
    const long n = parse_long("n", n_token);
    for (const auto& m_token : tokens(settings.at("m"))) {
      const long m = parse_horizon(m_token, n);
      for (const auto& shape : tokens(settings.at("shape"))) {
        ExperimentConfig c = base;
        try {
          c.family = make_family(family, shape);
        } catch (const std::exception& e) {
          throw ConfigError("family " + family + " shape '" + shape + "': " + e.what());
        }
        c.n = n;
        c.m = m;
        try {
          c.validate();
        } catch (const std::invalid_argument& e) {
          throw ConfigError(family + " " + shape + " n=" + std::to_string(n) + " m=" + std::to_string(m) +
                            ": " + e.what());
        }
        cells.push_back(std::move(c));
      }
    }
  }
  return cells;
}

std::vector<ExperimentConfig> parse_config(std::istream& in, const std::string& source) {
  Settings defaults;
  std::vector<std::pair<int, Settings>> sections;
  Settings* current = &defaults;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = source + ":" + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (lower(line) != "[cell]") throw ConfigError(where + "unknown section " + line);
      sections.emplace_back(line_no, defaults);
      current = &sections.back().second;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const auto key = lower(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end()) {
      throw ConfigError(where + "unknown key '" + key + "'");
    }
    (*current)[key] = value;
  }
  if (sections.empty()) sections.emplace_back(1, defaults);

  std::vector<ExperimentConfig> cells;
  for (const auto& [start, settings] : sections) {
    try {
      auto expanded = expand_settings(settings);
      cells.insert(cells.end(), expanded.begin(), expanded.end());
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(start) + ": " + e.what());
    }
  }
  return cells;
}

std::vector<ExperimentConfig> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in, path);
}

}  // namespace smd
