// Command-line front end: rates, simulate, fit, case.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "smd/commands.hpp"
#include "smd/config.hpp"
#include "smd/csv.hpp"

namespace {

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("SMD_SEED");
  if (!v || !*v) return std::nullopt;
  try {
    std::size_t used = 0;
    const auto s = std::stoull(v, &used);
    if (used == std::string(v).size()) return s;
  } catch (const std::exception&) {
  }
  throw smd::ConfigError(std::string("SMD_SEED is not an unsigned integer: ") + v);
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += (out.empty() ? "" : " ") + t;
  return out;
}

smd::KernelRule parse_kernel(const std::string& name) {
  smd::KernelRule rule;
  if (name == "gaussian") {
    rule.kind = smd::KernelRule::Kind::Gaussian;
  } else if (name == "epanechnikov") {
    rule.kind = smd::KernelRule::Kind::Epanechnikov;
  } else if (name != "auto") {
    throw smd::ConfigError("unknown kernel '" + name + "'");
  }
  return rule;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sample maximum distribution estimation: GEV block maxima (PE) and kernel (NE)"};
  app.require_subcommand(1);

  // rates
  auto* rates = app.add_subcommand("rates", "Write the MSE rate table with L_m as CSV");
  long reference_n = 4096;
  std::string rates_out;
  rates->add_option("--n", reference_n, "Reference sample size (power of two)")->capture_default_str();
  rates->add_option("--out", rates_out, "Output CSV (default stdout)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo MISE of PE and NE");
  std::string config_path, sim_out, family, estimators = "pe ne", block = "auto",
                                                                    bandwidth = "plugin", kernel = "auto";
  std::vector<std::string> shape, n_list, m_list;
  std::optional<std::uint64_t> seed;
  std::optional<long> reps;
  int workers = 1;
  int grid = 201;
  bool full_reps = false;
  simulate->add_option("--config", config_path, "Experiment config file");
  simulate->add_option("--seed", seed, "Master seed (overrides config and SMD_SEED)");
  simulate->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--out", sim_out, "Output stem: writes <stem>.csv and <stem>.txt (default CSV to stdout)");
  simulate->add_option("--family", family, "pareto | t | burr | frechet | weibull | revburr");
  simulate->add_option("--shape", shape, "Family parameters, e.g. 3 or 3,1/2 (space separated list)");
  simulate->add_option("--n", n_list, "Sample size(s)");
  simulate->add_option("--m", m_list, "Horizon(s); n^1/4 style tokens allowed");
  simulate->add_option("--reps", reps, "Replicates per cell");
  simulate->add_option("--estimators", estimators, "pe, ne or both")->capture_default_str();
  simulate->add_option("--block", block, "auto | m | logsq | <k>")->capture_default_str();
  simulate->add_option("--bandwidth", bandwidth, "plugin | oracle | <h>")->capture_default_str();
  simulate->add_option("--kernel", kernel, "auto | gaussian | epanechnikov")->capture_default_str();
  simulate->add_option("--grid", grid, "MISE grid points")->capture_default_str();
  simulate->add_flag("--full-reps", full_reps, "Long run: 10000 replicates per cell");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit PE and/or NE to a data column");
  smd::FitRequest request;
  std::string fit_estimators = "both";
  std::string fit_block = "auto", fit_bandwidth = "auto", fit_kernel = "gaussian";
  fit->add_option("input", request.input, "CSV file")->required();
  fit->add_option("--column", request.column, "Column name or 1-based index");
  fit->add_option("--m", request.m, "Horizon")->capture_default_str();
  fit->add_option("--estimators", fit_estimators, "pe, ne or both")->capture_default_str();
  fit->add_option("--block", fit_block, "Block size or auto (round(sqrt(n)))")->capture_default_str();
  fit->add_option("--bandwidth", fit_bandwidth, "Bandwidth or auto (plug-in)")->capture_default_str();
  fit->add_option("--kernel", fit_kernel, "gaussian | epanechnikov")->capture_default_str();
  fit->add_option("--grid", request.grid_points, "Curve grid points")->capture_default_str();
  fit->add_option("--threshold", request.thresholds, "Report exceedance probability at x (repeatable)");
  fit->add_option("--out", request.out, "Output stem: writes <stem>.csv and <stem>.json")->capture_default_str();

  // case
  auto* case_cmd = app.add_subcommand("case", "Case-study preset of fit (m = 100, both estimators)");
  std::string case_name, case_input, case_column, case_out;
  std::vector<double> case_thresholds;
  case_cmd->add_option("name", case_name, "potomac | danish")->required();
  case_cmd->add_option("input", case_input, "CSV file")->required();
  case_cmd->add_option("--column", case_column, "Column name or 1-based index");
  case_cmd->add_option("--threshold", case_thresholds, "Report exceedance probability at x (repeatable)");
  case_cmd->add_option("--out", case_out, "Output stem (default: the case name)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? smd::kExitOk : smd::kExitUsage;
  }

  try {
    if (*rates) return smd::cmd_rates(reference_n, rates_out, std::cout);

    if (*simulate) {
      std::vector<smd::ExperimentConfig> cells;
      if (!config_path.empty()) {
        if (!family.empty() || !shape.empty() || !n_list.empty() || !m_list.empty()) {
          throw smd::ConfigError("--config cannot be combined with --family/--shape/--n/--m");
        }
        cells = smd::load_config(config_path);
      } else {
        smd::Settings s{{"family", family},         {"shape", join(shape)},  {"n", join(n_list)},
                        {"m", join(m_list)},               {"estimators", estimators},
                        {"block", block},           {"bandwidth", bandwidth},
                        {"kernel", kernel},         {"grid_points", std::to_string(grid)}};
        if (reps) s["reps"] = std::to_string(*reps);
        cells = smd::expand_settings(s);
      }
      const auto effective_seed = seed ? seed : env_seed();
      for (auto& c : cells) {
        if (effective_seed) c.seed = *effective_seed;
        if (full_reps) c.reps = 10000;
        if (reps && !config_path.empty()) c.reps = *reps;
      }
      return smd::cmd_simulate(cells, workers, sim_out, std::cout, std::cerr);
    }

    if (*fit) {
      request.run_pe = fit_estimators == "pe" || fit_estimators == "both";
      request.run_ne = fit_estimators == "ne" || fit_estimators == "both";
      if (!request.run_pe && !request.run_ne) throw smd::ConfigError("--estimators must be pe, ne or both");
      if (fit_block != "auto") request.block = std::stoul(fit_block);
      if (fit_bandwidth != "auto") {
        const auto h = smd::parse_double(fit_bandwidth);
        if (!h) throw smd::ConfigError("--bandwidth must be a number or auto");
        request.bandwidth = *h;
      }
      request.kernel = parse_kernel(fit_kernel);
      return smd::cmd_fit(request, std::cerr);
    }

    if (*case_cmd) {
      auto preset = smd::case_preset(case_name, case_input);
      preset.column = case_column;
      preset.thresholds = case_thresholds;
      if (!case_out.empty()) preset.out = case_out;
      return smd::cmd_fit(preset, std::cerr);
    }
  } catch (const smd::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return smd::kExitUsage;
  } catch (const smd::IngestError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return smd::kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return smd::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return smd::kExitPartial;
  }
  return smd::kExitUsage;
}
