#include "smd/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "smd/csv.hpp"
#include "smd/gev.hpp"
#include "smd/kernel.hpp"

namespace smd {

namespace {

std::string general(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string strip_csv_suffix(const std::string& path) {
  if (path.size() > 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return path.substr(0, path.size() - 4);
  return path;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("error writing " + path);
}

// Smallest x on [lo, hi] with f(x) >= target, for nondecreasing f.
template <class F>
double bisect_up(F f, double lo, double hi, double target) {
  for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) >= target ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

void write_rate_table_csv(std::ostream& out, const std::vector<RateRow>& rows, long reference_n) {
  write_csv_row(out, {"family", "params", "p", "m", "pe", "ne", "L_m", "L_m_1sf"});
  for (const auto& row : rows) {
    for (const auto& cell : row.cells) {
      const long m = std::lround(std::pow(static_cast<double>(reference_n), to_double(cell.p)));
      write_csv_row(out, {family_name(row.family), family_label(row.family), to_string(cell.p),
                          std::to_string(m), cell.pe ? to_string(*cell.pe) : "",
                          cell.ne ? to_string(*cell.ne) : "", general(cell.length_L),
                          general(round_1sf(cell.length_L))});
    }
  }
}

int cmd_rates(long reference_n, const std::string& out_path, std::ostream& stdout_stream) {
  const auto rows = rate_table(reference_n);
  std::ostringstream csv;
  write_rate_table_csv(csv, rows, reference_n);
  if (out_path.empty()) {
    stdout_stream << csv.str();
  } else {
    write_file(out_path, csv.str());
  }
  return kExitOk;
}

int cmd_simulate(const std::vector<ExperimentConfig>& cells, int workers, const std::string& out,
                 std::ostream& stdout_stream, std::ostream& log) {
  const auto table = run_table(cells, workers);
  std::ostringstream csv;
  std::ostringstream text;
  write_table_csv(csv, table);
  write_table_text(text, table);
  if (out.empty()) {
    stdout_stream << csv.str();
  } else {
    const auto stem = strip_csv_suffix(out);
    write_file(stem + ".csv", csv.str());
    write_file(stem + ".txt", text.str());
  }
  double wall = 0.0;
  for (const auto& cell : table.cells) {
    if (cell.report) {
      wall += cell.report->wall_seconds;
    } else {
      log << "warning: cell " << family_name(cell.config.family) << " " << family_label(cell.config.family)
          << " n=" << cell.config.n << " m=" << cell.config.m << " failed: " << cell.error << '\n';
    }
  }
  log << table.cells.size() << " cells, " << table.failed_cells() << " failed, " << general(wall, 3)
      << " s\n";
  if (!table.cells.empty() && table.failed_cells() == table.cells.size()) return kExitPartial;
  return kExitOk;
}

int cmd_fit(const FitRequest& request, std::ostream& log) {
  if (request.m < 1) throw std::invalid_argument("m must be at least 1");
  if (request.grid_points < 2) throw std::invalid_argument("grid must have at least 2 points");
  if (!request.run_pe && !request.run_ne) throw std::invalid_argument("no estimator selected");

  const DataSeries series = ingest_csv(request.input, request.column);
  const std::size_t n = series.values.size();
  const double m = static_cast<double>(request.m);
  std::vector<std::string> warnings;
  auto warn = [&](const std::string& w) {
    warnings.push_back(w);
    log << "warning: " << w << '\n';
  };

  nlohmann::ordered_json summary;
  summary["source"] = series.source;
  summary["label"] = request.label.empty() ? series.label : request.label;
  summary["n"] = n;
  summary["min"] = series.min();
  summary["max"] = series.max();
  summary["m"] = request.m;

  std::optional<FitResult> fit;
  PeOptions pe_options;
  pe_options.fit.min_blocks = 3;
  if (request.run_pe) {
    const std::size_t k =
        request.block ? *request.block
                      : std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(std::sqrt(double(n)))));
    pe_options.rescale_to_horizon = k != static_cast<std::size_t>(request.m);
    pe_options.horizon = m;
    if (n < 50) {
      warn("PE needs at least 50 observations, got " + std::to_string(n));
    } else {
      try {
        fit = fit_block_maxima(series.values, k, pe_options.fit);
        if (!fit->converged) {
          warn("GEV fit did not converge");
          fit.reset();
        }
      } catch (const std::exception& e) {
        warn(std::string("GEV fit failed: ") + e.what());
      }
    }
    if (fit) {
      summary["pe"] = {{"gamma", fit->params.gamma},
                       {"scale", fit->params.scale},
                       {"loc", fit->params.loc},
                       {"k", fit->block_size},
                       {"N", fit->n_blocks},
                       {"loglik", fit->loglik},
                       {"horizon_rescaled", pe_options.rescale_to_horizon}};
    } else {
      summary["pe"] = nullptr;
    }
  }

  std::optional<KernelCdfEstimator> ne;
  if (request.run_ne) {
    ExperimentConfig probe;
    probe.kernel = request.kernel;
    const KernelSpec kernel = kernel_for(probe);
    const Bandwidth h = request.bandwidth ? Bandwidth::fixed(*request.bandwidth) : bandwidth_plugin(series.values, kernel);
    ne.emplace(series.values, kernel, h.value);
    summary["ne"] = {{"bandwidth", h.value}, {"bandwidth_method", method_name(h.method)}, {"kernel", kernel.name()}};
  }

  auto pe_at = [&](double x) { return pe_evaluate(*fit, x, pe_options); };
  auto ne_at = [&](double x) { return ne->power(x, m); };

  // Grid from the data minimum to the larger of the data maximum and the
  // fitted 0.999 quantile of the horizon maximum.
  const double lo = series.min();
  double hi = series.max();
  if (fit) {
    const double q = pe_options.rescale_to_horizon
                         ? std::exp(std::log(0.999) * static_cast<double>(fit->block_size) / m)
                         : 0.999;
    hi = std::max(hi, gev_quantile(fit->params, q));
  }
  if (ne) {
    const double top = series.max() + ne->kernel().cutoff() * ne->bandwidth();
    if (ne_at(top) >= 0.999) hi = std::max(hi, bisect_up(ne_at, lo, top, 0.999));
  }
  if (!(hi > lo)) hi = lo + 1.0;
  summary["grid"] = {{"from", lo}, {"to", hi}, {"points", request.grid_points}};

  std::ostringstream csv;
  write_csv_row(csv, {"x", "smd_pe", "smd_ne"});
  for (int j = 0; j < request.grid_points; ++j) {
    const double x = j + 1 == request.grid_points ? hi : lo + (hi - lo) * j / (request.grid_points - 1.0);
    write_csv_row(csv, {general(x, 12), fit ? general(pe_at(x), 12) : "", ne ? general(ne_at(x), 12) : ""});
  }

  nlohmann::ordered_json exceed = nlohmann::ordered_json::array();
  for (double t : request.thresholds) {
    nlohmann::ordered_json e = {{"x", t}};
    e["exceed_pe"] = fit ? nlohmann::ordered_json(1.0 - pe_at(t)) : nlohmann::ordered_json(nullptr);
    e["exceed_ne"] = ne ? nlohmann::ordered_json(1.0 - ne_at(t)) : nlohmann::ordered_json(nullptr);
    exceed.push_back(e);
  }
  summary["exceedance"] = exceed;
  summary["warnings"] = warnings;

  const auto stem = strip_csv_suffix(request.out);
  write_file(stem + ".csv", csv.str());
  write_file(stem + ".json", summary.dump(2) + "\n");
  return warnings.empty() ? kExitOk : kExitPartial;
}

FitRequest case_preset(const std::string& name, const std::string& input) {
  if (name != "potomac" && name != "danish") {
    throw std::invalid_argument("unknown case study '" + name + "' (potomac, danish)");
  }
  FitRequest r;
  r.input = input;
  r.m = 100;
  r.run_pe = r.run_ne = true;
  r.label = name;
  r.out = name;
  return r;
}

}  // namespace smd
