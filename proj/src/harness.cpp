#include "smd/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "smd/csv.hpp"
#include "smd/gev.hpp"

namespace smd {

namespace {

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct ReplicateOutcome {
  double pe = 0.0;
  double ne = 0.0;
  bool pe_ok = false;
  bool ne_ok = false;
};

EstimatorStats aggregate(const std::vector<ReplicateOutcome>& out, bool ReplicateOutcome::*ok,
                         double ReplicateOutcome::*value) {
  std::vector<double> v;
  v.reserve(out.size());
  for (const auto& r : out) {
    if (r.*ok) v.push_back(r.*value);
  }
  EstimatorStats s;
  s.used = static_cast<long>(v.size());
  s.failures = static_cast<long>(out.size() - v.size());
  if (v.empty()) return s;
  s.mean = pairwise_sum(v.data(), v.size()) / static_cast<double>(v.size());
  for (double& x : v) x = (x - s.mean) * (x - s.mean);
  s.sd = std::sqrt(pairwise_sum(v.data(), v.size()) / static_cast<double>(v.size()));
  return s;
}

}  // namespace

std::string estimator_name(Estimator e) { return e == Estimator::PE ? "PE" : "NE"; }

void ExperimentConfig::validate() const {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (reps < 1) throw std::invalid_argument("reps must be at least 1");
  if (grid_points < 2) throw std::invalid_argument("grid_points must be at least 2");
  if (!run_pe && !run_ne) throw std::invalid_argument("no estimator selected");
  if (bandwidth.kind == BandwidthRule::Kind::Fixed && !(bandwidth.h > 0.0)) {
    throw std::invalid_argument("fixed bandwidth must be positive");
  }
  if (run_pe) {
    const std::size_t k = block_size(*this);
    if (k < 2) throw std::invalid_argument("block size must be at least 2");
    if (static_cast<std::size_t>(n) / k < 3) {
      throw std::invalid_argument("n = " + std::to_string(n) + " gives fewer than 3 blocks of size " +
                                  std::to_string(k));
    }
  }
  if (run_ne && bandwidth.kind == BandwidthRule::Kind::PlugIn && n < 20) {
    throw std::invalid_argument("plug-in bandwidth needs n >= 20");
  }
}

std::size_t block_size(const ExperimentConfig& config) {
  auto log_squared = [&] {
    const double l = std::log(static_cast<double>(config.m));
    return std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(l * l)));
  };
  switch (config.block.kind) {
    case BlockRule::Kind::Auto:
      return std::holds_alternative<WeibullClass>(config.family) ? log_squared()
                                                                  : static_cast<std::size_t>(config.m);
    case BlockRule::Kind::EqualHorizon:
      return static_cast<std::size_t>(config.m);
    case BlockRule::Kind::LogSquared:
      return log_squared();
    case BlockRule::Kind::Fixed:
      return config.block.k;
  }
  return static_cast<std::size_t>(config.m);
}

KernelSpec kernel_for(const ExperimentConfig& config) {
  switch (config.kernel.kind) {
    case KernelRule::Kind::Gaussian:
      return KernelSpec::gaussian();
    case KernelRule::Kind::Epanechnikov:
      return KernelSpec::epanechnikov();
    case KernelRule::Kind::Auto:
      break;
  }
  return std::holds_alternative<ReversedBurr>(config.family) ? KernelSpec::epanechnikov()
                                                             : KernelSpec::gaussian();
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

MiseGrid::MiseGrid(const SmdSpec& spec, int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("grid_points must be at least 2");
  const double lo = smd_quantile(spec, 0.1);
  const double hi = smd_quantile(spec, 0.9);
  length_ = hi - lo;
  x_.resize(static_cast<std::size_t>(grid_points));
  truth_.resize(x_.size());
  for (std::size_t j = 0; j < x_.size(); ++j) {
    x_[j] = j + 1 == x_.size() ? hi : lo + length_ * static_cast<double>(j) / (grid_points - 1.0);
    truth_[j] = smd_cdf(spec, x_[j]);
  }
}

double MiseGrid::operator()(const std::function<double(double)>& estimate) const {
  const std::size_t g = x_.size();
  double total = 0.0;
  for (std::size_t j = 0; j < g; ++j) {
    const double d = estimate(x_[j]) - truth_[j];
    total += (j == 0 || j + 1 == g ? 0.5 : 1.0) * d * d;
  }
  // Uniform step L / (g - 1) cancels against the 1 / L normalization.
  return total / (g - 1.0);
}

double mise(const std::function<double(double)>& estimate, const SmdSpec& spec, int grid_points) {
  return MiseGrid(spec, grid_points)(estimate);
}

MiseReport run_cell(const ExperimentConfig& config, int workers) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const SmdSpec spec(config.family, config.m);
  const MiseGrid grid(spec, config.grid_points);
  const std::size_t k = config.run_pe ? block_size(config) : 0;
  const KernelSpec kernel = kernel_for(config);

  std::optional<double> oracle_h;
  if (config.run_ne && config.bandwidth.kind == BandwidthRule::Kind::Oracle) {
    oracle_h = bandwidth_oracle(tail_expansion(config.family), kernel, smd_quantile(spec, 0.5),
                                static_cast<double>(config.n))
                   .value;
  }

  PeOptions pe_options;
  pe_options.rescale_to_horizon = config.rescale_pe;
  pe_options.horizon = static_cast<double>(config.m);
  pe_options.fit.min_blocks = 3;

  const auto reps = static_cast<std::size_t>(config.reps);
  std::vector<ReplicateOutcome> outcomes(reps);

  auto replicate = [&](std::size_t r) {
    auto rng = RngStream::substream(config.seed, r);
    const auto data = sample(config.family, static_cast<std::size_t>(config.n), rng);
    ReplicateOutcome& out = outcomes[r];
    if (config.run_pe) {
      try {
        const auto fit = fit_block_maxima(data, k, pe_options.fit);
        if (fit.converged) {
          out.pe = grid([&](double x) { return pe_evaluate(fit, x, pe_options); });
          out.pe_ok = std::isfinite(out.pe);
        }
      } catch (const FitError&) {
      }
    }
    if (config.run_ne) {
      try {
        double h = 0.0;
        switch (config.bandwidth.kind) {
          case BandwidthRule::Kind::PlugIn:
            h = bandwidth_plugin(data, kernel).value;
            break;
          case BandwidthRule::Kind::Oracle:
            h = *oracle_h;
            break;
          case BandwidthRule::Kind::Fixed:
            h = config.bandwidth.h;
            break;
        }
        const KernelCdfEstimator est(data, kernel, h);
        const double m = static_cast<double>(config.m);
        out.ne = grid([&](double x) { return est.power(x, m); });
        out.ne_ok = std::isfinite(out.ne);
      } catch (const std::invalid_argument&) {
      }
    }
  };

  const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(reps)));
  if (n_workers == 1) {
    for (std::size_t r = 0; r < reps; ++r) replicate(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    {
      std::vector<std::jthread> pool;
      for (int w = 0; w < n_workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t r = next++; r < reps && !failed; r = next++) {
            try {
              replicate(r);
            } catch (...) {
              if (!failed.exchange(true)) failure = std::current_exception();
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  MiseReport report;
  report.config = config;
  report.k = k;
  if (config.run_pe) {
    report.pe = aggregate(outcomes, &ReplicateOutcome::pe_ok, &ReplicateOutcome::pe);
    if (report.pe->used == 0) throw std::runtime_error("every PE replicate failed");
  }
  if (config.run_ne) {
    report.ne = aggregate(outcomes, &ReplicateOutcome::ne_ok, &ReplicateOutcome::ne);
    if (report.ne->used == 0) throw std::runtime_error("every NE replicate failed");
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

std::size_t TableReport::failed_cells() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.report ? 0 : 1;
  return n;
}

TableReport run_table(const std::vector<ExperimentConfig>& configs, int workers) {
  TableReport table;
  for (const auto& config : configs) {
    TableCell cell{config, std::nullopt, {}};
    try {
      cell.report = run_cell(config, workers);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
    table.cells.push_back(std::move(cell));
  }
  return table;
}

void write_table_csv(std::ostream& out, const TableReport& table) {
  write_csv_row(out, {"family", "params", "n", "m", "k", "estimator", "mean_x100", "sd_x100", "reps",
                      "failures"});
  for (const auto& cell : table.cells) {
    const auto& c = cell.config;
    for (Estimator e : {Estimator::PE, Estimator::NE}) {
      if ((e == Estimator::PE && !c.run_pe) || (e == Estimator::NE && !c.run_ne)) continue;
      CsvRow row{family_name(c.family), family_label(c.family), std::to_string(c.n), std::to_string(c.m)};
      row.push_back(c.run_pe ? std::to_string(block_size(c)) : "");
      row.push_back(estimator_name(e));
      const std::optional<EstimatorStats>* stats = nullptr;
      if (cell.report) stats = e == Estimator::PE ? &cell.report->pe : &cell.report->ne;
      if (stats && *stats) {
        row.push_back(fixed3(100.0 * (*stats)->mean));
        row.push_back(fixed3(100.0 * (*stats)->sd));
        row.push_back(std::to_string(c.reps));
        row.push_back(std::to_string((*stats)->failures));
      } else {
        row.insert(row.end(), {"", "", std::to_string(c.reps), std::to_string(c.reps)});
      }
      write_csv_row(out, row);
    }
  }
}

void write_table_text(std::ostream& out, const TableReport& table) {
  out << "Scaled MISE values (x100), sd in parentheses\n";
  out << std::left << std::setw(9) << "family" << std::setw(12) << "params" << std::right << std::setw(7)
      << "n" << std::setw(7) << "m" << std::setw(6) << "k" << std::setw(22) << "PE" << std::setw(22) << "NE"
      << '\n';
  auto column = [](const std::optional<EstimatorStats>& s) {
    if (!s) return std::string("-");
    std::string v = fixed3(100.0 * s->mean) + " (" + fixed3(100.0 * s->sd) + ")";
    if (s->failures) v += " f" + std::to_string(s->failures);
    return v;
  };
  for (const auto& cell : table.cells) {
    const auto& c = cell.config;
    out << std::left << std::setw(9) << family_name(c.family) << std::setw(12) << family_label(c.family)
        << std::right << std::setw(7) << c.n << std::setw(7) << c.m << std::setw(6)
        << (c.run_pe ? std::to_string(block_size(c)) : "-");
    if (cell.report) {
      out << std::setw(22) << column(cell.report->pe) << std::setw(22) << column(cell.report->ne) << '\n';
    } else {
      out << "  failed: " << cell.error << '\n';
    }
  }
}

}  // namespace smd
