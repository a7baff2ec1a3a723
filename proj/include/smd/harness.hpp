#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "smd/distributions.hpp"
#include "smd/kernel.hpp"

namespace smd {

enum class Estimator { PE, NE };

std::string estimator_name(Estimator e);

struct BlockRule {
  /// Auto: k = round((ln m)^2) (at least 2) for the Weibull family, k = m otherwise.
  enum class Kind { Auto, EqualHorizon, LogSquared, Fixed };
  Kind kind = Kind::Auto;
  std::size_t k = 0;  // Fixed only
};

struct KernelRule {
  /// Auto: Epanechnikov for the reversed Burr, Gaussian otherwise.
  enum class Kind { Auto, Gaussian, Epanechnikov };
  Kind kind = Kind::Auto;
};

struct BandwidthRule {
  /// Oracle evaluates the pointwise optimum at the horizon median Q_m(0.5).
  enum class Kind { PlugIn, Oracle, Fixed };
  Kind kind = Kind::PlugIn;
  double h = 0.0;  // Fixed only
};

struct ExperimentConfig {
  TailFamily family = Pareto(1.0);
  long n = 256;
  long m = 4;
  long reps = 500;
  bool run_pe = true;
  bool run_ne = true;
  BlockRule block;
  KernelRule kernel;
  BandwidthRule bandwidth;
  int grid_points = 201;
  std::uint64_t seed = 20240601;
  /// Raise the block-k GEV fit to the power m/k before comparing.
  bool rescale_pe = false;

  /// Throws std::invalid_argument describing the first problem found.
  void validate() const;
};

std::size_t block_size(const ExperimentConfig& config);
KernelSpec kernel_for(const ExperimentConfig& config);

/// Uniform grid over [Q_m(0.1), Q_m(0.9)] with F^m precomputed.
class MiseGrid {
public:
  MiseGrid(const SmdSpec& spec, int grid_points);

  /// L^{-1} * trapezoid integral of (estimate - F^m)^2.
  double operator()(const std::function<double(double)>& estimate) const;

  const std::vector<double>& points() const { return x_; }
  const std::vector<double>& truth() const { return truth_; }
  double length() const { return length_; }

private:
  std::vector<double> x_;
  std::vector<double> truth_;
  double length_;
};

double mise(const std::function<double(double)>& estimate, const SmdSpec& spec, int grid_points = 201);

/// Mean and population sd via pairwise summation in replicate order.
struct EstimatorStats {
  double mean = 0.0;
  double sd = 0.0;
  long used = 0;
  long failures = 0;
};

struct MiseReport {
  ExperimentConfig config;
  std::size_t k = 0;
  std::optional<EstimatorStats> pe;
  std::optional<EstimatorStats> ne;
  double wall_seconds = 0.0;
};

/// Runs all replicates on `workers` threads. The report does not depend on
/// the worker count. Throws std::runtime_error if every replicate of a
/// requested estimator failed.
MiseReport run_cell(const ExperimentConfig& config, int workers = 1);

struct TableCell {
  ExperimentConfig config;
  std::optional<MiseReport> report;
  std::string error;
};

struct TableReport {
  std::vector<TableCell> cells;
  std::size_t failed_cells() const;
};

TableReport run_table(const std::vector<ExperimentConfig>& configs, int workers = 1);

/// family,params,n,m,k,estimator,mean_x100,sd_x100,reps,failures
void write_table_csv(std::ostream& out, const TableReport& table);
void write_table_text(std::ostream& out, const TableReport& table);

/// Pairwise (cascade) sum; fixed reduction tree for a given length.
double pairwise_sum(const double* v, std::size_t n);

}  // namespace smd
