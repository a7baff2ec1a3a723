#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "smd/evt_theory.hpp"
#include "smd/harness.hpp"

namespace smd {

/// Process exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitPartial = 1, kExitUsage = 2 };

/// family,params,p,m,pe,ne,L_m,L_m_1sf; unset exponents are empty fields.
void write_rate_table_csv(std::ostream& out, const std::vector<RateRow>& rows, long reference_n);

/// Writes the rate table to `out_path`, or to `stdout_stream` when the path is empty.
int cmd_rates(long reference_n, const std::string& out_path, std::ostream& stdout_stream);

/// Runs the cells and writes <out>.csv and <out>.txt (CSV to `stdout_stream`
/// when out is empty). Returns kExitPartial only if every cell failed.
int cmd_simulate(const std::vector<ExperimentConfig>& cells, int workers, const std::string& out,
                 std::ostream& stdout_stream, std::ostream& log);

struct FitRequest {
  std::string input;
  std::string column;
  long m = 100;
  bool run_pe = true;
  bool run_ne = true;
  std::optional<std::size_t> block;  // unset: round(sqrt(n))
  std::optional<double> bandwidth;   // unset: plug-in
  KernelRule kernel;
  int grid_points = 201;
  std::vector<double> thresholds;
  std::string out = "fit";
  std::string label;
};

/// Writes <out>.csv (x, smd_pe, smd_ne) and <out>.json. A failed GEV fit
/// drops the PE column with a warning and returns kExitPartial.
int cmd_fit(const FitRequest& request, std::ostream& log);

/// Case-study preset for cmd_fit: m = 100, both estimators.
FitRequest case_preset(const std::string& name, const std::string& input);

}  // namespace smd
