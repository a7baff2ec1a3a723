#pragma once

#include <functional>
#include <span>
#include <vector>

namespace smd {

struct SimplexResult {
  std::vector<double> x;
  double value;
  int iterations;
  bool converged;
};

/// Derivative-free Nelder-Mead minimization. The objective may return +inf
/// to mark infeasible points. Converged when the simplex diameter falls
/// below `tolerance` and the vertex values agree to the same relative level.
SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                          std::vector<double> start, std::vector<double> step, double tolerance,
                          int max_iterations);

}  // namespace smd
