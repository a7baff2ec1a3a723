#pragma once

#include <span>
#include <string>
#include <vector>

#include "smd/distributions.hpp"
#include "smd/kernel_spec.hpp"

namespace smd {

inline KernelSpec gaussian() { return KernelSpec::gaussian(); }
inline KernelSpec epanechnikov() { return KernelSpec::epanechnikov(); }

struct Bandwidth {
  enum class Method { PlugIn, TheoryOracle, Fixed };

  /// Throws std::invalid_argument unless h is positive and finite.
  static Bandwidth fixed(double h);

  double value;
  Method method;
};

std::string method_name(Bandwidth::Method method);

/// Kernel distribution estimator on a sorted copy of the data. Observations
/// further than cutoff() * h from x contribute K = 0 or 1 and are counted
/// instead of summed. Immutable after construction.
class KernelCdfEstimator {
public:
  KernelCdfEstimator(std::span<const double> data, KernelSpec kernel, double h);

  double operator()(double x) const;

  /// F-hat(x)^m, computed as exp(m ln F-hat(x)).
  double power(double x, double m) const;

  std::size_t size() const { return sorted_.size(); }
  double bandwidth() const { return h_; }
  const KernelSpec& kernel() const { return kernel_; }

private:
  std::vector<double> sorted_;
  KernelSpec kernel_;
  double h_;
};

/// (1/n) sum K((x - X_i) / h). Throws std::invalid_argument on empty data.
double kernel_cdf(std::span<const double> data, const KernelSpec& kernel, const Bandwidth& h, double x);

/// Direct n-term sum with no sorting or truncation.
double kernel_cdf_bruteforce(std::span<const double> data, const KernelSpec& kernel, double h, double x);

double ne_estimate(std::span<const double> data, const KernelSpec& kernel, const Bandwidth& h, double m,
                   double x);

/// Global AMISE-optimal bandwidth h = (2 psi_half / (mu2^2 R n))^{1/3}, with
/// R = int f'^2 estimated by a Gaussian kernel functional at a
/// normal-reference pilot bandwidth. Needs n >= 20 and positive variance.
Bandwidth bandwidth_plugin(std::span<const double> data, const KernelSpec& kernel);

/// Pointwise optimal bandwidth from known tail-class parameters.
Bandwidth bandwidth_oracle(const TailClassParams& cls, const KernelSpec& kernel, double x, double n);

}  // namespace smd
