#include "smd/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "smd/evt_theory.hpp"

namespace smd {

namespace {

// Beyond this many pilot bandwidths the normal second derivative is below
// 1e-12 of its peak.
constexpr double kPilotCutoff = 8.0;

void require_data(std::span<const double> data) {
  if (data.empty()) throw std::invalid_argument("kernel estimator needs data");
}

}  // namespace

Bandwidth Bandwidth::fixed(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("bandwidth must be positive and finite");
  return Bandwidth{h, Method::Fixed};
}

std::string method_name(Bandwidth::Method method) {
  switch (method) {
    case Bandwidth::Method::PlugIn:
      return "plugin";
    case Bandwidth::Method::TheoryOracle:
      return "oracle";
    case Bandwidth::Method::Fixed:
      return "fixed";
  }
  return "unknown";
}

KernelCdfEstimator::KernelCdfEstimator(std::span<const double> data, KernelSpec kernel, double h)
    : sorted_(data.begin(), data.end()), kernel_(kernel), h_(h) {
  require_data(data);
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("bandwidth must be positive and finite");
  std::sort(sorted_.begin(), sorted_.end());
}

double KernelCdfEstimator::operator()(double x) const {
  const double reach = kernel_.cutoff() * h_;
  const auto lo = std::upper_bound(sorted_.begin(), sorted_.end(), x - reach);
  const auto hi = std::lower_bound(lo, sorted_.end(), x + reach);
  // Everything at or below x - reach has K = 1.
  double total = static_cast<double>(lo - sorted_.begin());
  for (auto it = lo; it != hi; ++it) total += kernel_.integrated((x - *it) / h_);
  return std::clamp(total / static_cast<double>(sorted_.size()), 0.0, 1.0);
}

double KernelCdfEstimator::power(double x, double m) const {
  const double f = (*this)(x);
  if (f <= 0.0) return 0.0;
  return std::exp(m * std::log(f));
}

double kernel_cdf(std::span<const double> data, const KernelSpec& kernel, const Bandwidth& h, double x) {
  return KernelCdfEstimator(data, kernel, h.value)(x);
}

double kernel_cdf_bruteforce(std::span<const double> data, const KernelSpec& kernel, double h, double x) {
  require_data(data);
  double total = 0.0;
  for (double xi : data) total += kernel.integrated((x - xi) / h);
  return total / static_cast<double>(data.size());
}

double ne_estimate(std::span<const double> data, const KernelSpec& kernel, const Bandwidth& h, double m,
                   double x) {
  if (!(m >= 1.0)) throw std::invalid_argument("horizon must be at least 1");
  return KernelCdfEstimator(data, kernel, h.value).power(x, m);
}

Bandwidth bandwidth_plugin(std::span<const double> data, const KernelSpec& kernel) {
  const std::size_t n = data.size();
  if (n < 20) throw std::invalid_argument("plug-in bandwidth needs at least 20 observations");
  std::vector<double> x(data.begin(), data.end());
  std::sort(x.begin(), x.end());

  const double nd = static_cast<double>(n);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= nd;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (nd - 1.0));
  if (!(sd > 0.0) || !std::isfinite(sd)) throw std::invalid_argument("plug-in bandwidth needs positive variance");

  const double sqrt_pi = std::sqrt(std::numbers::pi);
  const double psi4 = 3.0 / (8.0 * sqrt_pi * std::pow(sd, 5.0));
  const double g = std::pow(2.0 / std::sqrt(2.0 * std::numbers::pi) / (psi4 * nd), 0.2);

  // psi2(g) = n^-2 g^-3 sum_ij phi''((X_i - X_j) / g), diagonal included.
  const double phi0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const double reach = kPilotCutoff * g;
  double off_diagonal = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n && x[j] - x[i] < reach; ++j) {
      const double u = (x[j] - x[i]) / g;
      off_diagonal += (u * u - 1.0) * std::exp(-0.5 * u * u);
    }
  }
  const double psi2 = (2.0 * off_diagonal - nd) * phi0 / (nd * nd * g * g * g);
  double roughness = -psi2;
  if (!(roughness > 0.0)) roughness = 1.0 / (4.0 * sqrt_pi * sd * sd * sd);

  const double mu2 = kernel.mu2();
  const double h = std::cbrt(2.0 * kernel.psi_half() / (mu2 * mu2 * roughness * nd));
  return Bandwidth{h, Bandwidth::Method::PlugIn};
}

Bandwidth bandwidth_oracle(const TailClassParams& cls, const KernelSpec& kernel, double x, double n) {
  return Bandwidth{optimal_bandwidth(cls, kernel, x, n), Bandwidth::Method::TheoryOracle};
}

}  // namespace smd
