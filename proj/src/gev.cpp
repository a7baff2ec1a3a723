#include "smd/gev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "smd/nelder_mead.hpp"

namespace smd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEulerGamma = 0.57721566490153286;
constexpr double kGammaMin = -1.0;
constexpr double kGammaMax = 5.0;

// s = ln(1 + gamma z) / gamma, with the Gumbel limit s -> z. NaN off support.
double reduced(double gamma, double z) {
  if (std::abs(gamma) < kGumbelSwitch) {
    return z * (1.0 - gamma * z * (0.5 - gamma * z / 3.0));
  }
  const double t = gamma * z;
  if (!(t > -1.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log1p(t) / gamma;
}

struct Moments {
  double mean;
  double sd;
};

Moments moments(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

GevParams::GevParams(double g, double a, double b) : gamma(g), scale(a), loc(b) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("GEV scale must be positive");
  if (!std::isfinite(g) || !std::isfinite(b)) throw std::invalid_argument("GEV parameters must be finite");
}

double gev_cdf(const GevParams& p, double x) {
  const double z = (x - p.loc) / p.scale;
  const double s = reduced(p.gamma, z);
  if (std::isnan(s)) return p.gamma > 0.0 ? 0.0 : 1.0;
  return std::exp(-std::exp(-s));
}

double gev_logpdf(const GevParams& p, double x) {
  const double z = (x - p.loc) / p.scale;
  const double s = reduced(p.gamma, z);
  if (std::isnan(s)) return -kInf;
  return -std::log(p.scale) - (1.0 + p.gamma) * s - std::exp(-s);
}

double gev_quantile(const GevParams& p, double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("probability must lie in (0, 1)");
  const double y = -std::log(-std::log(q));  // Gumbel quantile
  if (std::abs(p.gamma) < kGumbelSwitch) return p.loc + p.scale * y;
  return p.loc + p.scale * std::expm1(p.gamma * y) / p.gamma;
}

std::vector<double> block_maxima(std::span<const double> data, std::size_t k) {
  if (k < 2) throw std::invalid_argument("block size must be at least 2");
  if (k > data.size()) throw std::invalid_argument("block size exceeds the sample size");
  const std::size_t n_blocks = data.size() / k;
  std::vector<double> out;
  out.reserve(n_blocks);
  for (std::size_t j = 0; j < n_blocks; ++j) {
    const auto block = data.subspan(j * k, k);
    out.push_back(*std::max_element(block.begin(), block.end()));
  }
  return out;
}

double gev_sum_loglik(const GevParams& p, std::span<const double> blocks) {
  double total = 0.0;
  for (double y : blocks) {
    const double l = gev_logpdf(p, y);
    if (l == -kInf) return -kInf;
    total += l;
  }
  return total;
}

GevParams init_params(std::span<const double> blocks) {
  if (blocks.size() < 2) throw FitError("need at least two block maxima");
  const auto [mean, sd] = moments(blocks);
  if (!(sd > 0.0)) throw FitError("degenerate block maxima (zero variance)");

  const double a_gumbel = sd * std::sqrt(6.0) / std::numbers::pi;
  const GevParams fallback(0.1, a_gumbel, mean - kEulerGamma * a_gumbel);
  if (blocks.size() < 3) return fallback;

  // Hosking, Wallis & Wood PWM estimator (their k = -gamma).
  std::vector<double> y(blocks.begin(), blocks.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(y.size());
  double b0 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = static_cast<double>(i);
    b0 += y[i];
    b1 += r / (n - 1.0) * y[i];
    b2 += r * (r - 1.0) / ((n - 1.0) * (n - 2.0)) * y[i];
  }
  b0 /= n;
  b1 /= n;
  b2 /= n;
  const double c = (2.0 * b1 - b0) / (3.0 * b2 - b0) - std::log(2.0) / std::log(3.0);
  const double k = 7.8590 * c + 2.9554 * c * c;
  if (!std::isfinite(k) || k <= -0.99 || -k <= kGammaMin || -k >= kGammaMax) return fallback;
  double a = 0.0;
  double b = 0.0;
  if (std::abs(k) < 1e-6) {
    a = (2.0 * b1 - b0) / std::log(2.0);
    b = b0 - kEulerGamma * a;
  } else {
    const double g1k = std::tgamma(1.0 + k);
    a = (2.0 * b1 - b0) * k / (g1k * (1.0 - std::pow(2.0, -k)));
    b = b0 + a * (g1k - 1.0) / k;
  }
  if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(b)) return fallback;
  return GevParams(-k, a, b);
}

FitResult fit_mle(std::span<const double> blocks, const FitOptions& options) {
  const std::size_t n_blocks = blocks.size();
  if (n_blocks < std::max<std::size_t>(options.min_blocks, 3)) {
    throw FitError("too few block maxima: " + std::to_string(n_blocks) + " < " +
                   std::to_string(std::max<std::size_t>(options.min_blocks, 3)));
  }
  // Sorting makes the fit independent of block order; standardizing makes it
  // affine equivariant.
  std::vector<double> z(blocks.begin(), blocks.end());
  std::sort(z.begin(), z.end());
  const auto [mean, sd] = moments(z);
  if (!(sd > 0.0) || !std::isfinite(sd)) throw FitError("degenerate block maxima (zero variance)");
  for (double& v : z) v = (v - mean) / sd;

  auto objective = [&z](std::span<const double> th) {
    const double g = th[0];
    if (!(g > kGammaMin && g < kGammaMax)) return kInf;
    const double a = std::exp(th[1]);
    if (!(a > 0.0) || !std::isfinite(a)) return kInf;
    const double b = th[2];
    double nll = static_cast<double>(z.size()) * th[1];
    for (double y : z) {
      const double s = reduced(g, (y - b) / a);
      if (std::isnan(s)) return kInf;
      nll += (1.0 + g) * s + std::exp(-s);
    }
    return std::isfinite(nll) ? nll : kInf;
  };

  std::vector<std::vector<double>> starts;
  const GevParams init = init_params(z);
  starts.push_back({init.gamma, std::log(init.scale), init.loc});
  const double a0 = std::sqrt(6.0) / std::numbers::pi;
  starts.push_back({0.1, std::log(a0), -kEulerGamma * a0});
  starts.push_back({-0.2, std::log(a0), -kEulerGamma * a0});

  SimplexResult best{{}, kInf, 0, false};
  int iterations = 0;
  for (auto& start : starts) {
    if (!std::isfinite(objective(start))) {
      // Move to the Gumbel submodel, which has no support constraint.
      start[0] = 0.0;
      if (!std::isfinite(objective(start))) continue;
    }
    auto r = nelder_mead(objective, start, {0.1, 0.1, 0.1}, options.tolerance,
                         options.max_iterations);
    iterations += r.iterations;
    if (r.value < best.value) best = std::move(r);
  }
  if (!std::isfinite(best.value)) throw FitError("no feasible starting point for the GEV likelihood");

  const double a = std::exp(best.x[1]) * sd;
  const double b = mean + sd * best.x[2];
  GevParams params(best.x[0], a, b);
  const double loglik = -best.value - static_cast<double>(n_blocks) * std::log(sd);
  return FitResult{params, loglik, n_blocks, 0, best.converged, iterations};
}

FitResult fit_block_maxima(std::span<const double> data, std::size_t k, const FitOptions& options) {
  const auto maxima = block_maxima(data, k);
  auto fit = fit_mle(maxima, options);
  fit.block_size = k;
  return fit;
}

double pe_evaluate(const FitResult& fit, double x, const PeOptions& options) {
  const double g = gev_cdf(fit.params, x);
  if (!options.rescale_to_horizon) return g;
  if (!(options.horizon > 0.0) || fit.block_size == 0) {
    throw std::invalid_argument("horizon rescaling needs a horizon and a block size");
  }
  if (g <= 0.0) return 0.0;
  return std::exp(options.horizon / static_cast<double>(fit.block_size) * std::log(g));
}

double pe_estimate(std::span<const double> data, std::size_t k, double x, const PeOptions& options) {
  return pe_evaluate(fit_block_maxima(data, k, options.fit), x, options);
}

}  // namespace smd
