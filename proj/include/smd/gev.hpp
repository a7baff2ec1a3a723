#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace smd {

/// Generalized extreme value law G_gamma((x - loc) / scale).
struct GevParams {
  GevParams(double gamma, double scale, double loc);
  double gamma;
  double scale;
  double loc;
};

/// |gamma| below this switches to the series-corrected Gumbel branch.
inline constexpr double kGumbelSwitch = 1e-7;

/// 0 below the lower endpoint (gamma > 0), 1 above the upper one (gamma < 0).
double gev_cdf(const GevParams& p, double x);

/// -inf outside the support.
double gev_logpdf(const GevParams& p, double x);

double gev_quantile(const GevParams& p, double q);

/// Maxima of consecutive non-overlapping blocks of size k; a trailing
/// partial block is discarded. Throws std::invalid_argument if k < 2 or
/// k > data.size().
std::vector<double> block_maxima(std::span<const double> data, std::size_t k);

class FitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct FitOptions {
  /// Blocks required before fitting. The simulation harness lowers this to
  /// reach the small-N cells of the study.
  std::size_t min_blocks = 25;
  double tolerance = 1e-8;
  int max_iterations = 20000;
};

struct FitResult {
  GevParams params;
  double loglik;
  std::size_t n_blocks;
  std::size_t block_size;
  bool converged;
  int iterations;
};

/// Probability-weighted-moment starting values, falling back to Gumbel
/// moments (gamma = 0.1) when the PWM solution is unusable.
/// Throws FitError on degenerate (zero variance) blocks.
GevParams init_params(std::span<const double> blocks);

/// Block-maxima maximum likelihood over (gamma, ln a, b), gamma restricted
/// to (-1, 5). Throws FitError for too few or degenerate blocks; a fit that
/// runs out of iterations is returned with converged == false.
FitResult fit_mle(std::span<const double> blocks, const FitOptions& options = {});

/// block_maxima + fit_mle, recording the block size.
FitResult fit_block_maxima(std::span<const double> data, std::size_t k,
                           const FitOptions& options = {});

double gev_sum_loglik(const GevParams& p, std::span<const double> blocks);

/// Parametric SMD estimate at x. By default the block-k fit is evaluated
/// directly; with rescale_to_horizon it is raised to the power m / k.
struct PeOptions {
  bool rescale_to_horizon = false;
  double horizon = 0.0;
  FitOptions fit;
};

double pe_estimate(std::span<const double> data, std::size_t k, double x,
                   const PeOptions& options = {});

/// G_fit(x) or G_fit(x)^{m/k}, for a fit already in hand.
double pe_evaluate(const FitResult& fit, double x, const PeOptions& options = {});

}  // namespace smd
