#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "smd/distributions.hpp"
#include "smd/evt_theory.hpp"
#include "smd/gev.hpp"

using namespace smd;
using doctest::Approx;

namespace {

// Inverse-transform GEV draws written from the textbook quantile, not the library.
std::vector<double> gev_draws(double gamma, double a, double b, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& y : out) {
    double p = u(gen);
    while (p <= 0.0) p = u(gen);
    const double g = -std::log(-std::log(p));
    y = gamma == 0.0 ? b + a * g : b + a * (std::exp(gamma * g) - 1.0) / gamma;
  }
  return out;
}

}  // namespace

TEST_CASE("GevParams validates the scale") {
  CHECK_THROWS_AS(GevParams(0.1, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(GevParams(0.1, -1.0, 0.0), std::invalid_argument);
  CHECK_NOTHROW(GevParams(0.1, 1.0, 0.0));
}

TEST_CASE("gev cdf values and support") {
  CHECK(gev_cdf(GevParams(0.0, 1.0, 0.0), 0.0) == Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(gev_cdf(GevParams(1.0, 1.0, 0.0), -1.0) == 0.0);
  CHECK(gev_cdf(GevParams(1.0, 1.0, 0.0), -2.0) == 0.0);
  CHECK(gev_cdf(GevParams(-0.5, 1.0, 0.0), 2.0) == 1.0);
  CHECK(gev_cdf(GevParams(-0.5, 1.0, 0.0), 3.0) == 1.0);
  CHECK(gev_logpdf(GevParams(1.0, 1.0, 0.0), -2.0) == -std::numeric_limits<double>::infinity());
  for (double x : {-2.0, 0.0, 2.0}) {
    CHECK(std::abs(gev_cdf(GevParams(1e-9, 1.0, 0.0), x) - gev_cdf(GevParams(0.0, 1.0, 0.0), x)) < 1e-8);
    // Either side of the switch from the series branch to the exact branch.
    for (double g : {0.99e-7, 1.01e-7, -0.99e-7, -1.01e-7}) {
      const long double gl = g;
      const long double ref = std::exp(-std::exp(-std::log1p(gl * x) / gl));
      CHECK(std::abs(gev_cdf(GevParams(g, 1.0, 0.0), x) - static_cast<double>(ref)) < 1e-13);
    }
  }
}

TEST_CASE("gev quantile inverts the cdf") {
  for (double g : {-0.4, 0.0, 0.3, 2.0}) {
    const GevParams p(g, 2.0, -1.0);
    for (double q : {0.001, 0.3, 0.5, 0.999}) CHECK(gev_cdf(p, gev_quantile(p, q)) == Approx(q).epsilon(1e-12));
  }
  CHECK_THROWS(gev_quantile(GevParams(0.0, 1.0, 0.0), 1.0));
}

TEST_CASE("property: gev cdf is monotone onto [0,1] and the density integrates to one") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int draw = 0; draw < 10; ++draw) {
    const GevParams p(-0.8 + 2.0 * u(gen), 0.2 + 3.0 * u(gen), -2.0 + 4.0 * u(gen));
    double previous = 0.0;
    for (double x = p.loc - 30; x <= p.loc + 30; x += 0.25) {
      const double f = gev_cdf(p, x);
      CHECK(f >= previous);
      CHECK(f <= 1.0);
      previous = f;
    }
    // Piecewise quadrature between quantile breakpoints; the target mass is
    // the probability between the outermost breakpoints.
    const std::vector<double> qs{1e-15, 1e-6, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999, 1 - 1e-4, 1 - 1e-5, 1 - 1e-6};
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < qs.size(); ++i) {
      mass += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          [&](double x) { return std::exp(gev_logpdf(p, x)); }, gev_quantile(p, qs[i]), gev_quantile(p, qs[i + 1]), 15,
          1e-13);
    }
    CAPTURE(p.gamma);
    CHECK(mass == Approx(1.0 - 1e-6 - 1e-15).epsilon(1e-8));
  }
}

TEST_CASE("block maxima") {
  const std::vector<double> a{1, 5, 2, 4};
  CHECK(block_maxima(a, 2) == std::vector<double>{5, 4});
  const std::vector<double> b{1, 2, 3, 4, 5};
  CHECK(block_maxima(b, 2) == std::vector<double>{2, 4});
  const std::vector<double> c(9, 3.0);
  CHECK(block_maxima(c, 3) == std::vector<double>{3, 3, 3});
  CHECK_THROWS_AS(block_maxima(a, 1), std::invalid_argument);
  CHECK_THROWS_AS(block_maxima(a, 5), std::invalid_argument);
}

TEST_CASE("initial values from Gumbel moments") {
  const auto y = gev_draws(0.0, 1.0, 0.0, 10000, 3);
  const auto p = init_params(y);
  CHECK(p.scale > 0.9);
  CHECK(p.scale < 1.1);
  CHECK(std::abs(p.loc) < 0.1);
  CHECK_THROWS_AS(init_params(std::vector<double>(30, 1.0)), FitError);
  CHECK(init_params(std::vector<double>{1.0, 2.0}).scale > 0.0);
}

TEST_CASE("fit rejects degenerate or short input") {
  CHECK_THROWS_AS(fit_mle(std::vector<double>(40, 2.0)), FitError);
  CHECK_THROWS_AS(fit_mle(gev_draws(0.1, 1, 0, 10, 1)), FitError);
  FitOptions relaxed;
  relaxed.min_blocks = 3;
  CHECK_NOTHROW(fit_mle(gev_draws(0.1, 1, 0, 10, 1), relaxed));
}

TEST_CASE("maximum likelihood recovers the parameters") {
  for (double g : {-0.2, 0.0, 0.5}) {
    const auto y = gev_draws(g, 2.0, 1.0, 5000, 17);
    const auto fit = fit_mle(y);
    CAPTURE(g);
    CHECK(fit.converged);
    CHECK(std::abs(fit.params.gamma - g) < 0.05);
    CHECK(std::abs(fit.params.scale / 2.0 - 1.0) < 0.05);
    CHECK(std::abs(fit.params.loc - 1.0) / 2.0 < 0.05);
    CHECK(fit.loglik == Approx(gev_sum_loglik(fit.params, y)).epsilon(1e-9));
    // No nearby parameter does better.
    for (double d : {-1e-3, 1e-3}) {
      CHECK(gev_sum_loglik(GevParams(fit.params.gamma + d, fit.params.scale, fit.params.loc), y) <= fit.loglik);
      CHECK(gev_sum_loglik(GevParams(fit.params.gamma, fit.params.scale * (1 + d), fit.params.loc), y) <= fit.loglik);
      CHECK(gev_sum_loglik(GevParams(fit.params.gamma, fit.params.scale, fit.params.loc + d), y) <= fit.loglik);
    }
  }
}

TEST_CASE("property: fit is affine equivariant and order independent") {
  std::mt19937_64 gen(5);
  for (double g : {-0.2, 0.0, 0.5}) {
    auto y = gev_draws(g, 1.0, 0.0, 400, 23);
    const auto base = fit_mle(y);
    for (auto [c, d] : {std::pair{3.0, -2.0}, std::pair{0.01, 100.0}}) {
      std::vector<double> z(y.size());
      std::transform(y.begin(), y.end(), z.begin(), [&](double v) { return c * v + d; });
      const auto moved = fit_mle(z);
      CHECK(moved.params.gamma == Approx(base.params.gamma).epsilon(1e-6));
      CHECK(moved.params.scale == Approx(c * base.params.scale).epsilon(1e-6));
      CHECK(std::abs(moved.params.loc - (c * base.params.loc + d)) < 1e-6 * c * base.params.scale);
    }
    std::shuffle(y.begin(), y.end(), gen);
    const auto shuffled = fit_mle(y);
    CHECK(shuffled.params.gamma == base.params.gamma);
    CHECK(shuffled.params.scale == base.params.scale);
    CHECK(shuffled.params.loc == base.params.loc);
  }
}

TEST_CASE("initialisation then fit converges on simulated GEV data") {
  int converged = 0;
  int total = 0;
  for (double g : {-0.2, 0.0, 0.5}) {
    for (std::uint64_t s = 0; s < 67; ++s) {
      const auto fit = fit_mle(gev_draws(g, 1.0, 0.0, 100, 1000 + s));
      converged += fit.converged;
      ++total;
    }
  }
  CHECK(converged >= 0.99 * total);
}

TEST_CASE("PE evaluation") {
  RngStream rng(8);
  const auto data = sample(Frechet(1.0), 4096, rng);
  const auto fit = fit_block_maxima(data, 64);
  CHECK(fit.block_size == 64);
  CHECK(fit.n_blocks == 64);
  CHECK(fit.params.gamma > 0.0);
  const double lower = fit.params.loc - fit.params.scale / fit.params.gamma;
  CHECK(pe_evaluate(fit, lower - 1.0) == 0.0);
  double previous = 0.0;
  for (double x = lower; x < 2000; x += 7.0) {
    const double v = pe_evaluate(fit, x);
    CHECK(v >= previous);
    previous = v;
  }
  CHECK(pe_estimate(data, 64, 100.0) == pe_evaluate(fit, 100.0));

  PeOptions rescaled;
  rescaled.rescale_to_horizon = true;
  rescaled.horizon = 128;
  CHECK(pe_evaluate(fit, 100.0, rescaled) == Approx(std::pow(pe_evaluate(fit, 100.0), 2.0)).epsilon(1e-12));
  PeOptions broken;
  broken.rescale_to_horizon = true;
  CHECK_THROWS(pe_evaluate(fit, 100.0, broken));
}

TEST_CASE("GEV with the norming constants approaches the sample maximum law") {
  // Pareto with unit index: sup-norm gap over the central quantile grid shrinks in m.
  double previous = 1.0;
  for (long m : {4L, 16L, 64L, 256L}) {
    const SmdSpec spec(Pareto(1.0), m);
    const auto nc = norming_constants(class_params(spec.family), static_cast<double>(m));
    const GevParams g(nc.gamma, nc.a, nc.b);
    double sup = 0.0;
    const double lo = smd_quantile(spec, 0.1), hi = smd_quantile(spec, 0.9);
    for (int j = 0; j <= 200; ++j) {
      const double x = lo + (hi - lo) * j / 200.0;
      sup = std::max(sup, std::abs(gev_cdf(g, x) - smd_cdf(spec, x)));
    }
    CHECK(sup < previous);
    previous = sup;
  }
}
