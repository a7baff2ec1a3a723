#include <cmath>
#include <numbers>
#include <random>


#include "doctest.h"
#include "smd/evt_theory.hpp"
#include "smd/gev.hpp"
#include "rate_table_golden.hpp"

using namespace smd;
using doctest::Approx;

namespace {

const HallParams kHall11{1.0, 1.0, 1.0, 0.0};
const WeibullTailParams kWeibull11{1.0, 1.0};
const BoundedParams kBounded3{-3.0, -1.0, 1.0, 1.0, 0.0};

std::string exponent_string(const std::optional<Rational>& r) { return r ? to_string(*r) : "-"; }

// Golden-section minimizer written independently of the library.
template <class F>
double golden_min(F f, double a, double b) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  while (std::abs(b - a) > 1e-12 * (std::abs(a) + std::abs(b))) {
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - r * (b - a);
    d = a + r * (b - a);
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("norming constants") {
  const auto h = norming_constants(kHall11, 64);
  CHECK(h.gamma == 1.0);
  CHECK(h.a == Approx(64.0));
  CHECK(h.b == Approx(64.0));
  CHECK_FALSE(h.theta.has_value());

  const auto w = norming_constants(kWeibull11, std::exp(1.0));
  CHECK(w.gamma == 0.0);
  CHECK(*w.theta == 0.0);
  CHECK(w.a == Approx(1.0));
  CHECK(w.b == Approx(1.0));

  const auto b = norming_constants(kBounded3, 8);
  CHECK(b.gamma == Approx(-1.0 / 3));
  CHECK(b.a == Approx(1.0 / 6));
  CHECK(b.b == Approx(-0.5));

  CHECK_THROWS_AS(norming_constants(kWeibull11, 1.0), std::domain_error);
  CHECK_THROWS_AS(norming_constants(kHall11, 0.5), std::domain_error);
}

TEST_CASE("exceedance counts M and K") {
  CHECK(big_m(kHall11, 10.0, 64.0) == Approx(6.4));
  CHECK(big_m(kWeibull11, 2.0, std::exp(2.0)) == Approx(1.0));
  CHECK(big_m(kBounded3, -0.5, 8.0) == Approx(1.0));
  CHECK(big_k(kHall11, 10.0, 64.0) == Approx(6.4));
  CHECK(big_k(kBounded3, -0.5, 8.0) == Approx(1.0));
  // Weibull kappa = 1: K = k exp(-x).
  CHECK(big_k(kWeibull11, 2.0, 20.0) == Approx(20.0 * std::exp(-2.0)));
  CHECK_THROWS_AS(big_m(kHall11, -1.0, 4.0), std::domain_error);
  CHECK_THROWS_AS(big_m(kBounded3, 0.5, 4.0), std::domain_error);
}

TEST_CASE("lambda") {
  CHECK(lambda_n(kHall11, 64, 64) == Approx(1.0 / 64));
  const double m = 1000.0;
  CHECK(lambda_n(kWeibull11, std::log(m) * std::log(m), m) == Approx(1.0));
  CHECK(lambda_n(BoundedParams{-6.0, -2.0, 1.0, 0.0, 0.0}, 16, 16) == Approx(std::pow(16.0, -3)));
}

TEST_CASE("tau vanishes for the Frechet family under its own norming") {
  for (long m : {8L, 64L, 512L}) {
    for (double x : {1.0, 10.0, 100.0}) {
      CHECK(std::abs(tau_n(SmdSpec(Frechet(1.0), m), static_cast<double>(m), x)) < 1e-12);
    }
  }
}

TEST_CASE("tau for Pareto with unit index") {
  const SmdSpec spec(Pareto(1.0), 64);
  const double x = smd_quantile(spec, 0.5);
  // Direct closed forms: F^64 = (1 - 1/x)^64, G = exp(-64 / x).
  const double oracle = std::pow(1.0 - 1.0 / x, 64) - std::exp(-64.0 / x);
  const double tau = tau_n(spec, 64, x);
  CHECK(tau == Approx(oracle).epsilon(1e-10));
  CHECK(tau != 0.0);
  CHECK(std::abs(tau) < 0.01);
  CHECK(tau_n(spec, 64, x) == tau);
}

TEST_CASE("xi and omega") {
  CHECK(xi_n(kHall11, 10.0) == Approx(0.02));
  CHECK(omega_n(kHall11, 10.0) == Approx(1.0));
  CHECK(xi_n(kWeibull11, 3.0) == Approx(1.0));
  CHECK(omega_n(kWeibull11, 3.0) == Approx(std::exp(3.0)));
  CHECK(xi_n(kBounded3, -0.5) == Approx(24.0));
  CHECK(omega_n(kBounded3, -0.5) == Approx(48.0));
}

TEST_CASE("eta vector") {
  for (double g : {-0.5, 0.0, 1.0, 2.0}) {
    const auto e = eta_vector(g, 1.0);
    CHECK(e.v[0] == 0.0);
    CHECK(e.v[1] == 0.0);
    CHECK(e.v[2] == Approx(-std::exp(-1.0)));
  }
  // High-precision recomputation at gamma = 1, K = 2.
  const long double K = 2.0L;
  const long double s = -std::exp(-K) * K;
  const long double expected[3] = {s * (1 - K + std::log(K)), s * K * (1 / K - 1), s * K};
  const auto e = eta_vector(1.0, 2.0);
  for (int i = 0; i < 3; ++i) CHECK(e.v[i] == Approx(static_cast<double>(expected[i])).epsilon(1e-14));
  CHECK(e.sum() == Approx(e.v[0] + e.v[1] + e.v[2]));

  for (double K2 : {0.3, 2.0, 7.0}) {
    const auto a = eta_vector(1e-8, K2);
    const auto b = eta_vector(0.0, K2);
    CHECK(std::abs(a.v[1] - b.v[1]) < 1e-6);
    // Limit branch against the exact expression just past the switch.
    const auto c = eta_vector(2e-7, K2);
    CHECK(std::abs(c.v[1] - b.v[1]) < 1e-5);
  }
  CHECK_THROWS(eta_vector(1.0, 0.0));
}

TEST_CASE("zeta and the composite PE rate") {
  CHECK(zeta_n(Regime::Delta, 100, 0.5, 3.0) == Approx(0.1));
  CHECK(zeta_n(Regime::Diverging, 1, 1.0, 10.0) == Approx(100.0 * std::exp(-10.0)));
  CHECK(std::abs(zeta_n(Regime::Vanishing, 100, 0.5, 1e-9)) < 1e-9);
  const auto eta = eta_vector(0.5, 2.0);
  CHECK(pe_rate(100, 0.5, eta, 0.01, 0.02) == Approx(0.05 * eta.sum() + 0.03));
}

TEST_CASE("optimal bandwidth") {
  const auto g = KernelSpec::gaussian();
  const double h = optimal_bandwidth(kHall11, g, 10.0, 4096);
  CHECK(h == Approx(std::cbrt(1e4 / (4 * std::sqrt(std::numbers::pi) * 4096))).epsilon(1e-12));
  CHECK(h == Approx(0.7008).epsilon(1e-4));
  CHECK(optimal_bandwidth(kHall11, g, 10.0, 8192) == Approx(h * std::pow(2.0, -1.0 / 3)).epsilon(1e-12));
}

TEST_CASE("property: optimal bandwidth minimizes the AMSE") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int draw = 0; draw < 20; ++draw) {
    TailClassParams cls;
    double x = 0.0;
    switch (draw % 3) {
      case 0:
        cls = HallParams{0.5 + 4 * u(gen), 1.0, 0.5 + u(gen), 0.0};
        x = 2 + 20 * u(gen);
        break;
      case 1:
        cls = WeibullTailParams{0.5 + 3 * u(gen), 0.5 + u(gen)};
        x = 0.5 + 2 * u(gen);
        break;
      default:
        cls = BoundedParams{-2.5 - 4 * u(gen), -1.0, 0.5 + u(gen), 0.0, 0.0};
        x = -(0.05 + 0.5 * u(gen));
    }
    const auto kernel = draw % 2 ? KernelSpec::gaussian() : KernelSpec::epanechnikov();
    const double n = std::pow(2.0, 8 + (draw % 9));
    const double xi = xi_n(cls, x);
    const double om = omega_n(cls, x);
    auto amse = [&](double h) {
      const double bias = 0.5 * h * h * xi * kernel.mu2();
      return bias * bias - 2.0 * kernel.psi_half() * h * om / n;
    };
    const double h = optimal_bandwidth(cls, kernel, x, n);
    const double numeric = golden_min(amse, h * 1e-3, h * 1e3);
    CAPTURE(draw);
    CHECK(numeric == Approx(h).epsilon(1e-6));
  }
}

TEST_CASE("bias constant and NE bias") {
  const auto g = KernelSpec::gaussian();
  CHECK(nu0(g) == Approx(std::pow(2.0, -1.0 / 3) * std::pow(0.5 / std::sqrt(std::numbers::pi), 2.0 / 3)));
  const double x = 10.0;
  const double b = ne_bias(kHall11, g, x, 64, 4096, 0.5);
  const double oracle = nu0(g) * 0.5 * 6.4 * std::pow(4096.0, -2.0 / 3) * std::pow(0.02, -1.0 / 3);
  CHECK(b == Approx(oracle).epsilon(1e-12));
  CHECK(b > 0.0);
}

TEST_CASE("delta regime bandwidth and bias agree with the pointwise formulas") {
  const auto kernels = {KernelSpec::gaussian(), KernelSpec::epanechnikov()};
  const std::vector<TailClassParams> classes = {HallParams{1.0, 1.0, 1.0, 0.0}, HallParams{3.0, 1.0, 2.0, 0.0},
                                                WeibullTailParams{1.0, 1.0}, WeibullTailParams{3.0, 2.0},
                                                BoundedParams{-3.0, -1.0, 1.0, 0.0, 0.0},
                                                BoundedParams{-6.0, -2.0, 2.0, 0.0, 1.0}};
  for (const auto& kernel : kernels) {
    for (const auto& cls : classes) {
      for (double delta : {0.5, 1.0, 3.0}) {
        const double m = 64, n = 4096;
        const double x = delta_level(cls, m, delta);
        CHECK(big_m(cls, x, m) == Approx(delta).epsilon(1e-12));
        CHECK(optimal_bandwidth_delta(cls, kernel, m, n, delta) ==
              Approx(optimal_bandwidth(cls, kernel, x, n)).epsilon(1e-6));
        CHECK(ne_bias_delta(cls, kernel, m, n, delta) ==
              Approx(ne_bias(cls, kernel, x, m, n, std::exp(-delta))).epsilon(1e-6));
      }
    }
  }
  const auto g = KernelSpec::gaussian();
  const double base = nu0(g) * std::exp(-1.0) * std::cbrt(64.0 * 64.0 / (4096.0 * 4096.0));
  CHECK(ne_bias_delta(kWeibull11, g, 64, 4096, 1.0) == Approx(base));
  CHECK(ne_bias_delta(kHall11, g, 64, 4096, 1.0) == Approx(base * std::cbrt(0.5)));
  CHECK_THROWS(optimal_bandwidth_delta(kWeibull11, g, 2.0, 100, 3.0));
  CHECK_THROWS(ne_bias_delta(kHall11, g, 64, 100, 0.0));
}

TEST_CASE("rate exponents") {
  const auto pareto3 = rate_exponents(class_params(Pareto(3.0)), Rational(1, 4));
  CHECK(to_string(*pareto3.pe) == "-1/6");
  CHECK(to_string(*pareto3.ne) == "-3/4");

  const auto frechet5 = rate_exponents(class_params(Frechet(5.0)), Rational(1, 4));
  CHECK_FALSE(frechet5.pe.has_value());
  CHECK(to_string(*frechet5.ne) == "-3/4");

  const auto rb = rate_exponents(class_params(ReversedBurr(-6.0, -2.0)), Rational(1, 2));
  CHECK(to_string(*rb.pe) == "-1/3");
  CHECK(to_string(*rb.ne) == "-1/2");

  const auto weibull = rate_exponents(WeibullTailParams{1.0, 1.0}, Rational(3, 4));
  CHECK_FALSE(weibull.pe.has_value());
  CHECK(to_string(*weibull.ne) == "-1/4");

  CHECK_THROWS_AS(rate_exponents(kHall11, Rational(1, 3)), std::invalid_argument);
}

TEST_CASE("property: exponents lie in [-2, 0) and the variance branch follows p") {
  for (const auto& family : rate_table_families()) {
    Rational previous(-10);
    for (const Rational p : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
      const auto r = rate_exponents(class_params(family), p);
      for (const auto& e : {r.pe, r.ne}) {
        if (!e) continue;
        CHECK(*e >= Rational(-2));
        CHECK(*e < Rational(0));
        CHECK(*e >= p - Rational(1));
      }
      CHECK(p - Rational(1) > previous);
      previous = p - Rational(1);
    }
  }
}

TEST_CASE("rate table reproduces the reference exponents and lengths") {
  const auto rows = rate_table(4096);
  const auto& gold = golden::rate_table();
  REQUIRE(rows.size() == gold.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CAPTURE(gold[i].family);
    CAPTURE(gold[i].params);
    CHECK(family_name(rows[i].family) == gold[i].family);
    CHECK(family_label(rows[i].family) == gold[i].params);
    for (int j = 0; j < 3; ++j) {
      CHECK(exponent_string(rows[i].cells[j].pe) == gold[i].pe[j]);
      CHECK(exponent_string(rows[i].cells[j].ne) == gold[i].ne[j]);
      CHECK(round_1sf(rows[i].cells[j].length_L) == Approx(gold[i].L[j]).epsilon(1e-9));
    }
  }
  CHECK_THROWS(rate_table(1000));
}

TEST_CASE("one significant figure rounding") {
  CHECK(round_1sf(579.64) == 600.0);
  CHECK(round_1sf(0.0745878) == Approx(0.07));
  CHECK(round_1sf(1476.05) == 1000.0);
  CHECK(round_1sf(9.6) == 10.0);
  CHECK(round_1sf(-0.36) == Approx(-0.4));
  CHECK(round_1sf(0.0) == 0.0);
}
