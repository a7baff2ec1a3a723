#include "smd/evt_theory.hpp"

#include <cmath>
#include <stdexcept>

#include "smd/gev.hpp"

namespace smd {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_tail_region(const TailClassParams& cls, double x) {
  std::visit(overloaded{
                 [x](const HallParams&) {
                   if (!(x > 0.0)) throw std::domain_error("x must be positive in the Hall class");
                 },
                 [x](const WeibullTailParams&) {
                   if (!(x > 0.0)) throw std::domain_error("x must be positive in the Weibull class");
                 },
                 [x](const BoundedParams& b) {
                   if (!(x < b.x_star)) throw std::domain_error("x must lie below the upper endpoint");
                 },
             },
             cls);
}

double gamma_of(const TailClassParams& cls) {
  return std::visit(overloaded{
                        [](const HallParams& h) { return 1.0 / h.alpha; },
                        [](const WeibullTailParams&) { return 0.0; },
                        [](const BoundedParams& b) { return 1.0 / b.mu; },
                    },
                    cls);
}

Rational exact(double v, const char* what) {
  auto r = as_rational(v);
  if (!r) throw std::invalid_argument(std::string(what) + " is not a simple rational");
  return *r;
}

bool is_integer(const Rational& r) { return r.denominator() == 1; }

}  // namespace

NormingConstants norming_constants(const TailClassParams& cls, double horizon) {
  if (!(horizon >= 1.0)) throw std::domain_error("horizon must be at least 1");
  return std::visit(
      overloaded{
          [horizon](const HallParams& h) {
            const double g = 1.0 / h.alpha;
            const double s = std::pow(h.A * horizon, g);
            return NormingConstants{g, g * s, s, std::nullopt};
          },
          [horizon](const WeibullTailParams& w) {
            if (!(horizon > 1.0)) throw std::domain_error("Weibull norming needs horizon > 1");
            const double lh = std::log(horizon);
            const double theta = 1.0 - 1.0 / w.kappa;
            const double a = std::pow(w.C, -1.0 / w.kappa) * std::pow(lh, -theta) / w.kappa;
            const double b = std::pow(lh / w.C, 1.0 / w.kappa);
            return NormingConstants{0.0, a, b, theta};
          },
          [horizon](const BoundedParams& b) {
            const double g = 1.0 / b.mu;
            const double s = std::pow(b.D * horizon, g);
            return NormingConstants{g, -g * s, b.x_star - s, std::nullopt};
          },
      },
      cls);
}

double big_m(const TailClassParams& cls, double x, double m) {
  require_tail_region(cls, x);
  return std::visit(overloaded{
                        [&](const HallParams& h) { return h.A * m * std::pow(x, -h.alpha); },
                        [&](const WeibullTailParams& w) { return m * std::exp(-w.C * std::pow(x, w.kappa)); },
                        [&](const BoundedParams& b) { return b.D * m * std::pow(b.x_star - x, -b.mu); },
                    },
                    cls);
}

double big_k(const TailClassParams& cls, double x, double k) {
  require_tail_region(cls, x);
  return std::visit(
      overloaded{
          [&](const HallParams& h) { return h.A * k * std::pow(x, -h.alpha); },
          [&](const WeibullTailParams& w) {
            const double theta = 1.0 - 1.0 / w.kappa;
            return std::pow(k, w.kappa) *
                   std::exp(-w.kappa * std::pow(w.C, 1.0 / w.kappa) * std::pow(std::log(k), theta) * x);
          },
          [&](const BoundedParams& b) { return b.D * k * std::pow(b.x_star - x, -b.mu); },
      },
      cls);
}

double lambda_n(const TailClassParams& cls, double k, double m) {
  return std::visit(overloaded{
                        [&](const HallParams& h) { return k * std::pow(m, -2.0 * h.beta); },
                        [&](const WeibullTailParams&) {
                          const double lm = std::log(m);
                          return k / (lm * lm);
                        },
                        [&](const BoundedParams& b) { return k * std::pow(m, 2.0 * b.sigma); },
                    },
                    cls);
}

double tau_n(const SmdSpec& spec, double k, double x) {
  const auto nc = norming_constants(tail_expansion(spec.family), k);
  return smd_cdf(spec, x) - gev_cdf(GevParams(nc.gamma, nc.a, nc.b), x);
}

double xi_n(const TailClassParams& cls, double x) {
  require_tail_region(cls, x);
  return std::visit(overloaded{
                        [&](const HallParams& h) { return h.alpha * (h.alpha + 1.0) / (x * x); },
                        [&](const WeibullTailParams& w) {
                          return w.kappa * w.kappa * w.C * w.C * std::pow(x, 2.0 * w.kappa - 2.0);
                        },
                        [&](const BoundedParams& b) {
                          const double u = b.x_star - x;
                          return b.mu * (b.mu + 1.0) / (u * u);
                        },
                    },
                    cls);
}

double omega_n(const TailClassParams& cls, double x) {
  require_tail_region(cls, x);
  return std::visit(overloaded{
                        [&](const HallParams& h) { return h.alpha * std::pow(x, h.alpha - 1.0) / h.A; },
                        [&](const WeibullTailParams& w) {
                          return w.kappa * w.C * std::pow(x, w.kappa - 1.0) *
                                 std::exp(w.C * std::pow(x, w.kappa));
                        },
                        [&](const BoundedParams& b) {
                          return -b.mu * std::pow(b.x_star - x, b.mu - 1.0) / b.D;
                        },
                    },
                    cls);
}

EtaVector eta_vector(double gamma, double big_k_value) {
  if (!(big_k_value > 0.0)) throw std::domain_error("K must be positive");
  const double lk = std::log(big_k_value);
  const double kg = std::exp(gamma * lk);
  double second = 0.0;
  if (std::abs(gamma) < kGumbelSwitch) {
    second = -lk * (1.0 - 0.5 * gamma * lk);
  } else {
    second = std::expm1(-gamma * lk) / gamma;
  }
  const double scale = -std::exp(-big_k_value) * big_k_value;
  return EtaVector{{scale * (gamma * lk - std::expm1(gamma * lk)), scale * kg * second, scale * kg}};
}

double zeta_n(Regime regime, double n_blocks, double gamma, double big_k_value) {
  const double root = std::sqrt(n_blocks);
  switch (regime) {
    case Regime::Vanishing:
      return big_k_value * (gamma * std::log(big_k_value) + 1.0) / root;
    case Regime::Delta:
      return 1.0 / root;
    case Regime::Diverging:
      return std::pow(big_k_value, 1.0 + gamma) * std::exp(-big_k_value) / root;
  }
  throw std::invalid_argument("unknown regime");
}

double pe_rate(double n_blocks, double lambda, const EtaVector& eta, double tau, double zeta) {
  return lambda * eta.sum() / std::sqrt(n_blocks) + tau + zeta;
}

double nu0(const KernelSpec& kernel) {
  return std::cbrt(1.0 / (2.0 * kernel.mu2())) * std::cbrt(kernel.psi_half() * kernel.psi_half());
}

double optimal_bandwidth(const TailClassParams& cls, const KernelSpec& kernel, double x, double n) {
  const double xi = xi_n(cls, x);
  const double omega = omega_n(cls, x);
  if (!(omega > 0.0) || xi == 0.0) throw std::domain_error("bandwidth undefined where xi = 0");
  const double mu2 = kernel.mu2();
  return std::cbrt(2.0 * omega * kernel.psi_half() / (xi * xi * n * mu2 * mu2));
}

double ne_bias(const TailClassParams& cls, const KernelSpec& kernel, double x, double m, double n,
               double smd_value) {
  const double omega = omega_n(cls, x);
  return nu0(kernel) * smd_value * big_m(cls, x, m) * std::pow(n, -2.0 / 3.0) /
         std::cbrt(xi_n(cls, x)) * std::cbrt(omega * omega);
}

double optimal_bandwidth_delta(const TailClassParams& cls, const KernelSpec& kernel, double m,
                               double n, double delta) {
  if (!(delta > 0.0)) throw std::domain_error("delta must be positive");
  const double g = gamma_of(cls);
  const double mu2 = kernel.mu2();
  const double base = std::cbrt(2.0 * std::pow(m / delta, 1.0 + 3.0 * g) * kernel.psi_half() /
                                (n * mu2 * mu2));
  const double factor = std::visit(
      overloaded{
          [g](const HallParams& h) {
            return std::pow(h.A, g) * std::pow(std::sqrt(h.alpha) * (h.alpha + 1.0), -2.0 / 3.0);
          },
          [&](const WeibullTailParams& w) {
            if (!(m > delta)) throw std::domain_error("Weibull delta regime needs m > delta");
            const double theta = 1.0 - 1.0 / w.kappa;
            return std::pow(std::log(m / delta) / w.C, -theta) / (w.kappa * w.C);
          },
          [g](const BoundedParams& b) {
            return std::pow(b.D, g) *
                   std::pow(std::sqrt(-b.mu) * std::abs(b.mu + 1.0), -2.0 / 3.0);
          },
      },
      cls);
  return base * factor;
}

double ne_bias_delta(const TailClassParams& cls, const KernelSpec& kernel, double m, double n,
                     double delta) {
  if (!(delta > 0.0)) throw std::domain_error("delta must be positive");
  const double factor = std::visit(overloaded{
                                       [](const HallParams& h) { return std::cbrt(h.alpha / (h.alpha + 1.0)); },
                                       [](const WeibullTailParams&) { return 1.0; },
                                       [](const BoundedParams& b) { return std::cbrt(b.mu / (b.mu + 1.0)); },
                                   },
                                   cls);
  return nu0(kernel) * std::exp(-delta) * std::cbrt(delta) * std::cbrt(m * m / (n * n)) * factor;
}

double delta_level(const TailClassParams& cls, double m, double delta) {
  if (!(delta > 0.0)) throw std::domain_error("delta must be positive");
  return std::visit(overloaded{
                        [&](const HallParams& h) { return std::pow(h.A * m / delta, 1.0 / h.alpha); },
                        [&](const WeibullTailParams& w) {
                          if (!(m > delta)) throw std::domain_error("Weibull delta level needs m > delta");
                          return std::pow(std::log(m / delta) / w.C, 1.0 / w.kappa);
                        },
                        [&](const BoundedParams& b) { return b.x_star - std::pow(b.D * m / delta, 1.0 / b.mu); },
                    },
                    cls);
}

RateExponents rate_exponents(const TailClassParams& cls, const Rational& p) {
  if (p != Rational(1, 4) && p != Rational(1, 2) && p != Rational(3, 4)) {
    throw std::invalid_argument("p must be 1/4, 1/2 or 3/4");
  }
  const Rational one(1);
  const Rational variance = p - one;
  auto pe_with = [&](const Rational& second_order) {
    return std::max(variance, p * std::max(second_order, Rational(-2)));
  };

  RateExponents out;
  out.p = p;
  std::visit(overloaded{
                 [&](const HallParams& h) {
                   const Rational gamma = one / exact(h.alpha, "alpha");
                   const Rational beta = exact(h.beta, "beta");
                   if (beta >= Rational(1, 2)) out.pe = pe_with(Rational(-2) * beta * gamma);
                   out.ne = variance;
                 },
                 [&](const WeibullTailParams&) { out.ne = variance; },
                 [&](const BoundedParams& b) {
                   const Rational mu = exact(b.mu, "mu");
                   const Rational sigma = exact(b.sigma, "sigma");
                   const Rational gamma = one / mu;
                   if (sigma <= Rational(-1, 2) && mu < Rational(-2)) {
                     out.pe = pe_with(Rational(-2) * sigma * gamma);
                   }
                   const bool smooth_enough = is_integer(mu) || mu < Rational(-2);
                   const bool bandwidth_ok = p < Rational(2) / (Rational(2) - Rational(3) * gamma);
                   // Tail bias h^2 xi must not dominate the variance unless xi vanishes.
                   const bool bias_ok = mu * (mu + one) == Rational(0) ||
                                        Rational(-4, 3) - Rational(4) * gamma * p <= variance;
                   if (smooth_enough && bandwidth_ok && bias_ok) out.ne = variance;
                 },
             },
             cls);
  return out;
}

std::vector<TailFamily> rate_table_families() {
  std::vector<TailFamily> rows;
  for (double l : {0.5, 1.0, 3.0, 10.0}) rows.emplace_back(Pareto(l));
  for (double l : {0.5, 1.0, 3.0, 10.0}) rows.emplace_back(StudentT(l));
  for (double l : {0.5, 1.0, 3.0}) {
    for (double c : {0.5, 1.0, 3.0}) rows.emplace_back(Burr(c, l));
  }
  for (double g : {5.0, 2.0, 1.0, 0.5, 0.25}) rows.emplace_back(Frechet(g));
  for (double k : {0.5, 1.0, 3.0, 10.0}) rows.emplace_back(WeibullClass(k));
  const double rb[][2] = {{-6, -2}, {-3, -1},          {-1, -1.0 / 3}, {-2, -2},   {-1, -1},
                          {-1.0 / 3, -1.0 / 3}, {-1, -2}, {-0.5, -1},     {-1.0 / 6, -1.0 / 3}};
  for (const auto& ms : rb) rows.emplace_back(ReversedBurr(ms[0], ms[1]));
  return rows;
}

std::vector<RateRow> rate_table(long reference_n) {
  if (reference_n < 2 || (reference_n & (reference_n - 1)) != 0) {
    throw std::invalid_argument("reference n must be a power of two");
  }
  const Rational ps[3] = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  std::vector<RateRow> rows;
  for (const auto& family : rate_table_families()) {
    RateRow row{family, {}};
    const auto cls = class_params(family);
    for (int j = 0; j < 3; ++j) {
      row.cells[j] = rate_exponents(cls, ps[j]);
      const long m = std::lround(std::pow(static_cast<double>(reference_n), to_double(ps[j])));
      const SmdSpec spec(family, m);
      row.cells[j].length_L = smd_quantile(spec, 0.9) - smd_quantile(spec, 0.1);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double round_1sf(double v) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  const double e = std::floor(std::log10(std::abs(v)));
  const double scale = std::pow(10.0, e);
  double r = std::round(v / scale);
  // Guard against log10 landing one decade low.
  if (std::abs(r) >= 10.0) return std::round(v / (scale * 10.0)) * scale * 10.0;
  return r * scale;
}

}  // namespace smd
