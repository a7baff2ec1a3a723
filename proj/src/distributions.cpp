#include "smd/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include "smd/rational.hpp"

namespace smd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

void require_negative(double v, const char* what) {
  if (!(v < 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be negative and finite");
  }
}

boost::math::students_t_distribution<double> t_law(double df) {
  return boost::math::students_t_distribution<double>(df);
}

// ln c_nu for the Student t density c_nu (1 + x^2/nu)^{-(nu+1)/2}.
double t_log_norm(double nu) {
  return std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
         0.5 * std::log(nu * std::numbers::pi);
}

// Bisection on the survival function over [0, inf); monotone so always safe.
double t_inverse_survival(double df, double s) {
  if (s == 0.5) return 0.0;
  if (s > 0.5) return -t_inverse_survival(df, 1.0 - s);
  const auto law = t_law(df);
  double lo = 0.0;
  double hi = 1.0;
  while (boost::math::cdf(boost::math::complement(law, hi)) > s) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) return kInf;
  }
  for (int it = 0; it < 2000 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (boost::math::cdf(boost::math::complement(law, mid)) > s) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Pareto::Pareto(double l) : shape(l) { require_positive(l, "Pareto shape"); }

StudentT::StudentT(double nu) : df(nu) { require_positive(nu, "Student t df"); }

Burr::Burr(double c_, double l_) : c(c_), l(l_) {
  require_positive(c_, "Burr c");
  require_positive(l_, "Burr l");
}

Frechet::Frechet(double g) : gamma(g) { require_positive(g, "Frechet gamma"); }

WeibullClass::WeibullClass(double k, double C_) : kappa(k), C(C_) {
  require_positive(k, "Weibull kappa");
  require_positive(C_, "Weibull C");
}

ReversedBurr::ReversedBurr(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
  require_negative(mu_, "reversed Burr mu");
  require_negative(sigma_, "reversed Burr sigma");
}

ReversedBurr ReversedBurr::from_c_l(double c, double l) {
  require_negative(c, "reversed Burr c");
  require_negative(l, "reversed Burr l");
  return ReversedBurr(-1.0 / (c * l), 1.0 / c);
}

SmdSpec::SmdSpec(TailFamily f, long horizon) : family(std::move(f)), m(horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon m must be >= 1");
}

double survival(const TailFamily& family, double x) {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  return std::visit(
      overloaded{
          [x](const Pareto& d) { return x <= 1.0 ? 1.0 : std::exp(-d.shape * std::log(x)); },
          [x](const StudentT& d) {
            if (std::isinf(x)) return x > 0 ? 0.0 : 1.0;
            return boost::math::cdf(boost::math::complement(t_law(d.df), x));
          },
          [x](const Burr& d) {
            if (x <= 0.0) return 1.0;
            if (std::isinf(x)) return 0.0;
            return std::exp(-d.c * std::log1p(std::pow(x, d.l)));
          },
          [x](const Frechet& d) {
            if (x <= 0.0) return 1.0;
            return -std::expm1(-std::pow(d.gamma * x, -1.0 / d.gamma));
          },
          [x](const WeibullClass& d) {
            if (x <= 0.0) return 1.0;
            return std::exp(-d.C * std::pow(x, d.kappa));
          },
          [x](const ReversedBurr& d) {
            if (x >= 0.0) return 0.0;
            if (std::isinf(x)) return 1.0;
            return std::exp(d.c() * std::log1p(std::pow(-x, d.l())));
          },
      },
      family);
}

double cdf(const TailFamily& family, double x) {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  return std::visit(
      overloaded{
          [x](const Pareto& d) { return x <= 1.0 ? 0.0 : -std::expm1(-d.shape * std::log(x)); },
          [x](const StudentT& d) {
            if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
            return boost::math::cdf(t_law(d.df), x);
          },
          [x](const Burr& d) {
            if (x <= 0.0) return 0.0;
            if (std::isinf(x)) return 1.0;
            return -std::expm1(-d.c * std::log1p(std::pow(x, d.l)));
          },
          [x](const Frechet& d) {
            if (x <= 0.0) return 0.0;
            return std::exp(-std::pow(d.gamma * x, -1.0 / d.gamma));
          },
          [x](const WeibullClass& d) {
            if (x <= 0.0) return 0.0;
            return -std::expm1(-d.C * std::pow(x, d.kappa));
          },
          [x](const ReversedBurr& d) {
            if (x >= 0.0) return 1.0;
            if (std::isinf(x)) return 0.0;
            return -std::expm1(d.c() * std::log1p(std::pow(-x, d.l())));
          },
      },
      family);
}

double log_cdf(const TailFamily& family, double x) {
  if (const auto* fr = std::get_if<Frechet>(&family)) {
    if (x <= 0.0) return -kInf;
    return -std::pow(fr->gamma * x, -1.0 / fr->gamma);
  }
  const double s = survival(family, x);
  if (s < 0.5) return std::log1p(-s);
  return std::log(cdf(family, x));
}

double density(const TailFamily& family, double x) {
  return std::visit(
      overloaded{
          [x](const Pareto& d) {
            return x < 1.0 ? 0.0 : d.shape * std::exp(-(d.shape + 1.0) * std::log(x));
          },
          [x](const StudentT& d) { return boost::math::pdf(t_law(d.df), x); },
          [x](const Burr& d) {
            if (x <= 0.0) return 0.0;
            const double xl = std::pow(x, d.l);
            return d.c * d.l * xl / x * std::exp(-(d.c + 1.0) * std::log1p(xl));
          },
          [x](const Frechet& d) {
            if (x <= 0.0) return 0.0;
            const double t = std::pow(d.gamma * x, -1.0 / d.gamma);
            return t / (d.gamma * x) * std::exp(-t);
          },
          [x](const WeibullClass& d) {
            if (x <= 0.0) return 0.0;
            const double xk = std::pow(x, d.kappa);
            return d.C * d.kappa * xk / x * std::exp(-d.C * xk);
          },
          [x](const ReversedBurr& d) {
            if (x >= 0.0) return 0.0;
            const double c = d.c();
            const double l = d.l();
            const double yl = std::pow(-x, l);
            // d/dx of 1 - (1 + (-x)^l)^c.
            return c * l * yl / (-x) * std::exp((c - 1.0) * std::log1p(yl));
          },
      },
      family);
}

double inverse_survival(const TailFamily& family, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("probability must lie in (0, 1)");
  return std::visit(
      overloaded{
          [s](const Pareto& d) { return std::exp(-std::log(s) / d.shape); },
          [s](const StudentT& d) { return t_inverse_survival(d.df, s); },
          [s](const Burr& d) { return std::pow(std::expm1(-std::log(s) / d.c), 1.0 / d.l); },
          [s](const Frechet& d) {
            return std::pow(-std::log1p(-s), -d.gamma) / d.gamma;
          },
          [s](const WeibullClass& d) { return std::pow(-std::log(s) / d.C, 1.0 / d.kappa); },
          [s](const ReversedBurr& d) {
            return -std::pow(std::expm1(std::log(s) / d.c()), 1.0 / d.l());
          },
      },
      family);
}

double quantile(const TailFamily& family, double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("probability must lie in (0, 1)");
  if (const auto* fr = std::get_if<Frechet>(&family)) {
    return std::pow(-std::log(q), -fr->gamma) / fr->gamma;
  }
  if (const auto* t = std::get_if<StudentT>(&family)) {
    if (q < 0.5) return -t_inverse_survival(t->df, q);
  }
  return inverse_survival(family, 1.0 - q);
}

std::vector<double> sample(const TailFamily& family, std::size_t n, RngStream& rng) {
  std::vector<double> out;
  out.reserve(n);
  if (const auto* t = std::get_if<StudentT>(&family)) {
    boost::random::normal_distribution<double> normal(0.0, 1.0);
    // chi2_nu / nu == Gamma(nu / 2, scale 2 / nu).
    boost::random::gamma_distribution<double> chi(t->df / 2.0, 2.0 / t->df);
    for (std::size_t i = 0; i < n; ++i) {
      const double z = normal(rng);
      const double v = chi(rng);
      out.push_back(z / std::sqrt(v));
    }
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) out.push_back(quantile(family, rng.uniform()));
  return out;
}

double lower_endpoint(const TailFamily& family) {
  return std::visit(overloaded{
                        [](const Pareto&) { return 1.0; },
                        [](const StudentT&) { return -kInf; },
                        [](const Burr&) { return 0.0; },
                        [](const Frechet&) { return 0.0; },
                        [](const WeibullClass&) { return 0.0; },
                        [](const ReversedBurr&) { return -kInf; },
                    },
                    family);
}

double upper_endpoint(const TailFamily& family) {
  return std::holds_alternative<ReversedBurr>(family) ? 0.0 : kInf;
}

double smd_cdf(const SmdSpec& spec, double x) {
  if (spec.m == 1) return cdf(spec.family, x);
  const double lf = log_cdf(spec.family, x);
  if (lf == -kInf) return 0.0;
  return std::exp(static_cast<double>(spec.m) * lf);
}

double smd_quantile(const SmdSpec& spec, double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("probability must lie in (0, 1)");
  if (spec.m == 1) return quantile(spec.family, q);
  const double lq = std::log(q) / static_cast<double>(spec.m);
  if (const auto* fr = std::get_if<Frechet>(&spec.family)) {
    return std::pow(-lq, -fr->gamma) / fr->gamma;
  }
  const double s = -std::expm1(lq);
  if (s > 0.5) return quantile(spec.family, std::exp(lq));
  return inverse_survival(spec.family, s);
}

TailClassParams class_params(const TailFamily& family) {
  return std::visit(
      overloaded{
          [](const Pareto& d) -> TailClassParams { return HallParams{d.shape, 1.0, 1.0, 0.0}; },
          [&](const StudentT&) -> TailClassParams { return tail_expansion(family); },
          [](const Burr& d) -> TailClassParams { return HallParams{d.c * d.l, d.c, 1.0, -d.l}; },
          [](const Frechet& d) -> TailClassParams {
            const double alpha = 1.0 / d.gamma;
            const double A = std::pow(d.gamma, -alpha);
            return HallParams{alpha, d.gamma >= 1.0 ? alpha : 1.0, A, -A / 2.0};
          },
          [](const WeibullClass& d) -> TailClassParams { return WeibullTailParams{d.kappa, d.C}; },
          [](const ReversedBurr& d) -> TailClassParams {
            return BoundedParams{d.mu, d.sigma, 1.0, 1.0 / d.sigma, 0.0};
          },
      },
      family);
}

TailClassParams tail_expansion(const TailFamily& family) {
  return std::visit(
      overloaded{
          [](const Pareto& d) -> TailClassParams { return HallParams{d.shape, 1.0, 1.0, 0.0}; },
          [](const StudentT& d) -> TailClassParams {
            const double nu = d.df;
            const double A = std::exp(t_log_norm(nu) + 0.5 * (nu - 1.0) * std::log(nu));
            const double B = -nu * nu * (nu + 1.0) / (2.0 * (nu + 2.0));
            return HallParams{nu, 2.0, A, B};
          },
          [](const Burr& d) -> TailClassParams { return HallParams{d.c * d.l, d.l, 1.0, -d.c}; },
          [](const Frechet& d) -> TailClassParams {
            const double alpha = 1.0 / d.gamma;
            const double A = std::pow(d.gamma, -alpha);
            return HallParams{alpha, alpha, A, -A / 2.0};
          },
          [](const WeibullClass& d) -> TailClassParams { return WeibullTailParams{d.kappa, d.C}; },
          [](const ReversedBurr& d) -> TailClassParams {
            const double c = d.c();
            return BoundedParams{-c * d.l(), 1.0 / c, 1.0, c, 0.0};
          },
      },
      family);
}

std::string family_name(const TailFamily& family) {
  return std::visit(overloaded{
                        [](const Pareto&) { return std::string("pareto"); },
                        [](const StudentT&) { return std::string("t"); },
                        [](const Burr&) { return std::string("burr"); },
                        [](const Frechet&) { return std::string("frechet"); },
                        [](const WeibullClass&) { return std::string("weibull"); },
                        [](const ReversedBurr&) { return std::string("revburr"); },
                    },
                    family);
}

std::string family_label(const TailFamily& family) {
  return std::visit(
      overloaded{
          [](const Pareto& d) { return format_number(d.shape); },
          [](const StudentT& d) { return format_number(d.df); },
          [](const Burr& d) { return format_number(d.c) + "," + format_number(d.l); },
          [](const Frechet& d) { return format_number(d.gamma); },
          [](const WeibullClass& d) {
            return d.C == 1.0 ? format_number(d.kappa)
                              : format_number(d.kappa) + "," + format_number(d.C);
          },
          [](const ReversedBurr& d) { return format_number(d.mu) + "," + format_number(d.sigma); },
      },
      family);
}

namespace {

double parse_number(const std::string& token) {
  const auto slash = token.find('/');
  std::size_t used = 0;
  try {
    if (slash == std::string::npos) {
      const double v = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      return v;
    }
    const std::string a = token.substr(0, slash);
    const std::string b = token.substr(slash + 1);
    std::size_t ua = 0;
    std::size_t ub = 0;
    const double num = std::stod(a, &ua);
    const double den = std::stod(b, &ub);
    if (ua != a.size() || ub != b.size() || den == 0.0) throw std::invalid_argument(token);
    return num / den;
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + token + "'");
  }
}

std::vector<double> parse_numbers(const std::string& label) {
  std::vector<double> out;
  std::stringstream ss(label);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw std::invalid_argument("empty parameter in '" + label + "'");
    out.push_back(parse_number(item.substr(b, e - b + 1)));
  }
  return out;
}

}  // namespace

TailFamily make_family(const std::string& name, const std::string& label) {
  const auto v = parse_numbers(label);
  auto want = [&](std::size_t lo, std::size_t hi) {
    if (v.size() < lo || v.size() > hi) {
      throw std::invalid_argument("family '" + name + "' takes " + std::to_string(lo) +
                                  (lo == hi ? "" : "-" + std::to_string(hi)) +
                                  " parameter(s), got '" + label + "'");
    }
  };
  if (name == "pareto") { want(1, 1); return Pareto(v[0]); }
  if (name == "t") { want(1, 1); return StudentT(v[0]); }
  if (name == "burr") { want(2, 2); return Burr(v[0], v[1]); }
  if (name == "frechet") { want(1, 1); return Frechet(v[0]); }
  if (name == "weibull") { want(1, 2); return WeibullClass(v[0], v.size() == 2 ? v[1] : 1.0); }
  if (name == "revburr") { want(2, 2); return ReversedBurr(v[0], v[1]); }
  throw std::invalid_argument("unknown family '" + name +
                              "' (expected pareto, t, burr, frechet, weibull, revburr)");
}

}  // namespace smd
