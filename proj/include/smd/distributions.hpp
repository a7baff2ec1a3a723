#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "smd/rng.hpp"

namespace smd {

// ---------------------------------------------------------------------------
// Underlying families. Every constructor rejects invalid parameters with
// std::invalid_argument, so a constructed family is always usable.
// ---------------------------------------------------------------------------

/// 1 - F(x) = x^{-shape}, x >= 1.
struct Pareto {
  explicit Pareto(double shape);
  double shape;
};

/// Student t with (possibly fractional) degrees of freedom.
struct StudentT {
  explicit StudentT(double df);
  double df;
};

/// 1 - F(x) = (1 + x^l)^{-c}, x > 0.
struct Burr {
  Burr(double c, double l);
  double c;
  double l;
};

/// F(x) = exp(-(gamma x)^{-1/gamma}), x > 0; extreme value index gamma.
struct Frechet {
  explicit Frechet(double gamma);
  double gamma;
};

/// F(x) = 1 - exp(-C x^kappa), x > 0.
struct WeibullClass {
  WeibullClass(double kappa, double C = 1.0);
  double kappa;
  double C;
};

/// Reversed Burr with upper endpoint 0:  1 - F(x) = (1 + (-x)^l)^c, x < 0,
/// with c, l < 0. Keyed by the tabulated (mu, sigma) = (-1/(c l), 1/c).
struct ReversedBurr {
  ReversedBurr(double mu, double sigma);
  static ReversedBurr from_c_l(double c, double l);

  double c() const { return 1.0 / sigma; }
  double l() const { return -sigma / mu; }

  double mu;
  double sigma;
};

using TailFamily = std::variant<Pareto, StudentT, Burr, Frechet, WeibullClass, ReversedBurr>;

// ---------------------------------------------------------------------------
// Tail classes.
// ---------------------------------------------------------------------------

/// 1 - F(x) = A x^{-alpha} (1 + B x^{-beta}) + o(x^{-alpha-beta}).
struct HallParams {
  double alpha;
  double beta;
  double A;
  double B;
};

/// 1 - F(x) = exp(-C x^kappa) (1 + o(1)).
struct WeibullTailParams {
  double kappa;
  double C;
};

/// 1 - F(x) = (x* - x)^{-mu} (D + E (x* - x)^{mu sigma}) + ..., x -> x*.
struct BoundedParams {
  double mu;
  double sigma;
  double D;
  double E;
  double x_star;

  /// The bounded class proper requires mu < -2; families outside it are
  /// representable (the simulation tables include them) but flagged here.
  bool in_class() const { return mu < -2.0; }
};

using TailClassParams = std::variant<HallParams, WeibullTailParams, BoundedParams>;

/// Sample-maximum distribution F^m for a horizon of m future observations.
struct SmdSpec {
  SmdSpec(TailFamily family, long m);
  TailFamily family;
  long m;
};

// ---------------------------------------------------------------------------
// Operations. All are pure and thread-safe.
// ---------------------------------------------------------------------------

double cdf(const TailFamily& family, double x);

/// 1 - F(x), evaluated from the tail formula so it keeps relative accuracy
/// where cdf() rounds to 1.
double survival(const TailFamily& family, double x);

/// ln F(x), using log1p(-survival) near the upper tail.
double log_cdf(const TailFamily& family, double x);

double density(const TailFamily& family, double x);

/// Inverse CDF; throws std::domain_error unless 0 < q < 1.
double quantile(const TailFamily& family, double q);

/// Inverse of survival(); s = 1 - q given directly for accuracy near q = 1.
double inverse_survival(const TailFamily& family, double s);

/// n independent draws. Inverse transform for closed-form quantiles; the
/// Student t uses Z / sqrt(chi2_df / df).
std::vector<double> sample(const TailFamily& family, std::size_t n, RngStream& rng);

double lower_endpoint(const TailFamily& family);
double upper_endpoint(const TailFamily& family);

/// F^m(x) = exp(m ln F(x)).
double smd_cdf(const SmdSpec& spec, double x);

/// Q_m(q) = F^{-1}(q^{1/m}).
double smd_quantile(const SmdSpec& spec, double q);

/// Tail-class parameters in the tabulated convention used by the rate
/// calculus (Burr beta = c, Frechet beta = 1/gamma for gamma >= 1 else 1,
/// reversed Burr keyed by its tabulated (mu, sigma)).
TailClassParams class_params(const TailFamily& family);

/// The family's actual first and second order tail expansion. Differs from
/// class_params() for Burr, Frechet (beta) and the reversed Burr.
TailClassParams tail_expansion(const TailFamily& family);

/// "pareto", "t", "burr", "frechet", "weibull", "revburr".
std::string family_name(const TailFamily& family);

/// Parameter label such as "3", "1/2", "3,1/2", "-6,-2".
std::string family_label(const TailFamily& family);

/// Parses a family from its name and label (inverse of the two above).
TailFamily make_family(const std::string& name, const std::string& label);

}  // namespace smd
