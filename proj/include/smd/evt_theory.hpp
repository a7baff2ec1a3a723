#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "smd/distributions.hpp"
#include "smd/kernel_spec.hpp"
#include "smd/rational.hpp"

namespace smd {

/// Norming constants (gamma, a_h, b_h) of the sample maximum over a horizon h,
/// so that F^h(x) ~ G_gamma((x - b) / a). theta is set for the Weibull class.
struct NormingConstants {
  double gamma;
  double a;
  double b;
  std::optional<double> theta;
};

NormingConstants norming_constants(const TailClassParams& cls, double horizon);

/// M_n: expected number of horizon exceedances of x (up to the class constant).
double big_m(const TailClassParams& cls, double x, double m);
/// K_n: the same quantity for a block of size k.
double big_k(const TailClassParams& cls, double x, double k);

/// Asymptotic bias scale of the block-maxima MLE.
double lambda_n(const TailClassParams& cls, double k, double m);

/// tau = F^m(x) - G_{gamma_k}(x), using the family's actual tail expansion.
double tau_n(const SmdSpec& spec, double k, double x);

double xi_n(const TailClassParams& cls, double x);
double omega_n(const TailClassParams& cls, double x);

struct EtaVector {
  std::array<double, 3> v;
  double sum() const { return v[0] + v[1] + v[2]; }
};

EtaVector eta_vector(double gamma, double big_k_value);

enum class Regime { Vanishing, Delta, Diverging };

double zeta_n(Regime regime, double n_blocks, double gamma, double big_k_value);

/// N^{-1/2} lambda eta'1 + tau + zeta: the three rate terms of the PE error.
double pe_rate(double n_blocks, double lambda, const EtaVector& eta, double tau, double zeta);

/// nu_0 = (2 mu2)^{-1/3} psi_half^{2/3}.
double nu0(const KernelSpec& kernel);

/// Pointwise AMSE-optimal bandwidth of the kernel distribution estimator at x.
double optimal_bandwidth(const TailClassParams& cls, const KernelSpec& kernel, double x, double n);

/// Asymptotic bias of F^m - Fhat^m at the optimal bandwidth, given F^m(x).
double ne_bias(const TailClassParams& cls, const KernelSpec& kernel, double x, double m, double n,
               double smd_value);

/// Optimal bandwidth and bias when M_n = delta (x at the delta-exceedance level).
double optimal_bandwidth_delta(const TailClassParams& cls, const KernelSpec& kernel, double m,
                               double n, double delta);
double ne_bias_delta(const TailClassParams& cls, const KernelSpec& kernel, double m, double n,
                     double delta);

/// x solving M_n(x, m) = delta.
double delta_level(const TailClassParams& cls, double m, double delta);

/// Polynomial MSE exponents at horizon m = n^p. Unset means the estimator
/// falls outside the conditions of its convergence result.
struct RateExponents {
  std::optional<Rational> pe;
  std::optional<Rational> ne;
  Rational p;
  double length_L = 0.0;
};

RateExponents rate_exponents(const TailClassParams& cls, const Rational& p);

struct RateRow {
  TailFamily family;
  std::array<RateExponents, 3> cells;  // p = 1/4, 1/2, 3/4
};

/// The 35 tabulated families in table order.
std::vector<TailFamily> rate_table_families();

/// Exponents for every tabulated family with L_m = Q_m(0.9) - Q_m(0.1)
/// at m = reference_n^p.
std::vector<RateRow> rate_table(long reference_n);

/// Round to one significant figure (half away from zero).
double round_1sf(double v);

}  // namespace smd
