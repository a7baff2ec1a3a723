#pragma once

#include <cmath>
#include <numbers>
#include <string>

namespace smd {

/// Symmetric kernel density k with its integrated kernel K and the two
/// moments the theory needs: mu2 = int z^2 k and psi_half = int z K k.
class KernelSpec {
public:
  enum class Type { Gaussian, Epanechnikov };

  static KernelSpec gaussian() { return KernelSpec(Type::Gaussian); }
  static KernelSpec epanechnikov() { return KernelSpec(Type::Epanechnikov); }

  Type type() const { return type_; }
  std::string name() const { return type_ == Type::Gaussian ? "gaussian" : "epanechnikov"; }

  double density(double z) const {
    if (type_ == Type::Gaussian) return std::exp(-0.5 * z * z) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
    return std::abs(z) >= 1.0 ? 0.0 : 0.75 * (1.0 - z * z);
  }

  double integrated(double z) const {
    if (type_ == Type::Gaussian) return 0.5 * std::erfc(-z * (0.5 * std::numbers::sqrt2));
    if (z <= -1.0) return 0.0;
    if (z >= 1.0) return 1.0;
    return 0.5 + 0.75 * z - 0.25 * z * z * z;
  }

  double mu2() const { return type_ == Type::Gaussian ? 1.0 : 0.2; }

  double psi_half() const {
    return type_ == Type::Gaussian ? 0.5 * std::numbers::inv_sqrtpi : 9.0 / 70.0;
  }

  bool compact() const { return type_ == Type::Epanechnikov; }

  /// |z| beyond which K(z) is 0 or 1 to double precision (exact for compact kernels).
  double cutoff() const { return type_ == Type::Gaussian ? 9.0 : 1.0; }

private:
  explicit KernelSpec(Type t) : type_(t) {}
  Type type_;
};

}  // namespace smd
