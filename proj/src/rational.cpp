#include "smd/rational.hpp"

#include <cmath>
#include <cstdio>

namespace smd {

std::optional<Rational> as_rational(double v, std::int64_t max_den) {
  if (!std::isfinite(v)) return std::nullopt;
  for (std::int64_t den = 1; den <= max_den; ++den) {
    const double scaled = v * static_cast<double>(den);
    const double num = std::round(scaled);
    if (std::abs(num) > 9.0e15) return std::nullopt;
    if (std::abs(scaled - num) <= 1e-9 * std::max(1.0, std::abs(scaled))) {
      return Rational(static_cast<std::int64_t>(num), den);
    }
  }
  return std::nullopt;
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string format_number(double v) {
  if (auto r = as_rational(v, 64)) return to_string(*r);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace smd
