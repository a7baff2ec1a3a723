#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <boost/rational.hpp>

namespace smd {

using Rational = boost::rational<std::int64_t>;

/// Exact rational for a double that is p/q with q <= max_den, if any.
std::optional<Rational> as_rational(double v, std::int64_t max_den = 1000);

/// "-3/20", "2", "0".
std::string to_string(const Rational& r);

/// Rational form when the value has a small denominator, else shortest %g.
std::string format_number(double v);

double to_double(const Rational& r);

}  // namespace smd
