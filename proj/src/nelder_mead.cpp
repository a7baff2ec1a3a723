#include "smd/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace smd {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

double diameter(const std::vector<Vertex>& s) {
  double d = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s[i].x.size(); ++j) {
      d = std::max(d, std::abs(s[i].x[j] - s[0].x[j]));
    }
  }
  return d;
}

SimplexResult run(const std::function<double(std::span<const double>)>& f,
                  const std::vector<double>& start, const std::vector<double>& step,
                  double tol, int max_iter) {
  const std::size_t dim = start.size();
  std::vector<Vertex> s;
  s.push_back({start, f(start)});
  for (std::size_t i = 0; i < dim; ++i) {
    auto x = start;
    x[i] += step[i];
    s.push_back({x, f(x)});
  }
  auto order = [&] {
    std::stable_sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };
  order();

  std::vector<double> centroid(dim);
  auto along = [&](double t) {
    std::vector<double> x(dim);
    for (std::size_t j = 0; j < dim; ++j) x[j] = centroid[j] + t * (s.back().x[j] - centroid[j]);
    return x;
  };

  int it = 0;
  for (; it < max_iter; ++it) {
    const double spread = s.back().f - s.front().f;
    if (std::isfinite(s.back().f) && diameter(s) <= tol &&
        spread <= tol * (1.0 + std::abs(s.front().f))) {
      return {s.front().x, s.front().f, it, true};
    }
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += s[i].x[j] / static_cast<double>(dim);
    }

    auto xr = along(-1.0);
    const double fr = f(xr);
    if (fr < s.front().f) {
      auto xe = along(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        s.back() = {std::move(xe), fe};
      } else {
        s.back() = {std::move(xr), fr};
      }
    } else if (fr < s[dim - 1].f) {
      s.back() = {std::move(xr), fr};
    } else {
      const bool outside = fr < s.back().f;
      auto xc = along(outside ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc < (outside ? fr : s.back().f)) {
        s.back() = {std::move(xc), fc};
      } else {
        for (std::size_t i = 1; i <= dim; ++i) {
          for (std::size_t j = 0; j < dim; ++j) {
            s[i].x[j] = s[0].x[j] + 0.5 * (s[i].x[j] - s[0].x[j]);
          }
          s[i].f = f(s[i].x);
        }
      }
    }
    order();
  }
  return {s.front().x, s.front().f, it, false};
}

}  // namespace

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                          std::vector<double> start, std::vector<double> step, double tolerance,
                          int max_iterations) {
  auto first = run(objective, start, step, tolerance, max_iterations);
  if (!first.converged) return first;
  // One restart from the optimum guards against a collapsed simplex.
  std::vector<double> small(step.size());
  std::transform(step.begin(), step.end(), small.begin(), [](double v) { return 0.1 * v; });
  auto second = run(objective, first.x, small, tolerance, max_iterations - first.iterations);
  second.iterations += first.iterations;
  if (second.value > first.value) {
    first.iterations = second.iterations;
    first.converged = second.converged;
    return first;
  }
  return second;
}

}  // namespace smd
