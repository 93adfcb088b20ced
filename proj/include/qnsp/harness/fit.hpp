#pragma once

// Least-squares power law e = C eps^slope in log-log coordinates.

#include <cmath>
#include <utility>
#include <vector>

#include "qnsp/errors.hpp"

namespace qnsp {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;  ///< log C
  double r2 = 0.0;
  std::size_t points = 0;
};

/// R^2 is reported as 0 when the errors are all equal (no variance to explain).
inline FitResult fit_rate(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 3) throw FitError("rate fit needs at least three points");
  std::vector<double> x, y;
  for (const auto& [eps, e] : pts) {
    if (!(eps > 0.0)) throw FitError("epsilon values must be positive");
    if (!(e > 0.0) || !std::isfinite(e)) throw FitError("error values must be positive and finite (floor saturation?)");
    x.push_back(std::log(eps));
    y.push_back(std::log(e));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("epsilon values must not all coincide");
  FitResult f;
  f.points = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 0.0;
  return f;
}

}  // namespace qnsp
