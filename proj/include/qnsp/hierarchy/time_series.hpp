#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qnsp/errors.hpp"
#include "qnsp/spectral/field.hpp"

namespace qnsp {

/// Finite-difference weights for derivatives of order 0..max_order at `z`
/// from values at `x` (Fornberg's recursion). Result is [order][node].
inline std::vector<std::vector<double>> fornberg_weights(double z, const std::vector<double>& x, int max_order) {
  const int n = static_cast<int>(x.size());
  if (n < 1) throw UsageError("need at least one node");
  std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

inline constexpr int kInterpolationPoints = 8;
inline constexpr int kDerivativePoints = 9;

/// Field samples at the uniform times t0 + j*h, j = 0..size()-1.
template <class Field>
class SampledSeries {
 public:
  SampledSeries() = default;
  SampledSeries(double t0, double h) : t0_(t0), h_(h) {
    if (!(h > 0.0)) throw UsageError("sample spacing must be positive");
  }

  void push_back(Field f) { samples_.push_back(std::move(f)); }
  void reserve(std::size_t n) { samples_.reserve(n); }

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double t0() const { return t0_; }
  double spacing() const { return h_; }
  double time(std::size_t j) const { return t0_ + static_cast<double>(j) * h_; }
  double t_end() const { return time(samples_.empty() ? 0 : samples_.size() - 1); }
  const Field& operator[](std::size_t j) const { return samples_.at(j); }
  Field& operator[](std::size_t j) { return samples_.at(j); }
  const std::vector<Field>& samples() const { return samples_; }

  bool contains(double t) const {
    const double tol = 1e-9 * h_;
    return !samples_.empty() && t >= t0_ - tol && t <= t_end() + tol;
  }

  /// Lagrange interpolation on the `points` samples surrounding t.
  Field at(double t, int points = kInterpolationPoints) const {
    if (!contains(t))
      throw RangeError("time " + std::to_string(t) + " outside sampled range [" + std::to_string(t0_) + ", " +
                       std::to_string(t_end()) + "]");
    const double s = (t - t0_) / h_;
    const long nearest = std::lround(s);
    if (std::abs(s - static_cast<double>(nearest)) < 1e-10)
      return samples_[static_cast<std::size_t>(std::clamp<long>(nearest, 0, static_cast<long>(size()) - 1))];
    const int p = std::min<int>(points, static_cast<int>(size()));
    const long left = static_cast<long>(std::floor(s));
    const long first = std::clamp<long>(left - (p / 2 - 1), 0, static_cast<long>(size()) - p);
    return combine(first, p, s, 0);
  }

  /// Derivative of order `order` at sample j with a (mostly centered) stencil.
  Field derivative(std::size_t j, int order = 1, int points = kDerivativePoints) const {
    const int p = std::min<int>(points, static_cast<int>(size()));
    if (p <= order) throw UsageError("too few samples for the requested derivative");
    const long first =
        std::clamp<long>(static_cast<long>(j) - p / 2, 0, static_cast<long>(size()) - p);
    return combine(first, p, static_cast<double>(j), order);
  }

  /// Derivative series on the same sample times.
  SampledSeries derivative_series(int order = 1, int points = kDerivativePoints) const {
    SampledSeries out(t0_, h_);
    out.reserve(size());
    for (std::size_t j = 0; j < size(); ++j) out.push_back(derivative(j, order, points));
    return out;
  }

 private:
  // Weighted sum over samples first..first+p-1 evaluated at index position s.
  Field combine(long first, int p, double s, int order) const {
    std::vector<double> nodes(p);
    for (int i = 0; i < p; ++i) nodes[i] = static_cast<double>(first + i);
    const auto w = fornberg_weights(s, nodes, order);
    const double scale = std::pow(h_, -order);
    Field out = zeros_like(samples_[first]);
    for (int i = 0; i < p; ++i) out.axpy(w[order][i] * scale, samples_[first + i]);
    return out;
  }

  double t0_ = 0.0;
  double h_ = 1.0;
  std::vector<Field> samples_;
};

}  // namespace qnsp
