#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "qnsp/errors.hpp"
#include "qnsp/spectral/grid.hpp"

namespace qnsp {

/// Real periodic scalar field stored as Fourier-series coefficients
/// (r2c half-complex layout of its grid).
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(Grid grid) : grid_(std::move(grid)), coeffs_(grid_.spec_size()) {}
  ScalarField(Grid grid, std::vector<complex> coeffs)
      : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.spec_size())
      throw UsageError("coefficient count does not match grid");
  }

  static ScalarField zeros(const Grid& grid) { return ScalarField(grid); }

  static ScalarField constant(const Grid& grid, double value) {
    ScalarField f(grid);
    f.coeffs_[0] = value;
    return f;
  }

  static ScalarField from_physical(const Grid& grid, std::span<const double> values) {
    if (values.size() != grid.phys_size()) throw UsageError("physical array does not match grid");
    ScalarField f(grid);
    grid.forward(values, f.coeffs_);
    return f;
  }

  /// Samples `fn(x)` at the grid points; `x` has grid.dim() meaningful entries.
  static ScalarField from_function(const Grid& grid,
                                   const std::function<double(const std::array<double, 3>&)>& fn) {
    std::vector<double> values(grid.phys_size());
    const int n = grid.points();
    const int d = grid.dim();
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::array<double, 3> x{0.0, 0.0, 0.0};
      std::size_t rem = i;
      for (int a = d - 1; a >= 0; --a) {
        x[a] = grid.coordinate(static_cast<int>(rem % n));
        rem /= n;
      }
      values[i] = fn(x);
    }
    return from_physical(grid, values);
  }

  std::vector<double> to_physical() const {
    std::vector<double> out(grid_.phys_size());
    grid_.backward(coeffs_, out);
    return out;
  }

  const Grid& grid() const { return grid_; }
  std::span<const complex> coeffs() const { return coeffs_; }
  std::span<complex> coeffs() { return coeffs_; }
  complex& operator[](std::size_t i) { return coeffs_[i]; }
  const complex& operator[](std::size_t i) const { return coeffs_[i]; }
  std::size_t size() const { return coeffs_.size(); }

  double mean() const { return coeffs_.empty() ? 0.0 : coeffs_[0].real(); }
  void set_mean(double m) { coeffs_[0] = m; }

  /// Zeroes every mode outside the 2/3-rule band.
  ScalarField& dealias() {
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      if (!grid_.is_kept(i)) coeffs_[i] = 0.0;
    return *this;
  }

  bool is_finite() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const complex& c) {
      return std::isfinite(c.real()) && std::isfinite(c.imag());
    });
  }

  ScalarField& operator+=(const ScalarField& o) {
    check_same_grid(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  ScalarField& operator-=(const ScalarField& o) {
    check_same_grid(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  ScalarField& operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  /// this += s * o
  ScalarField& axpy(double s, const ScalarField& o) {
    check_same_grid(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * o.coeffs_[i];
    return *this;
  }

  void check_same_grid(const ScalarField& o) const {
    if (!(grid_ == o.grid_)) throw UsageError("fields live on different grids");
  }

 private:
  Grid grid_;
  std::vector<complex> coeffs_;
};

inline ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
inline ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
inline ScalarField operator*(double s, ScalarField a) { return a *= s; }
inline ScalarField operator*(ScalarField a, double s) { return a *= s; }
inline ScalarField operator-(ScalarField a) { return a *= -1.0; }

/// dim scalar components on one grid.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(std::vector<ScalarField> comps) : comps_(std::move(comps)) {
    for (std::size_t i = 1; i < comps_.size(); ++i) comps_[0].check_same_grid(comps_[i]);
  }
  static VectorField zeros(const Grid& grid) {
    return VectorField(std::vector<ScalarField>(grid.dim(), ScalarField::zeros(grid)));
  }

  int dim() const { return static_cast<int>(comps_.size()); }
  const Grid& grid() const { return comps_.front().grid(); }
  ScalarField& operator[](int i) { return comps_[i]; }
  const ScalarField& operator[](int i) const { return comps_[i]; }
  auto begin() { return comps_.begin(); }
  auto end() { return comps_.end(); }
  auto begin() const { return comps_.begin(); }
  auto end() const { return comps_.end(); }

  VectorField& dealias() {
    for (auto& c : comps_) c.dealias();
    return *this;
  }
  bool is_finite() const {
    return std::all_of(comps_.begin(), comps_.end(), [](const auto& c) { return c.is_finite(); });
  }

  VectorField& operator+=(const VectorField& o) {
    check_rank(o);
    for (int i = 0; i < dim(); ++i) comps_[i] += o.comps_[i];
    return *this;
  }
  VectorField& operator-=(const VectorField& o) {
    check_rank(o);
    for (int i = 0; i < dim(); ++i) comps_[i] -= o.comps_[i];
    return *this;
  }
  VectorField& operator*=(double s) {
    for (auto& c : comps_) c *= s;
    return *this;
  }
  VectorField& axpy(double s, const VectorField& o) {
    check_rank(o);
    for (int i = 0; i < dim(); ++i) comps_[i].axpy(s, o.comps_[i]);
    return *this;
  }

 private:
  void check_rank(const VectorField& o) const {
    if (o.dim() != dim()) throw UsageError("vector fields of different dimension");
  }
  std::vector<ScalarField> comps_;
};

inline VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
inline VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
inline VectorField operator*(double s, VectorField a) { return a *= s; }
inline VectorField operator*(VectorField a, double s) { return a *= s; }
inline VectorField operator-(VectorField a) { return a *= -1.0; }

/// Row-major dim x dim tensor field (Hessians, velocity gradients).
class TensorField {
 public:
  TensorField() = default;
  TensorField(int dim, std::vector<ScalarField> comps) : dim_(dim), comps_(std::move(comps)) {
    if (static_cast<int>(comps_.size()) != dim * dim) throw UsageError("tensor needs dim^2 entries");
  }
  int dim() const { return dim_; }
  const Grid& grid() const { return comps_.front().grid(); }
  ScalarField& operator()(int i, int j) { return comps_[i * dim_ + j]; }
  const ScalarField& operator()(int i, int j) const { return comps_[i * dim_ + j]; }

 private:
  int dim_ = 0;
  std::vector<ScalarField> comps_;
};

// Generic helpers so that time-series code can treat both field ranks alike.
inline void axpy_into(ScalarField& y, double s, const ScalarField& x) { y.axpy(s, x); }
inline void axpy_into(VectorField& y, double s, const VectorField& x) { y.axpy(s, x); }
inline ScalarField zeros_like(const ScalarField& f) { return ScalarField::zeros(f.grid()); }
inline VectorField zeros_like(const VectorField& f) { return VectorField::zeros(f.grid()); }

inline double min_value(const ScalarField& f) {
  const auto v = f.to_physical();
  return *std::min_element(v.begin(), v.end());
}
inline double max_value(const ScalarField& f) {
  const auto v = f.to_physical();
  return *std::max_element(v.begin(), v.end());
}

}  // namespace qnsp
