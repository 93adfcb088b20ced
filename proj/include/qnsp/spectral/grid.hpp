#pragma once

#include <fftw3.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qnsp/errors.hpp"

namespace qnsp {

using complex = std::complex<double>;

namespace detail {

// FFTW planning is not thread-safe; execution with the new-array interface is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct GridData {
  int dim = 0;
  int n = 0;
  double box_length = 0.0;
  std::size_t phys_size = 0;
  std::size_t spec_size = 0;
  int last_extent = 0;  // n/2 + 1

  // Per spectral mode tables (r2c half-complex layout, last axis halved).
  std::vector<std::array<int, 3>> k;     // signed integer wavenumbers
  std::array<std::vector<double>, 3> xi; // derivative symbols, 0 on Nyquist modes
  std::vector<double> xi2;               // |xi|^2, 0 on Nyquist modes
  std::vector<double> xi2_full;          // |xi|^2 for norms, every mode
  std::vector<std::uint8_t> nyquist;     // any axis at |k| = n/2
  std::vector<std::uint8_t> dealias;     // 2/3 rule: every |k_i| <= n/3
  std::vector<double> multiplicity;      // 1 or 2 (Hermitian partner folded)

  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  GridData() = default;
  GridData(const GridData&) = delete;
  GridData& operator=(const GridData&) = delete;
  ~GridData() {
    std::lock_guard lock(fftw_planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

}  // namespace detail

/// Uniform periodic grid on the torus [0, L)^dim with the spectral mode table,
/// the 2/3-rule dealiasing mask and cached FFT plans.
///
/// A Grid is a cheap shared handle; copies refer to the same immutable tables.
class Grid {
 public:
  Grid() = default;

  int dim() const { return data_->dim; }
  int points() const { return data_->n; }
  double box_length() const { return data_->box_length; }
  double volume() const { return std::pow(data_->box_length, data_->dim); }
  double spacing() const { return data_->box_length / data_->n; }
  std::size_t phys_size() const { return data_->phys_size; }
  std::size_t spec_size() const { return data_->spec_size; }
  /// Largest |k_i| kept by the 2/3-rule mask.
  int dealias_cutoff() const { return data_->n / 3; }
  /// Ratio 2*pi/L converting integer wavenumbers to symbols.
  double k0() const { return 2.0 * std::numbers::pi / data_->box_length; }

  const std::array<int, 3>& mode(std::size_t i) const { return data_->k[i]; }
  double xi(int axis, std::size_t i) const { return data_->xi[axis][i]; }
  double xi2(std::size_t i) const { return data_->xi2[i]; }
  double xi2_full(std::size_t i) const { return data_->xi2_full[i]; }
  bool is_nyquist(std::size_t i) const { return data_->nyquist[i] != 0; }
  bool is_kept(std::size_t i) const { return data_->dealias[i] != 0; }
  double multiplicity(std::size_t i) const { return data_->multiplicity[i]; }

  /// Integer wavenumbers of one full axis in FFT order, e.g. {0,1,..,n/2-1,-n/2,..,-1}.
  std::vector<int> axis_wavenumbers() const {
    std::vector<int> out(data_->n);
    for (int j = 0; j < data_->n; ++j) out[j] = j < data_->n / 2 ? j : j - data_->n;
    return out;
  }

  /// Physical coordinate of grid point `index` along an axis.
  double coordinate(int index) const { return spacing() * index; }

  /// Forward transform, normalised so that coefficients are Fourier-series
  /// amplitudes: f(x) = sum_k c_k exp(i k.x).
  void forward(std::span<const double> phys, std::span<complex> spec) const {
    fftw_execute_dft_r2c(data_->forward, const_cast<double*>(phys.data()),
                         reinterpret_cast<fftw_complex*>(spec.data()));
    const double scale = 1.0 / static_cast<double>(data_->phys_size);
    for (auto& c : spec) c *= scale;
  }

  /// Inverse transform; `spec` is left untouched.
  void backward(std::span<const complex> spec, std::span<double> phys) const {
    thread_local std::vector<complex> scratch;
    scratch.assign(spec.begin(), spec.end());
    fftw_execute_dft_c2r(data_->backward, reinterpret_cast<fftw_complex*>(scratch.data()),
                         phys.data());
  }

  bool operator==(const Grid& other) const {
    if (data_ == other.data_) return true;
    if (!data_ || !other.data_) return false;
    return data_->dim == other.data_->dim && data_->n == other.data_->n &&
           data_->box_length == other.data_->box_length;
  }

  bool valid() const { return static_cast<bool>(data_); }

  friend Grid make_grid(int dim, int points_per_axis, double box_length);

 private:
  explicit Grid(std::shared_ptr<const detail::GridData> d) : data_(std::move(d)) {}
  std::shared_ptr<const detail::GridData> data_;
};

/// Builds a dim-dimensional periodic grid with `points_per_axis` points per axis.
inline Grid make_grid(int dim, int points_per_axis, double box_length = 2.0 * std::numbers::pi) {
  if (dim < 1 || dim > 3)
    throw ConfigurationError("grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
  if (points_per_axis < 8 || points_per_axis % 2 != 0)
    throw ConfigurationError("points per axis must be even and >= 8, got " +
                             std::to_string(points_per_axis));
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw ConfigurationError("box length must be positive");

  auto d = std::make_shared<detail::GridData>();
  const int n = points_per_axis;
  d->dim = dim;
  d->n = n;
  d->box_length = box_length;
  d->last_extent = n / 2 + 1;
  d->phys_size = 1;
  for (int a = 0; a < dim; ++a) d->phys_size *= static_cast<std::size_t>(n);
  d->spec_size = d->phys_size / n * d->last_extent;

  const double k0 = 2.0 * std::numbers::pi / box_length;
  const int cutoff = n / 3;
  d->k.resize(d->spec_size);
  for (auto& v : d->xi) v.assign(d->spec_size, 0.0);
  d->xi2.assign(d->spec_size, 0.0);
  d->xi2_full.assign(d->spec_size, 0.0);
  d->nyquist.assign(d->spec_size, 0);
  d->dealias.assign(d->spec_size, 0);
  d->multiplicity.assign(d->spec_size, 1.0);

  std::array<int, 3> extents{1, 1, 1};
  for (int a = 0; a < dim - 1; ++a) extents[a] = n;
  extents[dim - 1] = d->last_extent;

  for (std::size_t i = 0; i < d->spec_size; ++i) {
    std::array<int, 3> idx{0, 0, 0};
    std::size_t rem = i;
    for (int a = dim - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % extents[a]);
      rem /= extents[a];
    }
    std::array<int, 3> k{0, 0, 0};
    bool nyq = false, kept = true;
    double s2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      int kk = idx[a];
      if (a < dim - 1 && kk >= n / 2) kk -= n;  // full axes carry negative modes
      if (a < dim - 1 && kk == -n / 2) nyq = true;
      if (a == dim - 1 && kk == n / 2) nyq = true;
      k[a] = kk;
      if (std::abs(kk) > cutoff) kept = false;
      s2 += (k0 * kk) * (k0 * kk);
    }
    d->k[i] = k;
    d->nyquist[i] = nyq ? 1 : 0;
    d->dealias[i] = (kept && !nyq) ? 1 : 0;
    d->xi2_full[i] = s2;
    if (!nyq) {
      for (int a = 0; a < dim; ++a) d->xi[a][i] = k0 * k[a];
      d->xi2[i] = s2;
    }
    const int klast = k[dim - 1];
    d->multiplicity[i] = (klast == 0 || klast == n / 2) ? 1.0 : 2.0;
  }

  std::array<int, 3> shape{n, n, n};
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    std::vector<double> rbuf(d->phys_size);
    std::vector<complex> cbuf(d->spec_size);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    d->forward = fftw_plan_dft_r2c(dim, shape.data(), rbuf.data(),
                                   reinterpret_cast<fftw_complex*>(cbuf.data()), flags);
    d->backward = fftw_plan_dft_c2r(dim, shape.data(),
                                    reinterpret_cast<fftw_complex*>(cbuf.data()), rbuf.data(),
                                    flags | FFTW_DESTROY_INPUT);
  }
  if (!d->forward || !d->backward) throw ConfigurationError("FFTW planning failed");
  return Grid(std::move(d));
}

}  // namespace qnsp
