#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qnsp/spectral/operators.hpp"

namespace qnsp {

/// Band-limited random field: sum over integer wavevectors with
/// max |k_i| <= max_wavenumber of Gaussian cos/sin amplitudes damped by
/// exp(-|k|^2 / (2 width^2)). Deterministic for a given seed.
struct RandomFieldSpec {
  int max_wavenumber = 4;
  double width = 2.0;
  bool mean_zero = true;
};

inline ScalarField random_smooth_field(const Grid& grid, std::uint64_t seed,
                                       const RandomFieldSpec& spec = {}) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = grid.dim();
  const int K = spec.max_wavenumber;
  ScalarField f(grid);
  // Enumerate the half-space of wavevectors directly in the r2c table.
  for (std::size_t i = 0; i < grid.spec_size(); ++i) {
    const auto& k = grid.mode(i);
    bool inside = true;
    double k2 = 0.0;
    for (int a = 0; a < d; ++a) {
      if (std::abs(k[a]) > K) inside = false;
      k2 += static_cast<double>(k[a]) * k[a];
    }
    if (!inside) continue;
    const double amp = std::exp(-k2 / (2.0 * spec.width * spec.width));
    const double re = normal(rng) * amp;
    const double im = normal(rng) * amp;
    f[i] = complex(re, im);
  }
  // Round trip through physical space restores exact Hermitian symmetry.
  f = ScalarField::from_physical(grid, f.to_physical());
  if (spec.mean_zero) f.set_mean(0.0);
  return f;
}

/// Random field rescaled so that its physical maximum modulus equals `amplitude`.
inline ScalarField random_bounded_field(const Grid& grid, std::uint64_t seed, double amplitude,
                                        const RandomFieldSpec& spec = {}) {
  ScalarField f = random_smooth_field(grid, seed, spec);
  const auto v = f.to_physical();
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m > 0.0) f *= amplitude / m;
  return f;
}

inline VectorField random_vector_field(const Grid& grid, std::uint64_t seed,
                                       const RandomFieldSpec& spec = {}) {
  std::vector<ScalarField> c;
  for (int a = 0; a < grid.dim(); ++a)
    c.push_back(random_smooth_field(grid, seed * 7919 + 17 * a + 1, spec));
  return VectorField(std::move(c));
}

}  // namespace qnsp
