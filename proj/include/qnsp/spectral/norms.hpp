#pragma once

#include <cmath>
#include <string>

#include "qnsp/errors.hpp"
#include "qnsp/remainder_set.hpp"
#include "qnsp/spectral/operators.hpp"

namespace qnsp {

/// Sobolev index and Planck constant of the energy norm.
struct NormSpec {
  double sobolev_index = 3.0;
  double hbar = 0.0;

  void validate() const {
    if (!(sobolev_index >= 0.0)) throw UsageError("Sobolev index must be non-negative");
    if (!(hbar >= 0.0)) throw UsageError("Planck constant must be non-negative");
  }
};

/// Squared H^s norm with Bessel-potential weights (1+|xi|^2)^s, summed over
/// every mode and normalised so that s = 0 gives the L^2 norm over the box.
inline double sobolev_norm_squared(const ScalarField& f, double s) {
  if (!(s >= 0.0)) throw UsageError("Sobolev index must be non-negative, got " + std::to_string(s));
  const Grid& g = f.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = s == 0.0 ? 1.0 : std::pow(1.0 + g.xi2_full(i), s);
    acc += g.multiplicity(i) * w * std::norm(f[i]);
  }
  return g.volume() * acc;
}

inline double sobolev_norm_squared(const VectorField& v, double s) {
  double acc = 0.0;
  for (const auto& c : v) acc += sobolev_norm_squared(c, s);
  return acc;
}

inline double sobolev_norm(const ScalarField& f, double s) {
  return std::sqrt(sobolev_norm_squared(f, s));
}
inline double sobolev_norm(const VectorField& v, double s) {
  return std::sqrt(sobolev_norm_squared(v, s));
}

inline double l2_norm(const ScalarField& f) { return sobolev_norm(f, 0.0); }
inline double l2_norm(const VectorField& v) { return sobolev_norm(v, 0.0); }

inline double h3_norm(const ScalarField& f) { return sobolev_norm(f, 3.0); }
inline double h3_norm(const VectorField& v) { return sobolev_norm(v, 3.0); }

/// hbar-weighted energy norm of a remainder:
///   ||(N,U,T,grad Phi)||_{H3}^2 + ||(h grad N, h grad U, h div U, h lap Phi)||_{H3}^2
///   + ||h^2 lap N||_{H3}^2.
/// With hbar = 0 the weighted groups vanish identically.
inline double triple_norm(const RemainderSet& r, double hbar) {
  if (!(hbar >= 0.0)) throw UsageError("Planck constant must be non-negative");
  r.N_R.check_same_grid(r.T_R);
  r.N_R.check_same_grid(r.Phi_R);
  if (!(r.U_R.grid() == r.N_R.grid())) throw UsageError("remainder fields live on different grids");
  constexpr double s = 3.0;

  double base = sobolev_norm_squared(r.N_R, s) + sobolev_norm_squared(r.U_R, s) +
                sobolev_norm_squared(r.T_R, s) + sobolev_norm_squared(grad(r.Phi_R), s);

  const double h2 = hbar * hbar;
  double first = 0.0;
  double second = 0.0;
  if (hbar > 0.0) {
    first += sobolev_norm_squared(grad(r.N_R), s);
    for (const auto& c : r.U_R) first += sobolev_norm_squared(grad(c), s);
    first += sobolev_norm_squared(div(r.U_R), s);
    first += sobolev_norm_squared(laplacian(r.Phi_R), s);
    second = sobolev_norm_squared(laplacian(r.N_R), s);
  }
  return std::sqrt(base + h2 * first + h2 * h2 * second);
}

}  // namespace qnsp
