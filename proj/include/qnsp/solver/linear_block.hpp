#pragma once

// Per-mode linearisation of the full system about (n, u, T) = (1, 0, Tbar),
// with the potential eliminated through phi = -n / (eps |xi|^2). Unknowns are
// ordered (n, u_1..u_d, T).

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>

#include "qnsp/solver/params.hpp"
#include "qnsp/spectral/operators.hpp"

namespace qnsp {

using ModeMatrix = Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic>;
using ModeVector = Eigen::Matrix<complex, Eigen::Dynamic, 1>;

inline ModeMatrix linear_block(const Grid& g, std::size_t mode, double Tbar, const PhysParams& p) {
  const int d = g.dim();
  const int m = d + 2;
  ModeMatrix A = ModeMatrix::Zero(m, m);
  const double k2 = g.xi2(mode);
  if (k2 == 0.0) return A;
  const complex I(0.0, 1.0);
  const double h2 = p.hbar * p.hbar;
  const double pressure = Tbar + 1.0 / (p.epsilon * k2) + h2 * k2 / 12.0;
  for (int j = 0; j < d; ++j) {
    const double xj = g.xi(j, mode);
    A(0, 1 + j) = -I * xj;
    A(1 + j, 0) = -I * xj * pressure;
    A(1 + j, m - 1) = -I * xj;
    A(m - 1, 1 + j) = (-2.0 / 3.0 * Tbar + h2 * k2 / 36.0) * I * xj;
    for (int i = 0; i < d; ++i) A(1 + j, 1 + i) = -(p.mu + p.lambda) * xj * g.xi(i, mode);
    A(1 + j, 1 + j) -= p.mu * k2;
  }
  A(m - 1, m - 1) = -2.0 * p.kappa / 3.0 * k2;
  return A;
}

/// Largest admissible step of each scheme for a given state.
struct StabilityReport {
  double spectral_radius = 0.0;  ///< max |eigenvalue| of the linear block
  double advective_rate = 0.0;   ///< max|u| * sum of per-axis max wavenumbers
  double dt_rk4 = 0.0;
  double dt_imex = 0.0;

  double dt(Scheme s) const { return s == Scheme::rk4_explicit ? dt_rk4 : dt_imex; }
};

inline constexpr double kRk4StabilityFraction = 2.5;
inline constexpr double kImexAdvectiveFraction = 1.0;
inline constexpr double kImexMaxStep = 0.05;

inline StabilityReport stability_report(const FluidState& s, const PhysParams& p) {
  const Grid& g = s.grid();
  const double Tbar = s.T.mean();
  StabilityReport r;
  // The block depends on |xi| only, so one eigen-solve per shell suffices.
  std::map<double, double> shells;
  for (std::size_t i = 0; i < g.spec_size(); ++i) {
    if (!g.is_kept(i) || g.xi2(i) == 0.0) continue;
    if (shells.count(g.xi2(i))) continue;
    Eigen::ComplexEigenSolver<ModeMatrix> es(linear_block(g, i, Tbar, p), false);
    shells[g.xi2(i)] = es.eigenvalues().cwiseAbs().maxCoeff();
  }
  for (const auto& [k2, rho] : shells) r.spectral_radius = std::max(r.spectral_radius, rho);

  double umax = 0.0;
  for (const auto& c : s.u) {
    const auto v = c.to_physical();
    for (double x : v) umax = std::max(umax, std::abs(x));
  }
  const double kmax = g.dealias_cutoff() * g.k0();
  r.advective_rate = umax * kmax * g.dim();
  r.dt_rk4 = kRk4StabilityFraction / (r.spectral_radius + r.advective_rate);
  r.dt_imex = r.advective_rate > 0.0 ? std::min(kImexMaxStep, kImexAdvectiveFraction / r.advective_rate)
                                     : kImexMaxStep;
  return r;
}

}  // namespace qnsp
