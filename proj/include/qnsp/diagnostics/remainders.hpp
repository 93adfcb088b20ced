#pragma once

// Remainders of a full solution against the order-N composed profile and
// the residuals of the two remainder identities that are fully explicit:
//   (P)  sqrt(eps) lap Phi_R = -eps lap phi^(N) + N_R,
//   (C)  dN_R/dt + u.grad N_R + n div U_R
//          = -eps U_R.grad n~ - eps div(u~) N_R - eps R1,
// with R1 = sum_{1<=a,b<=N, a+b>=N+1} eps^(a+b-N-1) div(n^(a) u^(b)).

#include <cmath>
#include <vector>

#include "qnsp/hierarchy/compose.hpp"
#include "qnsp/remainder_set.hpp"
#include "qnsp/spectral/norms.hpp"
#include "qnsp/spectral/operators.hpp"

namespace qnsp {

inline RemainderSet compute_remainders(const FluidState& full, const ProfileSet& ps, double eps, int order = -1) {
  if (!(eps > 0.0)) throw UsageError("remainders need a positive epsilon");
  const int N = resolve_order(ps, order);
  if (!(full.grid() == ps.grid)) throw UsageError("state and profiles live on different grids");
  const FluidState prof = compose_profile(ps, eps, full.t, N);
  const double inv = std::pow(eps, -N);
  RemainderSet r;
  r.t = full.t;
  r.epsilon = eps;
  r.order = N;
  r.N_R = inv * (full.n - prof.n);
  r.U_R = inv * (full.u - prof.u);
  r.T_R = inv * (full.T - prof.T);
  r.Phi_R = (inv * std::sqrt(eps)) * (full.phi - prof.phi);
  return r;
}

/// Normalised L2 residual of (P).
inline double potential_residual(const RemainderSet& r, const ScalarField& phi_N, double eps) {
  ScalarField res = std::sqrt(eps) * laplacian(r.Phi_R);
  res.axpy(eps, laplacian(phi_N));
  res -= r.N_R;
  return l2_norm(res) / std::max(l2_norm(r.N_R), eps);
}

inline double potential_residual(const RemainderSet& r, const ProfileSet& ps) {
  const int N = resolve_order(ps, r.order);
  return potential_residual(r, ps.level(N).phi.at(r.t), r.epsilon);
}

/// The source R1 of (C) at time t.
inline ScalarField continuity_source(const ProfileSet& ps, double eps, double t, int order) {
  const int N = resolve_order(ps, order);
  VectorField flux = VectorField::zeros(ps.grid);
  for (int a = 1; a <= N; ++a)
    for (int b = 1; b <= N; ++b) {
      if (a + b < N + 1) continue;
      flux.axpy(std::pow(eps, a + b - N - 1), dealiased_product(ps.level(a).n.at(t), ps.level(b).u.at(t)));
    }
  return div(flux);
}

struct ResidualPoint {
  double t = 0.0;
  double residual = 0.0;
};

/// L2 residual of (C) at the interior samples of a uniformly spaced remainder
/// series, with the time derivative taken by centred differences.
inline std::vector<ResidualPoint> continuity_residual(const std::vector<RemainderSet>& rs, const ProfileSet& ps) {
  if (rs.size() < 3) throw UsageError("continuity residual needs at least three samples");
  const double h = rs[1].t - rs[0].t;
  if (!(h > 0.0)) throw UsageError("remainder samples must increase in time");
  for (std::size_t j = 1; j < rs.size(); ++j)
    if (std::abs((rs[j].t - rs[j - 1].t) - h) > 1e-9 * h)
      throw UsageError("remainder samples must be uniformly spaced");
  const double eps = rs[0].epsilon;
  const int N = resolve_order(ps, rs[0].order);
  const double eN = std::pow(eps, N);

  std::vector<ResidualPoint> out;
  for (std::size_t j = 1; j + 1 < rs.size(); ++j) {
    const RemainderSet& r = rs[j];
    const double t = r.t;
    const FluidState prof = compose_profile(ps, eps, t, N);
    ScalarField n = prof.n;
    n.axpy(eN, r.N_R);
    VectorField u = prof.u;
    u.axpy(eN, r.U_R);
    // n~ = (n_p - 1)/eps, u~ = (u_p - u0)/eps
    ScalarField ntilde = prof.n - ScalarField::constant(ps.grid, 1.0);
    ntilde *= 1.0 / eps;
    VectorField utilde = prof.u - ps.level(0).u.at(t);
    utilde *= 1.0 / eps;

    ScalarField res = (1.0 / (2.0 * h)) * (rs[j + 1].N_R - rs[j - 1].N_R);
    res += advect(u, r.N_R);
    res += dealiased_product(n, div(r.U_R));
    res.axpy(eps, advect(r.U_R, ntilde));
    res.axpy(eps, dealiased_product(div(utilde), r.N_R));
    res.axpy(eps, continuity_source(ps, eps, t, N));
    out.push_back({t, l2_norm(res)});
  }
  return out;
}

}  // namespace qnsp
