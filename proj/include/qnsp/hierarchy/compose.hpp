#pragma once

// Composed profile sums
//   n = 1 + sum_{k=1..N} eps^k n^(k),  u = sum_{k=0..N} eps^k u^(k),
// and likewise for T and phi, plus well-prepared initial data.

#include <cmath>

#include "qnsp/hierarchy/profile_set.hpp"
#include "qnsp/remainder_set.hpp"
#include "qnsp/solver/params.hpp"

namespace qnsp {

/// Order used by composition when none is given: every stored level.
inline int resolve_order(const ProfileSet& ps, int order) {
  if (order < 0) return ps.order();
  if (order > ps.order())
    throw DependencyError("composition to order " + std::to_string(order) + " needs profiles that are not computed");
  return order;
}

/// Profile sum of orders 0..order at time t (interpolated between samples).
inline FluidState compose_profile(const ProfileSet& ps, double eps, double t, int order = -1) {
  if (ps.empty()) throw DependencyError("no profiles to compose");
  const int N = resolve_order(ps, order);
  const auto& L0 = ps.level(0);
  FluidState s;
  s.t = t;
  s.n = ScalarField::constant(ps.grid, 1.0);
  s.u = L0.u.at(t);
  s.T = L0.T.at(t);
  s.phi = L0.phi.at(t);
  double ek = 1.0;
  for (int k = 1; k <= N; ++k) {
    ek *= eps;
    if (ek == 0.0) break;
    const auto& L = ps.level(k);
    s.n.axpy(ek, L.n.at(t));
    s.u.axpy(ek, L.u.at(t));
    s.T.axpy(ek, L.T.at(t));
    s.phi.axpy(ek, L.phi.at(t));
  }
  s.n.set_mean(1.0);
  return s;
}

/// Profile sum at the first sample plus eps^N times the planted remainder.
inline FluidState compose_initial_data(const ProfileSet& ps, double eps, const RemainderSet* remainder0 = nullptr,
                                       int order = -1) {
  const int N = resolve_order(ps, order);
  FluidState s = compose_profile(ps, eps, ps.t0(), N);
  if (!remainder0) return s;
  const RemainderSet& r = *remainder0;
  if (!(r.N_R.grid() == ps.grid) || !(r.U_R.grid() == ps.grid))
    throw UsageError("remainder grid does not match the profile grid");
  if (!(eps > 0.0)) throw UsageError("planted remainders need a positive epsilon");
  const double eN = std::pow(eps, N);
  s.n.axpy(eN, r.N_R);
  s.u.axpy(eN, r.U_R);
  s.T.axpy(eN, r.T_R);
  s.phi.axpy(eN / std::sqrt(eps), r.Phi_R);
  return s;
}

}  // namespace qnsp
