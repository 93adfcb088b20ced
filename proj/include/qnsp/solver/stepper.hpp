#pragma once

#include <cmath>
#include <vector>

#include "qnsp/solver/linear_block.hpp"
#include "qnsp/solver/physics.hpp"

namespace qnsp {

struct StepOptions {
  double density_floor = 0.25;
  double density_ceiling = 2.5;
};

/// Dealias, refresh phi and check the density window. The mean of n is left
/// untouched: the continuity update never changes the zero mode.
inline FluidState finalize_state(FluidState s, const PhysParams& p, const StepOptions& opt = {}) {
  s.n.dealias();
  s.u.dealias();
  s.T.dealias();
  if (!s.n.is_finite() || !s.u.is_finite() || !s.T.is_finite())
    throw NumericalError("non-finite value in state", s.t);
  const double lo = min_value(s.n);
  const double hi = max_value(s.n);
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw NumericalError("non-finite density", s.t);
  if (lo <= opt.density_floor || hi >= opt.density_ceiling) throw BlowUpError(s.t, lo, hi);
  s.phi = poisson_solve(s.n, p.epsilon);
  return s;
}

namespace detail {

inline FluidState advance(const FluidState& s, double h, const Tendencies& k) {
  FluidState out = s;
  out.n.axpy(h, k.dn);
  out.u.axpy(h, k.du);
  out.T.axpy(h, k.dT);
  return out;
}

// Stage evaluations see the density window as a blow-up rather than a domain error.
inline Tendencies stage_rhs(const FluidState& s, const PhysParams& p) {
  try {
    return qnsp_rhs(s, p);
  } catch (const DomainError&) {
    throw BlowUpError(s.t, min_value(s.n), max_value(s.n));
  }
}

inline FluidState rk4_step(const FluidState& s, double dt, const PhysParams& p) {
  const Tendencies k1 = stage_rhs(s, p);
  const Tendencies k2 = stage_rhs(advance(s, 0.5 * dt, k1), p);
  const Tendencies k3 = stage_rhs(advance(s, 0.5 * dt, k2), p);
  const Tendencies k4 = stage_rhs(advance(s, dt, k3), p);
  FluidState out = s;
  out.n.axpy(dt / 6.0, k1.dn).axpy(dt / 3.0, k2.dn).axpy(dt / 3.0, k3.dn).axpy(dt / 6.0, k4.dn);
  out.u.axpy(dt / 6.0, k1.du).axpy(dt / 3.0, k2.du).axpy(dt / 3.0, k3.du).axpy(dt / 6.0, k4.du);
  out.T.axpy(dt / 6.0, k1.dT).axpy(dt / 3.0, k2.dT).axpy(dt / 3.0, k3.dT).axpy(dt / 6.0, k4.dT);
  out.t = s.t + dt;
  return out;
}

// Spectral coefficients of (n, u, T) gathered per mode.
struct ModeStack {
  std::vector<ModeVector> x;
};

inline ModeStack pack(const ScalarField& n, const VectorField& u, const ScalarField& T) {
  const Grid& g = n.grid();
  const int d = g.dim();
  ModeStack st;
  st.x.assign(g.spec_size(), ModeVector::Zero(d + 2));
  for (std::size_t i = 0; i < g.spec_size(); ++i) {
    auto& v = st.x[i];
    v(0) = n[i];
    for (int a = 0; a < d; ++a) v(1 + a) = u[a][i];
    v(d + 1) = T[i];
  }
  return st;
}

inline void unpack(const ModeStack& st, FluidState& s) {
  const int d = s.grid().dim();
  for (std::size_t i = 0; i < st.x.size(); ++i) {
    s.n[i] = st.x[i](0);
    for (int a = 0; a < d; ++a) s.u[a][i] = st.x[i](1 + a);
    s.T[i] = st.x[i](d + 1);
  }
}

// Crank-Nicolson on the frozen linear block, explicit trapezoidal
// predictor-corrector on the residual F(x) - A x.
inline FluidState imex_cn_step(const FluidState& s, double dt, const PhysParams& p) {
  const Grid& g = s.grid();
  const std::size_t M = g.spec_size();
  const int m = g.dim() + 2;
  const double Tbar = s.T.mean();

  std::vector<ModeMatrix> A(M), implicit_inv(M);
  const ModeMatrix Id = ModeMatrix::Identity(m, m);
  for (std::size_t i = 0; i < M; ++i) {
    if (!g.is_kept(i)) continue;
    A[i] = linear_block(g, i, Tbar, p);
    implicit_inv[i] = (Id - 0.5 * dt * A[i]).inverse();
  }

  const ModeStack x0 = pack(s.n, s.u, s.T);
  const Tendencies F0 = stage_rhs(s, p);
  const ModeStack f0 = pack(F0.dn, F0.du, F0.dT);

  // Explicit part evaluated at the old level, reused by both solves.
  std::vector<ModeVector> base(M);
  ModeStack pred;
  pred.x.assign(M, ModeVector::Zero(m));
  for (std::size_t i = 0; i < M; ++i) {
    if (!g.is_kept(i)) continue;
    const ModeVector ax = A[i] * x0.x[i];
    base[i] = x0.x[i] + 0.5 * dt * ax + 0.5 * dt * (f0.x[i] - ax);
    pred.x[i] = implicit_inv[i] * (base[i] + 0.5 * dt * (f0.x[i] - ax));
  }
  FluidState star = s;
  unpack(pred, star);
  star.t = s.t + dt;
  const Tendencies F1 = stage_rhs(star, p);
  const ModeStack f1 = pack(F1.dn, F1.du, F1.dT);

  ModeStack corr;
  corr.x.assign(M, ModeVector::Zero(m));
  for (std::size_t i = 0; i < M; ++i) {
    if (!g.is_kept(i)) continue;
    const ModeVector residual1 = f1.x[i] - A[i] * pred.x[i];
    corr.x[i] = implicit_inv[i] * (base[i] + 0.5 * dt * residual1);
  }
  FluidState out = s;
  unpack(corr, out);
  out.t = s.t + dt;
  return out;
}

}  // namespace detail

/// Advance one step. The returned state has a refreshed potential.
inline FluidState step(const FluidState& s, double dt, const PhysParams& p, Scheme scheme,
                       const StepOptions& opt = {}) {
  if (!(dt > 0.0)) throw UsageError("time step must be positive");
  FluidState next = scheme == Scheme::rk4_explicit ? detail::rk4_step(s, dt, p) : detail::imex_cn_step(s, dt, p);
  return finalize_state(std::move(next), p, opt);
}

}  // namespace qnsp
