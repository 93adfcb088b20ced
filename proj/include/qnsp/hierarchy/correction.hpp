#pragma once

// Order-k correction system, k >= 1. The velocity splits into a
// divergence-free part w, evolved by
//   dw/dt = P[-u0.grad u - u.grad u0 + mu lap u - f],
// and the gradient part grad lap^{-1} D^(k) fixed by the constraint. The
// temperature obeys
//   dT/dt = -u.grad T0 - u0.grad T + (2 kappa/3) lap T + (2 mu/3) S0 : S(u) - g,
// and the potential is the Lagrange multiplier of the momentum equation:
//   lap phi = dD/dt + div(u0.grad u + u.grad u0) + lap T - mu lap D + div f.

#include <optional>
#include <string>

#include "qnsp/hierarchy/forcing.hpp"

namespace qnsp {

struct CorrectionInit {
  VectorField u;
  ScalarField T;
};

namespace detail {

struct CorrectionCoeffs {
  VectorField u0;
  ScalarField T0;
  TensorField S0;
  VectorField grad_part;
  VectorField f;
  ScalarField g;
};

struct CorrectionRhs {
  VectorField dw;
  ScalarField dT;
};

inline CorrectionRhs correction_rhs(const VectorField& w, const ScalarField& T, const CorrectionCoeffs& c,
                                    const PhysParams& p) {
  const VectorField u = w + c.grad_part;
  VectorField mom = -advect(c.u0, u);
  mom -= advect(u, c.u0);
  mom.axpy(p.mu, laplacian(u));
  mom -= c.f;
  ScalarField dT = -advect(u, c.T0);
  dT -= advect(c.u0, T);
  dT.axpy(2.0 * p.kappa / 3.0, laplacian(T));
  dT.axpy(2.0 * p.mu / 3.0, contract(c.S0, strain(u)));
  dT -= c.g;
  return {leray_project(mom), std::move(dT)};
}

}  // namespace detail

inline ProfileLevel integrate_correction(int k, const ProfileSet& ps, const OrderData& od, const ForcingPair& fp,
                                         const PhysParams& p, const HierarchyOptions& opt = {},
                                         const std::optional<CorrectionInit>& init = std::nullopt) {
  require_levels(ps, k);
  if (od.order != k || fp.order != k) throw UsageError("order data and forcing must belong to order k");
  if (od.D.size() != ps.samples() || fp.f.size() != ps.samples())
    throw UsageError("order data and forcing must be sampled like the profiles");
  const auto& L0 = ps.level(0);
  const Grid& g = ps.grid;
  const double h = ps.spacing();
  const int sub = std::max(1, opt.substeps);
  const double dt = h / sub;

  auto coeffs_at = [&](double t) {
    detail::CorrectionCoeffs c;
    c.u0 = L0.u.at(t);
    c.T0 = L0.T.at(t);
    c.S0 = strain(c.u0);
    c.grad_part = grad(inverse_laplacian(od.D.at(t)));
    c.f = fp.f.at(t);
    c.g = fp.g.at(t);
    return c;
  };

  VectorField w = VectorField::zeros(g);
  ScalarField T = ScalarField::zeros(g);
  if (init) {
    const ScalarField mismatch = div(init->u) - od.D[0];
    if (l2_norm(mismatch) > 1e-8 * std::max(1.0, l2_norm(od.D[0])))
      log_warning("order-" + std::to_string(k) + " initial velocity violates the divergence constraint; projecting");
    w = leray_project(init->u);
    T = init->T;
    w.dealias();
    T.dealias();
  }

  const SampledSeries<ScalarField> dD = od.D.derivative_series(1, opt.derivative_points);

  ProfileLevel lvl;
  lvl.order = k;
  lvl.n = od.n;
  lvl.divergence = od.D;
  lvl.u = SampledSeries<VectorField>(ps.t0(), h);
  lvl.T = SampledSeries<ScalarField>(ps.t0(), h);
  lvl.phi = SampledSeries<ScalarField>(ps.t0(), h);

  auto store = [&](std::size_t j) {
    if (!w.is_finite() || !T.is_finite()) throw NumericalError("non-finite correction profile", ps.time(j));
    const VectorField u = w + grad(inverse_laplacian(od.D[j]));
    const VectorField& u0 = L0.u[j];
    ScalarField lap_phi = dD[j];
    lap_phi += div(advect(u0, u) + advect(u, u0));
    lap_phi += laplacian(T);
    lap_phi.axpy(-p.mu, laplacian(od.D[j]));
    lap_phi += div(fp.f[j]);
    lap_phi.set_mean(0.0);
    lvl.u.push_back(u);
    lvl.T.push_back(T);
    lvl.phi.push_back(inverse_laplacian(lap_phi));
  };

  store(0);
  detail::CorrectionCoeffs c_start = coeffs_at(ps.time(0));
  for (std::size_t j = 0; j + 1 < ps.samples(); ++j) {
    for (int s = 0; s < sub; ++s) {
      const double t = ps.time(j) + s * dt;
      const detail::CorrectionCoeffs c_mid = coeffs_at(t + 0.5 * dt);
      detail::CorrectionCoeffs c_end = coeffs_at(t + dt);
      const auto k1 = detail::correction_rhs(w, T, c_start, p);
      const auto k2 = detail::correction_rhs(w + (0.5 * dt) * k1.dw, T + (0.5 * dt) * k1.dT, c_mid, p);
      const auto k3 = detail::correction_rhs(w + (0.5 * dt) * k2.dw, T + (0.5 * dt) * k2.dT, c_mid, p);
      const auto k4 = detail::correction_rhs(w + dt * k3.dw, T + dt * k3.dT, c_end, p);
      w.axpy(dt / 6.0, k1.dw).axpy(dt / 3.0, k2.dw).axpy(dt / 3.0, k3.dw).axpy(dt / 6.0, k4.dw);
      T.axpy(dt / 6.0, k1.dT).axpy(dt / 3.0, k2.dT).axpy(dt / 3.0, k3.dT).axpy(dt / 6.0, k4.dT);
      c_start = std::move(c_end);
    }
    store(j + 1);
  }
  return lvl;
}

/// Hierarchy construction settings.
struct BuildOptions {
  HierarchyOptions hierarchy;
  ForcingMethod method = ForcingMethod::automatic;
  ExtractionOptions extraction;
  ConstraintForm constraint = ConstraintForm::general;
};

/// Limit profiles plus corrections through order p.order.
inline ProfileSet build_profiles(const VectorField& u0, const ScalarField& T0, double tau, const PhysParams& p,
                                 const BuildOptions& opt = {}) {
  p.validate(false);
  ProfileSet ps;
  ps.grid = T0.grid();
  ps.params = p;
  ps.levels.push_back(integrate_limit(u0, T0, tau, p, opt.hierarchy));
  for (int k = 1; k <= p.order; ++k) {
    const OrderData od = order_constraint(k, ps, opt.constraint, opt.hierarchy.derivative_points);
    const ForcingPair fp = correction_forcing(k, ps, od, p, opt.method, opt.extraction);
    ps.levels.push_back(integrate_correction(k, ps, od, fp, p, opt.hierarchy));
  }
  return ps;
}

}  // namespace qnsp
