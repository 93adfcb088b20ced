#pragma once

// Incompressible limit system:
//   div u0 = 0,
//   du0/dt = P(-u0.grad u0) + mu lap u0,
//   dT0/dt = -u0.grad T0 + (2 kappa/3) lap T0 + (mu/3)|grad u0 + grad u0^T|^2,
// with phi0 = T0 - mean(T0) + lap^{-1} div(u0.grad u0) recovered at each sample.

#include <cmath>
#include <string>

#include "qnsp/hierarchy/profile_set.hpp"
#include "qnsp/log.hpp"
#include "qnsp/spectral/norms.hpp"

namespace qnsp {

/// Sampling and stepping controls shared by all orders of the hierarchy.
struct HierarchyOptions {
  int samples = 250;           ///< sample intervals over [0, tau]
  int substeps = 1;            ///< RK4 steps per sample interval
  int derivative_points = kDerivativePoints;
};

/// The potential of the limit system, from the divergence of its momentum equation.
inline ScalarField pressure_poisson(const VectorField& u0, const ScalarField& T0, const PhysParams& = {}) {
  ScalarField src = div(advect(u0, u0));
  src.set_mean(0.0);
  ScalarField phi = inverse_laplacian(src);
  phi += T0;
  phi.set_mean(0.0);
  return phi;
}

namespace detail {

struct LimitRhs {
  VectorField du;
  ScalarField dT;
};

inline LimitRhs limit_rhs(const VectorField& u, const ScalarField& T, const PhysParams& p) {
  VectorField du = leray_project(-advect(u, u));
  du.axpy(p.mu, laplacian(u));
  ScalarField dT = -advect(u, T);
  dT.axpy(2.0 * p.kappa / 3.0, laplacian(T));
  const TensorField S = strain(u);
  dT.axpy(p.mu / 3.0, contract(S, S));
  return {std::move(du), std::move(dT)};
}

}  // namespace detail

/// Solve the limit system on [0, tau] and store (u0, T0, phi0) at
/// `opt.samples + 1` uniform times.
inline ProfileLevel integrate_limit(VectorField u0, ScalarField T0, double tau, const PhysParams& p,
                                    const HierarchyOptions& opt = {}) {
  p.validate(false);
  if (!(tau > 0.0)) throw UsageError("horizon must be positive");
  if (opt.samples < 1 || opt.substeps < 1) throw ConfigurationError("samples and substeps must be positive");
  if (!(T0.mean() > 0.0)) throw ConfigurationError("initial temperature must have positive mean");
  const double dv = l2_norm(div(u0));
  if (dv > 1e-10 * std::max(1.0, l2_norm(u0))) {
    log_warning("limit initial velocity is not divergence-free (|div u| = " + std::to_string(dv) +
                "); projecting");
    u0 = leray_project(u0);
  }
  u0.dealias();
  T0.dealias();

  const double h = tau / opt.samples;
  const double dt = h / opt.substeps;
  const Grid& g = T0.grid();
  ProfileLevel lvl;
  lvl.order = 0;
  lvl.n = SampledSeries<ScalarField>(0.0, h);
  lvl.u = SampledSeries<VectorField>(0.0, h);
  lvl.T = SampledSeries<ScalarField>(0.0, h);
  lvl.phi = SampledSeries<ScalarField>(0.0, h);
  lvl.divergence = SampledSeries<ScalarField>(0.0, h);

  auto store = [&](const VectorField& u, const ScalarField& T, double t) {
    if (!u.is_finite() || !T.is_finite()) throw NumericalError("non-finite limit profile", t);
    lvl.n.push_back(ScalarField::zeros(g));
    lvl.u.push_back(u);
    lvl.T.push_back(T);
    lvl.phi.push_back(pressure_poisson(u, T, p));
    lvl.divergence.push_back(ScalarField::zeros(g));
  };

  VectorField u = u0;
  ScalarField T = T0;
  store(u, T, 0.0);
  for (int j = 0; j < opt.samples; ++j) {
    for (int s = 0; s < opt.substeps; ++s) {
      const auto k1 = detail::limit_rhs(u, T, p);
      const auto k2 = detail::limit_rhs(u + (0.5 * dt) * k1.du, T + (0.5 * dt) * k1.dT, p);
      const auto k3 = detail::limit_rhs(u + (0.5 * dt) * k2.du, T + (0.5 * dt) * k2.dT, p);
      const auto k4 = detail::limit_rhs(u + dt * k3.du, T + dt * k3.dT, p);
      u.axpy(dt / 6.0, k1.du).axpy(dt / 3.0, k2.du).axpy(dt / 3.0, k3.du).axpy(dt / 6.0, k4.du);
      T.axpy(dt / 6.0, k1.dT).axpy(dt / 3.0, k2.dT).axpy(dt / 3.0, k3.dT).axpy(dt / 6.0, k4.dT);
    }
    store(u, T, (j + 1) * h);
  }
  return lvl;
}

}  // namespace qnsp
