#pragma once

// Order-k data known before the order-k system is solved: the density
// n^(k) = lap phi^(k-1), its time derivative, the prescribed divergence
//   D^(k) = -dn^(k)/dt - sum_{i=1..k} div(n^(i) u^(k-i)),
// and the forcings f_{k-1}, g_{k-1}.

#include <string>

#include "qnsp/hierarchy/extraction.hpp"
#include "qnsp/hierarchy/limit.hpp"
#include "qnsp/solver/physics.hpp"

namespace qnsp {

enum class ForcingMethod { automatic, explicit_closed_form, extraction };

/// How the divergence constraint is assembled. `as_printed` differs from
/// `general` only at k = 2, where it uses n^(2) u^(1) in place of n^(1) u^(1).
enum class ConstraintForm { general, as_printed };

inline ForcingMethod forcing_method_from_string(const std::string& s) {
  if (s == "automatic" || s == "auto") return ForcingMethod::automatic;
  if (s == "explicit") return ForcingMethod::explicit_closed_form;
  if (s == "extraction") return ForcingMethod::extraction;
  throw ConfigurationError("unknown forcing method '" + s + "'");
}

inline std::string to_string(ForcingMethod m) {
  switch (m) {
    case ForcingMethod::automatic: return "automatic";
    case ForcingMethod::explicit_closed_form: return "explicit";
    case ForcingMethod::extraction: return "extraction";
  }
  return "unknown";
}

struct OrderData {
  int order = 1;
  SampledSeries<ScalarField> n;   ///< n^(k)
  SampledSeries<ScalarField> dn;  ///< dn^(k)/dt
  SampledSeries<ScalarField> D;   ///< prescribed div u^(k)
};

inline void require_levels(const ProfileSet& ps, int k) {
  if (k < 1) throw UsageError("correction order must be >= 1");
  if (ps.order() < k - 1)
    throw DependencyError("order " + std::to_string(k) + " needs profiles through order " + std::to_string(k - 1) +
                          ", have " + std::to_string(ps.order()));
}

inline OrderData order_constraint(int k, const ProfileSet& ps, ConstraintForm form = ConstraintForm::general,
                                  int derivative_points = kDerivativePoints) {
  require_levels(ps, k);
  const auto& prev = ps.level(k - 1);
  OrderData od;
  od.order = k;
  od.n = SampledSeries<ScalarField>(ps.t0(), ps.spacing());
  od.D = SampledSeries<ScalarField>(ps.t0(), ps.spacing());
  for (std::size_t j = 0; j < ps.samples(); ++j) od.n.push_back(laplacian(prev.phi[j]));
  od.dn = od.n.derivative_series(1, derivative_points);

  for (std::size_t j = 0; j < ps.samples(); ++j) {
    ScalarField D = -od.dn[j];
    // Flux sum over i = 1..k of n^(i) u^(k-i); n^(k) is the new density.
    VectorField flux = dealiased_product(od.n[j], ps.level(0).u[j]);
    for (int i = 1; i < k; ++i) {
      const ScalarField& ni = (form == ConstraintForm::as_printed && k == 2) ? od.n[j] : ps.level(i).n[j];
      flux += dealiased_product(ni, ps.level(k - i).u[j]);
    }
    D -= div(flux);
    od.D.push_back(std::move(D));
  }
  return od;
}

/// Closed-form forcings of the first-order system.
inline ForcingPair forcing_explicit(const ProfileSet& ps, const OrderData& od, const PhysParams& p) {
  if (od.order != 1) throw UsageError("closed-form forcing exists only for k = 1");
  require_levels(ps, 1);
  const auto& L0 = ps.level(0);
  ForcingPair fp;
  fp.order = 1;
  fp.f = SampledSeries<VectorField>(ps.t0(), ps.spacing());
  fp.g = SampledSeries<ScalarField>(ps.t0(), ps.spacing());
  const double h2 = p.hbar * p.hbar;
  for (std::size_t j = 0; j < ps.samples(); ++j) {
    const VectorField& u0 = L0.u[j];
    const ScalarField& T0 = L0.T[j];
    const ScalarField& n1 = od.n[j];  // lap phi0
    const ScalarField& dn1 = od.dn[j];
    const ScalarField adv = advect(u0, n1);  // u0 . grad lap phi0
    const VectorField gn1 = grad(n1);
    const VectorField lap_u0 = laplacian(u0);
    const TensorField S0 = strain(u0);

    VectorField f = dealiased_product(T0, gn1);
    f.axpy(-h2 / 12.0, grad_laplacian(n1));
    f.axpy(p.mu, dealiased_product(n1, lap_u0));
    f.axpy(p.mu + p.lambda, grad(dn1 + adv));

    const ScalarField minus_dt_adv = -dn1 - adv;
    ScalarField g = dealiased_product(T0, minus_dt_adv);
    g *= 2.0 / 3.0;
    g.axpy(2.0 * p.kappa / 3.0, dealiased_product(n1, laplacian(T0)));
    ScalarField quantum = laplacian(minus_dt_adv) + dealiased_dot(gn1, lap_u0);
    g.axpy(h2 / 36.0, quantum);
    g.axpy(2.0 * p.mu / 3.0, dealiased_product(n1, 0.5 * contract(S0, S0)));

    fp.f.push_back(std::move(f));
    fp.g.push_back(std::move(g));
  }
  return fp;
}

/// Forcings of the order-k system from the epsilon^k coefficient of the full
/// momentum and temperature operators evaluated on the known partial sums.
inline ForcingPair forcing_extraction(int k, const ProfileSet& ps, const OrderData& od, const PhysParams& p,
                                      const ExtractionOptions& opt = {}) {
  require_levels(ps, k);
  if (od.order != k) throw UsageError("order data does not match the requested order");
  const TaylorWeights tw = taylor_weights(extraction_nodes(k, opt), k, opt.max_condition);
  const auto& L0 = ps.level(0);
  const Grid& g = ps.grid;
  ForcingPair fp;
  fp.order = k;
  fp.f = SampledSeries<VectorField>(ps.t0(), ps.spacing());
  fp.g = SampledSeries<ScalarField>(ps.t0(), ps.spacing());

  for (std::size_t j = 0; j < ps.samples(); ++j) {
    VectorField M = VectorField::zeros(g);
    ScalarField E = ScalarField::zeros(g);
    for (std::size_t q = 0; q < tw.nodes.size(); ++q) {
      const double e = tw.nodes[q];
      ScalarField n = ScalarField::constant(g, 1.0);
      VectorField u = VectorField::zeros(g);
      ScalarField T = ScalarField::zeros(g);
      ScalarField phi = ScalarField::zeros(g);
      double ei = 1.0;
      for (int i = 0; i <= k; ++i) {
        if (i >= 1) n.axpy(ei, i == k ? od.n[j] : ps.level(i).n[j]);
        if (i < k) {
          u.axpy(ei, ps.level(i).u[j]);
          T.axpy(ei, ps.level(i).T[j]);
          phi.axpy(ei, ps.level(i).phi[j]);
        }
        ei *= e;
      }
      M.axpy(tw.weights[q], momentum_operator(n, u, T, phi, p));
      E.axpy(tw.weights[q], temperature_operator(n, u, T, p));
    }
    VectorField f = -M;
    f.axpy(-(p.mu + p.lambda), grad(od.D[j]));
    ScalarField gk = -E;
    gk.axpy(2.0 / 3.0, dealiased_product(L0.T[j], od.D[j]));
    gk.axpy(p.hbar * p.hbar / 36.0, laplacian(od.D[j]));
    fp.f.push_back(std::move(f));
    fp.g.push_back(std::move(gk));
  }
  return fp;
}

inline ForcingPair correction_forcing(int k, const ProfileSet& ps, const OrderData& od, const PhysParams& p,
                                      ForcingMethod method = ForcingMethod::automatic,
                                      const ExtractionOptions& opt = {}) {
  if (method == ForcingMethod::automatic)
    method = k == 1 ? ForcingMethod::explicit_closed_form : ForcingMethod::extraction;
  if (method == ForcingMethod::explicit_closed_form) {
    if (k != 1) throw UsageError("closed-form forcing exists only for k = 1");
    return forcing_explicit(ps, od, p);
  }
  return forcing_extraction(k, ps, od, p, opt);
}

inline ForcingPair correction_forcing(int k, const ProfileSet& ps, const PhysParams& p,
                                      ForcingMethod method = ForcingMethod::automatic,
                                      const ExtractionOptions& opt = {}) {
  return correction_forcing(k, ps, order_constraint(k, ps), p, method, opt);
}

}  // namespace qnsp
