#pragma once

// Right-hand sides of the quantum Navier-Stokes-Poisson system in primitive
// variables on the periodic torus:
//
//   dn/dt = -div(n u)
//   du/dt = -u.grad u - grad(nT)/n + (hbar^2/12n) div(n grad grad log n) + grad phi
//           + (mu lap u + (mu+lambda) grad div u)/n
//   dT/dt = -u.grad T - (2/3) T div u + (2/3n) div(kappa grad T)
//           - (hbar^2/36n) div(n lap u) + (2/3n)[(mu/2)|grad u + grad u^T|^2 + lambda (div u)^2]
//   eps lap phi = n - 1
//
// Every nonlinear term is a nested chain of dealiased binary products.

#include <algorithm>
#include <cmath>
#include <string>

#include "qnsp/errors.hpp"
#include "qnsp/solver/params.hpp"
#include "qnsp/spectral/operators.hpp"

namespace qnsp {

/// Mean-zero potential with eps lap(phi) = n - 1.
inline ScalarField poisson_solve(const ScalarField& n, double epsilon) {
  if (!(epsilon > 0.0)) throw UsageError("epsilon must be positive");
  if (std::abs(n.mean() - 1.0) > 1.0e-12)
    throw SolvabilityError("Poisson source n - 1 is not mean-zero", n.mean() - 1.0);
  ScalarField src = n;
  src.set_mean(0.0);
  ScalarField phi = inverse_laplacian(src);
  phi *= 1.0 / epsilon;
  return phi;
}

enum class BohmForm { log_hessian, expanded };

namespace detail {

inline void require_positive_density(const ScalarField& n) {
  const auto v = masked_physical(n);
  const double m = *std::min_element(v.begin(), v.end());
  if (!(m > 0.0)) throw DomainError("density must be positive (min n = " + std::to_string(m) + ")");
}

inline ScalarField reciprocal(const ScalarField& n) {
  return apply_pointwise(n, [](double x) { return 1.0 / x; });
}

inline VectorField bohm_log_hessian(const ScalarField& n, const ScalarField& inv_n, double hbar) {
  const int d = n.grid().dim();
  const ScalarField logn = apply_pointwise(n, [](double x) { return std::log(x); });
  const TensorField H = hessian(logn);
  VectorField divergence = VectorField::zeros(n.grid());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) divergence[j] += partial(dealiased_product(n, H(i, j)), i);
  VectorField out = dealiased_product(inv_n, divergence);
  out *= hbar * hbar / 12.0;
  return out;
}

// (1/n)(1/3)(-n grad Q), with
// -n grad Q = (h^2/4) lap grad n - (h^2/4){(lap n grad n + grad n . grad grad n)/n
//             - (grad n . grad n) grad n / n^2}.
inline VectorField bohm_expanded(const ScalarField& n, const ScalarField& inv_n, double hbar) {
  const VectorField gn = grad(n);
  const ScalarField ln = laplacian(n);
  const TensorField Hn = hessian(n);
  VectorField curvature = dealiased_product(ln, gn) + contract_first(Hn, gn);
  const VectorField first = dealiased_product(inv_n, curvature);
  const ScalarField gn2 = dealiased_dot(gn, gn);
  const ScalarField inv_n2 = dealiased_product(inv_n, inv_n);
  const VectorField second = dealiased_product(inv_n2, dealiased_product(gn2, gn));
  VectorField minus_n_grad_q = grad_laplacian(n) - first + second;
  minus_n_grad_q *= hbar * hbar / 4.0;
  VectorField out = dealiased_product(inv_n, minus_n_grad_q);
  out *= 1.0 / 3.0;
  return out;
}

}  // namespace detail

/// Quantum (Bohm) acceleration (hbar^2/12n) div(n grad grad log n), in either
/// the log-Hessian form or the equivalent expanded Bohm-potential form.
inline VectorField bohm_force(const ScalarField& n, double hbar, BohmForm form = BohmForm::log_hessian) {
  if (!(hbar >= 0.0)) throw UsageError("hbar must be non-negative");
  detail::require_positive_density(n);
  if (hbar == 0.0) return VectorField::zeros(n.grid());
  const ScalarField inv_n = detail::reciprocal(n);
  return form == BohmForm::log_hessian ? detail::bohm_log_hessian(n, inv_n, hbar)
                                       : detail::bohm_expanded(n, inv_n, hbar);
}

/// Continuity tendency -div(n u).
inline ScalarField continuity_operator(const ScalarField& n, const VectorField& u) {
  return -div(dealiased_product(n, u));
}

/// Momentum tendency with the potential supplied by the caller (it is not
/// recomputed from n here, so the operator can be evaluated on profile sums).
inline VectorField momentum_operator(const ScalarField& n, const VectorField& u, const ScalarField& T,
                                     const ScalarField& phi, const PhysParams& p) {
  detail::require_positive_density(n);
  const ScalarField inv_n = detail::reciprocal(n);

  VectorField out = -advect(u, u);
  out -= dealiased_product(inv_n, grad(dealiased_product(n, T)));
  if (p.hbar > 0.0) out += detail::bohm_log_hessian(n, inv_n, p.hbar);
  out += grad(phi);
  VectorField viscous = laplacian(u);
  viscous *= p.mu;
  viscous.axpy(p.mu + p.lambda, grad(div(u)));
  out += dealiased_product(inv_n, viscous);
  return out;
}

/// Temperature tendency.
inline ScalarField temperature_operator(const ScalarField& n, const VectorField& u, const ScalarField& T,
                                        const PhysParams& p) {
  detail::require_positive_density(n);
  const ScalarField inv_n = detail::reciprocal(n);
  const ScalarField divu = div(u);

  ScalarField out = -advect(u, T);
  out.axpy(-2.0 / 3.0, dealiased_product(T, divu));

  // Terms carrying 1/n are gathered and multiplied once.
  ScalarField over_n = laplacian(T);
  over_n *= 2.0 * p.kappa / 3.0;
  if (p.hbar > 0.0)
    over_n.axpy(-p.hbar * p.hbar / 36.0, div(dealiased_product(n, laplacian(u))));
  const TensorField S = strain(u);
  ScalarField heating = contract(S, S);
  heating *= p.mu / 2.0;
  heating.axpy(p.lambda, dealiased_product(divu, divu));
  over_n.axpy(2.0 / 3.0, heating);
  out += dealiased_product(inv_n, over_n);
  return out;
}

/// Full right-hand side; the potential is refreshed from n before use.
inline Tendencies qnsp_rhs(const FluidState& s, const PhysParams& p) {
  const ScalarField phi = poisson_solve(s.n, p.epsilon);
  return {continuity_operator(s.n, s.u), momentum_operator(s.n, s.u, s.T, phi, p),
          temperature_operator(s.n, s.u, s.T, p)};
}

}  // namespace qnsp
