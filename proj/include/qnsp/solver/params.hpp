#pragma once

#include <string>

#include "qnsp/errors.hpp"
#include "qnsp/spectral/field.hpp"

namespace qnsp {

/// Physical constants of the quantum Navier-Stokes-Poisson system.
struct PhysParams {
  double epsilon = 1.0;  ///< scaled squared Debye length
  double hbar = 0.0;     ///< Planck constant
  double mu = 0.1;       ///< shear viscosity
  double lambda = 0.0;   ///< second viscosity
  double kappa = 0.0;    ///< heat conductivity
  int order = 1;         ///< expansion order N

  /// `need_epsilon` is false for the epsilon-independent profile systems.
  void validate(bool need_epsilon = true) const {
    if (need_epsilon && !(epsilon > 0.0)) throw ConfigurationError("epsilon must be positive");
    if (!(hbar >= 0.0)) throw ConfigurationError("hbar must be non-negative");
    if (!(mu > 0.0)) throw ConfigurationError("mu must be positive");
    if (!(2.0 * mu + 3.0 * lambda >= 0.0)) throw ConfigurationError("need 2 mu + 3 lambda >= 0");
    if (!(kappa >= 0.0)) throw ConfigurationError("kappa must be non-negative");
    if (order < 1) throw ConfigurationError("expansion order must be at least 1");
  }
};

/// One time slice (n, u, T, phi) of the full system.
struct FluidState {
  double t = 0.0;
  ScalarField n;
  VectorField u;
  ScalarField T;
  ScalarField phi;

  const Grid& grid() const { return n.grid(); }
};

/// Time derivatives of the prognostic variables.
struct Tendencies {
  ScalarField dn;
  VectorField du;
  ScalarField dT;
};

enum class Scheme { rk4_explicit, imex_cn };

inline std::string to_string(Scheme s) { return s == Scheme::rk4_explicit ? "rk4_explicit" : "imex_cn"; }

inline Scheme scheme_from_string(const std::string& s) {
  if (s == "rk4_explicit" || s == "rk4") return Scheme::rk4_explicit;
  if (s == "imex_cn" || s == "imex") return Scheme::imex_cn;
  throw ConfigurationError("unknown time scheme '" + s + "'");
}

}  // namespace qnsp
