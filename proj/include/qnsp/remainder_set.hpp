#pragma once

#include "qnsp/spectral/field.hpp"

namespace qnsp {

/// Scaled deviation of a full solution from the order-N composed profile:
///   n = 1 + eps*n~ + eps^N N_R,  u = u0 + eps*u~ + eps^N U_R,
///   T = T0 + eps*T~ + eps^N T_R,  phi = phi0 + eps*phi~ + eps^N phi_R,
/// with Phi_R = sqrt(eps) * phi_R.
struct RemainderSet {
  double t = 0.0;
  ScalarField N_R;
  VectorField U_R;
  ScalarField T_R;
  ScalarField Phi_R;
  double epsilon = 0.0;
  int order = 0;

  static RemainderSet zeros(const Grid& grid, double epsilon = 0.0, int order = 0) {
    return {0.0, ScalarField::zeros(grid), VectorField::zeros(grid), ScalarField::zeros(grid),
            ScalarField::zeros(grid), epsilon, order};
  }

  RemainderSet& operator*=(double s) {
    N_R *= s;
    U_R *= s;
    T_R *= s;
    Phi_R *= s;
    return *this;
  }
};

}  // namespace qnsp
