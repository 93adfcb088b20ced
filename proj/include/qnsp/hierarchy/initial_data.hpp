#pragma once

// Initial data (u0, T0) for the limit system.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "qnsp/errors.hpp"
#include "qnsp/spectral/operators.hpp"
#include "qnsp/spectral/random.hpp"

namespace qnsp {

struct InitialDataSpec {
  std::string kind = "taylor_green";  ///< taylor_green | random | rest
  double velocity_amplitude = 1.0;
  double temperature_mean = 1.0;
  double temperature_amplitude = 0.1;
  std::uint64_t seed = 1;
  int max_wavenumber = 3;
};

struct LimitData {
  VectorField u;
  ScalarField T;
};

/// u = a (sin x cos y, -cos x sin y) (times cos z in 3-D), T = T_m + b cos x cos y.
inline LimitData taylor_green(const Grid& g, double a = 1.0, double Tm = 1.0, double b = 0.1) {
  if (g.dim() < 2) throw ConfigurationError("Taylor-Green data needs dim >= 2");
  const bool three = g.dim() == 3;
  const double k = g.k0();
  auto zf = [&](const std::array<double, 3>& x) { return three ? std::cos(k * x[2]) : 1.0; };
  VectorField u = VectorField::zeros(g);
  u[0] = ScalarField::from_function(g, [&](const std::array<double, 3>& x) { return a * std::sin(k * x[0]) * std::cos(k * x[1]) * zf(x); });
  u[1] = ScalarField::from_function(g, [&](const std::array<double, 3>& x) { return -a * std::cos(k * x[0]) * std::sin(k * x[1]) * zf(x); });
  ScalarField T = ScalarField::from_function(g, [&](const std::array<double, 3>& x) { return Tm + b * std::cos(k * x[0]) * std::cos(k * x[1]); });
  return {std::move(u), std::move(T)};
}

inline LimitData make_initial_data(const Grid& g, const InitialDataSpec& spec) {
  if (!(spec.temperature_mean > 0.0)) throw ConfigurationError("temperature mean must be positive");
  if (spec.kind == "taylor_green")
    return taylor_green(g, spec.velocity_amplitude, spec.temperature_mean, spec.temperature_amplitude);
  if (spec.kind == "rest")
    return {VectorField::zeros(g), ScalarField::constant(g, spec.temperature_mean)};
  if (spec.kind == "random") {
    RandomFieldSpec rs;
    rs.max_wavenumber = spec.max_wavenumber;
    VectorField u = leray_project(random_vector_field(g, spec.seed, rs));
    double umax = 0.0;
    for (int a = 0; a < u.dim(); ++a) umax = std::max({umax, max_value(u[a]), -min_value(u[a])});
    if (umax > 0.0) u *= spec.velocity_amplitude / umax;
    ScalarField T = random_bounded_field(g, spec.seed + 101, spec.temperature_amplitude, rs);
    T += ScalarField::constant(g, spec.temperature_mean);
    return {std::move(u), std::move(T)};
  }
  throw ConfigurationError("unknown initial data kind '" + spec.kind + "'");
}

}  // namespace qnsp
