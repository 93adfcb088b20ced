#pragma once

// Per-sample diagnostics of a full run against its profiles.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qnsp/diagnostics/remainders.hpp"
#include "qnsp/solver/integrate.hpp"

namespace qnsp {

struct DiagnosticsSeries {
  double epsilon = 0.0;
  int order = 0;
  double hbar = 0.0;
  std::vector<double> times;
  std::vector<double> triple_norm;
  std::vector<double> err_n_H3;
  std::vector<double> err_u_H3;
  std::vector<double> err_T_H3;
  std::vector<double> err_limit_H3;  ///< joint distance to the order-0 profile
  std::vector<double> mass_drift;
  std::vector<double> pot_residual;
  std::vector<double> cont_residual;  ///< NaN at the two end samples
  std::optional<double> c_tilde;
  std::optional<std::size_t> first_crossing;  ///< first sample with triple norm above c_tilde

  std::size_t size() const { return times.size(); }

  double max_triple_norm() const {
    double m = 0.0;
    for (double v : triple_norm) m = std::max(m, v);
    return m;
  }

  /// sup over samples of the joint H3 error of (n, u, T).
  double sup_joint_error() const {
    double m = 0.0;
    for (std::size_t j = 0; j < size(); ++j)
      m = std::max(m, std::sqrt(err_n_H3[j] * err_n_H3[j] + err_u_H3[j] * err_u_H3[j] + err_T_H3[j] * err_T_H3[j]));
    return m;
  }

  static double sup(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v)
      if (std::isfinite(x)) m = std::max(m, x);
    return m;
  }

  /// Record the bound and locate its first crossing.
  void apply_bound(double bound) {
    c_tilde = bound;
    first_crossing.reset();
    for (std::size_t j = 0; j < size(); ++j)
      if (triple_norm[j] > bound) {
        first_crossing = j;
        break;
      }
  }
};

/// Triple-norm series of a remainder series; errors and residuals stay empty.
inline DiagnosticsSeries triple_norm_series(const std::vector<RemainderSet>& rs, double hbar,
                                            std::optional<double> c_tilde = std::nullopt) {
  DiagnosticsSeries d;
  d.hbar = hbar;
  if (!rs.empty()) {
    d.epsilon = rs.front().epsilon;
    d.order = rs.front().order;
  }
  for (const auto& r : rs) {
    d.times.push_back(r.t);
    d.triple_norm.push_back(triple_norm(r, hbar));
  }
  if (c_tilde) d.apply_bound(*c_tilde);
  return d;
}

/// Full diagnostics of the stored states of a run.
inline DiagnosticsSeries diagnose_run(const std::vector<FluidState>& states, const ProfileSet& ps, double eps,
                                      double hbar, std::optional<double> c_tilde = std::nullopt, int order = -1) {
  const int N = resolve_order(ps, order);
  std::vector<RemainderSet> rs;
  rs.reserve(states.size());
  for (const auto& s : states) rs.push_back(compute_remainders(s, ps, eps, N));
  DiagnosticsSeries d = triple_norm_series(rs, hbar);
  d.epsilon = eps;
  d.order = N;
  const double eN = std::pow(eps, N);
  const double mass0 = states.empty() ? 1.0 : states.front().n.mean();
  for (std::size_t j = 0; j < states.size(); ++j) {
    const auto& r = rs[j];
    d.err_n_H3.push_back(eN * h3_norm(r.N_R));
    d.err_u_H3.push_back(eN * h3_norm(r.U_R));
    d.err_T_H3.push_back(eN * h3_norm(r.T_R));
    const FluidState lim = compose_profile(ps, eps, states[j].t, 0);
    const double en = h3_norm(states[j].n - lim.n);
    const double eu = h3_norm(states[j].u - lim.u);
    const double eT = h3_norm(states[j].T - lim.T);
    d.err_limit_H3.push_back(std::sqrt(en * en + eu * eu + eT * eT));
    d.mass_drift.push_back(std::abs(states[j].n.mean() - mass0));
    d.pot_residual.push_back(potential_residual(r, ps));
  }
  d.cont_residual.assign(states.size(), std::numeric_limits<double>::quiet_NaN());
  if (rs.size() >= 3) {
    const auto cr = continuity_residual(rs, ps);
    for (std::size_t j = 0; j < cr.size(); ++j) d.cont_residual[j + 1] = cr[j].residual;
  }
  if (c_tilde) d.apply_bound(*c_tilde);
  return d;
}

inline const char* kDiagnosticsHeader = "t,triple_norm,err_n_H3,err_u_H3,err_T_H3,mass_drift,pot_residual,cont_residual";

inline void write_diagnostics_csv(const std::filesystem::path& path, const DiagnosticsSeries& d) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write diagnostics table", path.string());
  out.precision(17);
  out << kDiagnosticsHeader << '\n';
  auto at = [](const std::vector<double>& v, std::size_t j) {
    return j < v.size() ? v[j] : std::numeric_limits<double>::quiet_NaN();
  };
  for (std::size_t j = 0; j < d.size(); ++j) {
    out << d.times[j] << ',' << at(d.triple_norm, j) << ',' << at(d.err_n_H3, j) << ',' << at(d.err_u_H3, j) << ','
        << at(d.err_T_H3, j) << ',' << at(d.mass_drift, j) << ',' << at(d.pot_residual, j) << ','
        << at(d.cont_residual, j) << '\n';
  }
  if (!out) throw IoError("failed while writing diagnostics table", path.string());
}

/// Mass, density range and Poisson consistency of a trajectory.
struct ConservationReport {
  std::vector<double> times;
  std::vector<double> mass_drift;
  std::vector<double> n_min;
  std::vector<double> n_max;
  std::vector<double> pot_residual;  ///< ||eps lap phi - (n - 1)|| / max(||n - 1||, eps)
  double max_mass_drift = 0.0;
  double max_pot_residual = 0.0;
  double lower_bound = 0.5;
  double upper_bound = 1.5;
  std::optional<std::size_t> first_violation;  ///< first sample leaving (lower, upper)
};

inline ConservationReport conservation_report(const std::vector<FluidState>& states, double eps) {
  if (states.empty()) throw UsageError("conservation report needs at least one state");
  ConservationReport rep;
  const double mass0 = states.front().n.mean();
  for (std::size_t j = 0; j < states.size(); ++j) {
    const auto& s = states[j];
    rep.times.push_back(s.t);
    rep.mass_drift.push_back(std::abs(s.n.mean() - mass0));
    const double lo = min_value(s.n);
    const double hi = max_value(s.n);
    rep.n_min.push_back(lo);
    rep.n_max.push_back(hi);
    const ScalarField dev = s.n - ScalarField::constant(s.grid(), 1.0);
    const ScalarField res = eps * laplacian(s.phi) - dev;
    rep.pot_residual.push_back(l2_norm(res) / std::max(l2_norm(dev), eps));
    rep.max_mass_drift = std::max(rep.max_mass_drift, rep.mass_drift.back());
    rep.max_pot_residual = std::max(rep.max_pot_residual, rep.pot_residual.back());
    if (!rep.first_violation && !(lo > rep.lower_bound && hi < rep.upper_bound)) rep.first_violation = j;
  }
  return rep;
}

inline ConservationReport conservation_report(const Trajectory& traj) {
  return conservation_report(traj.states, traj.params.epsilon);
}

}  // namespace qnsp
