#pragma once

// Epsilon-ladder experiment: one shared profile set, one full run per
// epsilon, sup-in-time H3 errors against the composed profile and a
// log-log rate fit.

#include <atomic>
#include <chrono>
#include <cmath>
#include <memory>
#include <thread>
#include <vector>

#include "qnsp/diagnostics/series.hpp"
#include "qnsp/harness/config.hpp"
#include "qnsp/harness/record.hpp"
#include "qnsp/hierarchy/compose.hpp"

namespace qnsp {

inline SharedProfiles build_ladder_profiles(const LadderConfig& c) {
  const Grid g = c.grid.make();
  const LimitData d = make_initial_data(g, c.initial);
  BuildOptions opt;
  opt.hierarchy.samples = c.profile_samples;
  opt.hierarchy.substeps = c.profile_substeps;
  opt.method = c.forcing;
  return std::make_shared<const ProfileSet>(build_profiles(d.u, d.T, c.horizon(), c.params, opt));
}

/// O(1) remainder data, with Phi_R0 chosen so that the potential identity holds at t = 0.
inline RemainderSet planted_remainder(const ProfileSet& ps, double eps, const PlantedRemainder& spec) {
  const Grid& g = ps.grid;
  const int N = ps.order();
  RemainderSet r = RemainderSet::zeros(g, eps, N);
  RandomFieldSpec rs;
  rs.max_wavenumber = 3;
  VectorField U = leray_project(random_vector_field(g, spec.seed, rs));
  double umax = 0.0;
  for (const auto& c : U) umax = std::max({umax, max_value(c), -min_value(c)});
  if (umax > 0.0) U *= spec.velocity_amplitude / umax;
  r.U_R = std::move(U);
  r.T_R = random_bounded_field(g, spec.seed + 1, spec.temperature_amplitude, rs);
  r.N_R = random_bounded_field(g, spec.seed + 2, spec.density_amplitude, rs);
  ScalarField phi = inverse_laplacian(r.N_R);
  phi.axpy(-eps, ps.level(N).phi[0]);
  r.Phi_R = (1.0 / std::sqrt(eps)) * phi;
  return r;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// One full run at a given epsilon. Failures are recorded, never thrown.
inline RunEntry run_single(const LadderConfig& c, const ProfileSet& ps, double eps) {
  RunEntry e;
  e.epsilon = eps;
  const auto t0 = std::chrono::steady_clock::now();
  PhysParams p = c.params;
  p.epsilon = eps;
  try {
    RemainderSet r0;
    const RemainderSet* rp = nullptr;
    if (c.remainder.enabled) {
      r0 = planted_remainder(ps, eps, c.remainder);
      rp = &r0;
    }
    const FluidState s0 = finalize_state(compose_initial_data(ps, eps, rp), p);
    const StabilityReport rep = stability_report(s0, p);
    e.dt_report = rep.dt(c.scheme);
    const double dt = std::min(c.dt_max, c.dt_fraction * e.dt_report);
    IntegrateOptions io;
    io.sample_interval = c.sample_interval;
    io.wall_limit_s = c.wall_limit_s;
    const Trajectory tr = integrate(s0, c.tau, p, dt, c.scheme, io);
    e.status = tr.status;
    e.message = tr.message;
    e.dt = tr.dt;
    e.t_reached = tr.t_reached;
    e.diagnostics = diagnose_run(tr.states, ps, eps, p.hbar);
    e.err_n_H3 = DiagnosticsSeries::sup(e.diagnostics.err_n_H3);
    e.err_u_H3 = DiagnosticsSeries::sup(e.diagnostics.err_u_H3);
    e.err_T_H3 = DiagnosticsSeries::sup(e.diagnostics.err_T_H3);
    e.err_joint_H3 = e.diagnostics.sup_joint_error();
    e.err_limit_H3 = DiagnosticsSeries::sup(e.diagnostics.err_limit_H3);
    e.triple_norm_max = e.diagnostics.max_triple_norm();
    e.triple_norm_t0 = e.diagnostics.triple_norm.empty() ? 0.0 : e.diagnostics.triple_norm.front();
  } catch (const BlowUpError& ex) {
    e.status = RunStatus::blow_up;
    e.message = ex.what();
  } catch (const std::exception& ex) {
    e.status = RunStatus::nan;
    e.message = ex.what();
  }
  e.wall_s = seconds_since(t0);
  log_info("epsilon " + std::to_string(eps) + ": " + to_string(e.status) + ", dt " + std::to_string(e.dt) +
           ", sup error " + std::to_string(e.err_joint_H3));
  return e;
}

/// Discretisation floor: the limit system re-integrated with half the
/// profile step at each run's cadence, compared with the stored profile.
inline NullExperiment null_experiment(const LadderConfig& c, const ProfileSet& ps, const std::vector<RunEntry>& runs) {
  NullExperiment ne;
  const auto& L0 = ps.level(0);
  for (const auto& e : runs) {
    HierarchyOptions opt;
    opt.samples = c.profile_samples;
    const double h = ps.spacing();
    opt.substeps = std::max(2, static_cast<int>(std::ceil(h / std::max(e.dt, 1e-300))));
    const ProfileLevel ref = integrate_limit(L0.u[0], L0.T[0], c.horizon(), c.params, opt);
    double sup = 0.0;
    for (double t = 0.0; t <= c.tau + 1e-12; t += c.sample_interval) {
      const double du = h3_norm(ref.u.at(t) - L0.u.at(t));
      const double dT = h3_norm(ref.T.at(t) - L0.T.at(t));
      sup = std::max(sup, std::sqrt(du * du + dT * dT));
    }
    ne.errors.push_back(sup);
    ne.floor = std::max(ne.floor, sup);
  }
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < runs.size(); ++i) pts.emplace_back(runs[i].epsilon, ne.errors[i]);
  try {
    ne.fit = fit_rate(pts);
    ne.rejected = ne.fit->r2 < c.gate.min_r2;
  } catch (const FitError&) {
    ne.rejected = true;
  }
  return ne;
}

/// Rate fits of the completed runs, gated on R^2 and distance from the floor.
inline void fit_record(RunRecord& rec, const FitGate& gate) {
  rec.fits.clear();
  std::vector<const RunEntry*> ok;
  for (const auto& e : rec.entries)
    if (e.status == RunStatus::completed) ok.push_back(&e);
  if (ok.size() < 3) return;
  const double floor = rec.null_experiment ? rec.null_experiment->floor : 0.0;
  auto fit_field = [&](const std::string& key, double RunEntry::*field) {
    std::vector<std::pair<double, double>> pts;
    bool near_floor = false;
    for (const auto* e : ok) {
      pts.emplace_back(e->epsilon, e->*field);
      if (e->*field <= gate.floor_factor * floor) near_floor = true;
    }
    RateFit rf;
    try {
      rf.fit = fit_rate(pts);
      rf.confirming = rf.fit.r2 >= gate.min_r2 && !near_floor;
      if (rf.fit.r2 < gate.min_r2) rf.note = "R2 below gate";
      if (near_floor) rf.note += std::string(rf.note.empty() ? "" : "; ") + "run within floor factor of the floor";
    } catch (const FitError& ex) {
      rf.note = ex.what();
    }
    rec.fits[key] = rf;
  };
  fit_field("joint", &RunEntry::err_joint_H3);
  fit_field("n", &RunEntry::err_n_H3);
  fit_field("u", &RunEntry::err_u_H3);
  fit_field("T", &RunEntry::err_T_H3);
}

inline RunRecord run_ladder(const LadderConfig& c, SharedProfiles profiles = nullptr) {
  c.validate();
  RunRecord rec;
  rec.config = to_json(c);
  rec.order = c.params.order;
  const auto tp = std::chrono::steady_clock::now();
  if (!profiles) profiles = build_ladder_profiles(c);
  if (profiles->order() < c.params.order) throw DependencyError("supplied profiles are of too low an order");
  if (profiles->t_end() + 1e-12 < c.tau) throw ConfigurationError("profiles do not cover the horizon");
  rec.profile_wall_s = seconds_since(tp);

  rec.entries.resize(c.epsilons.size());
  const int workers = std::min<int>(c.effective_workers(), static_cast<int>(c.epsilons.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < c.epsilons.size(); i = next++) rec.entries[i] = run_single(c, *profiles, c.epsilons[i]);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  // Bound for the triple norm: configured, or ten times the initial value of the coarsest run.
  rec.c_tilde = c.c_tilde;
  if (!rec.c_tilde && !rec.entries.empty() && rec.entries.front().triple_norm_t0 > 0.0)
    rec.c_tilde = 10.0 * rec.entries.front().triple_norm_t0;
  if (rec.c_tilde)
    for (auto& e : rec.entries)
      if (!e.diagnostics.times.empty()) e.diagnostics.apply_bound(*rec.c_tilde);

  std::vector<RunEntry> completed;
  for (const auto& e : rec.entries)
    if (e.status == RunStatus::completed) completed.push_back(e);
  if (c.null_experiment && !completed.empty()) rec.null_experiment = null_experiment(c, *profiles, completed);
  fit_record(rec, c.gate);

  double lo = INFINITY, hi = 0.0;
  for (const auto& e : completed) {
    lo = std::min(lo, e.triple_norm_max);
    hi = std::max(hi, e.triple_norm_max);
  }
  if (completed.size() >= 2 && lo > 0.0) rec.triple_norm_ratio = hi / lo;
  return rec;
}

}  // namespace qnsp
