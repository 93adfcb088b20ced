// Command-line front end: simulate, profiles, ladder, check, report.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "qnsp/qnsp.hpp"

using namespace qnsp;
namespace fs = std::filesystem;

namespace {

void write_conservation_csv(const fs::path& path, const ConservationReport& r) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write conservation table", path.string());
  out.precision(17);
  out << "t,mass_drift,n_min,n_max,pot_residual\n";
  for (std::size_t j = 0; j < r.times.size(); ++j)
    out << r.times[j] << ',' << r.mass_drift[j] << ',' << r.n_min[j] << ',' << r.n_max[j] << ',' << r.pot_residual[j]
        << '\n';
}

int cmd_simulate(const fs::path& config, const fs::path& out, std::optional<double> eps_opt) {
  const LadderConfig c = load_ladder_config(config);
  const double eps = eps_opt.value_or(c.epsilons.front());
  const auto ps = build_ladder_profiles(c);
  PhysParams p = c.params;
  p.epsilon = eps;
  RemainderSet r0;
  const RemainderSet* rp = nullptr;
  if (c.remainder.enabled) {
    r0 = planted_remainder(*ps, eps, c.remainder);
    rp = &r0;
  }
  const FluidState s0 = finalize_state(compose_initial_data(*ps, eps, rp), p);
  const StabilityReport rep = stability_report(s0, p);
  const double dt = std::min(c.dt_max, c.dt_fraction * rep.dt(c.scheme));
  IntegrateOptions io;
  io.sample_interval = c.sample_interval;
  io.wall_limit_s = c.wall_limit_s;
  const Trajectory tr = integrate(s0, c.tau, p, dt, c.scheme, io);
  write_checkpoint(out / "initial", s0, p, c.scheme);
  write_checkpoint(out / "final", tr.states.back(), p, c.scheme);
  write_conservation_csv(out / "conservation.csv", conservation_report(tr));
  write_diagnostics_csv(out / "diagnostics.csv", diagnose_run(tr.states, *ps, eps, p.hbar));
  std::printf("epsilon %.6g scheme %s dt %.4g status %s t %.6g\n", eps, to_string(c.scheme).c_str(), tr.dt,
              to_string(tr.status).c_str(), tr.t_reached);
  return tr.status == RunStatus::completed ? 0 : 3;
}

int cmd_profiles(const fs::path& config, int order, const fs::path& out) {
  LadderConfig c = load_ladder_config(config);
  if (order > 0) c.params.order = order;
  c.validate();
  const auto ps = build_ladder_profiles(c);
  write_profiles(out, *ps);
  std::printf("profiles of order %d, %zu samples on [0, %.6g] written to %s\n", ps->order(), ps->samples(),
              ps->t_end(), out.string().c_str());
  return 0;
}

int cmd_ladder(const fs::path& config, std::optional<fs::path> out_opt) {
  const LadderConfig c = load_ladder_config(config);
  const fs::path out = out_opt.value_or(fs::path(c.output_dir));
  const RunRecord rec = run_ladder(c);
  emit_report(rec, out);
  std::printf("%-10s %-12s %-12s %-12s %-12s %-10s\n", "epsilon", "err_joint", "err_n", "err_u", "err_T", "status");
  for (const auto& e : rec.entries)
    std::printf("%-10.4g %-12.4e %-12.4e %-12.4e %-12.4e %-10s\n", e.epsilon, e.err_joint_H3, e.err_n_H3, e.err_u_H3,
                e.err_T_H3, to_string(e.status).c_str());
  for (const auto& [k, f] : rec.fits)
    std::printf("fit %-5s slope %.4f R2 %.5f %s%s\n", k.c_str(), f.fit.slope, f.fit.r2,
                f.confirming ? "confirming" : "not confirming", f.note.empty() ? "" : (" (" + f.note + ")").c_str());
  if (rec.triple_norm_ratio) std::printf("triple norm ratio %.4f\n", *rec.triple_norm_ratio);
  if (rec.null_experiment) std::printf("discretisation floor %.3e\n", rec.null_experiment->floor);
  return 0;
}

int cmd_report(const fs::path& record, const fs::path& out) {
  emit_report(load_run_record(record), out);
  std::printf("report written to %s\n", out.string().c_str());
  return 0;
}

// Quick invariant suite on a coarse grid.
int cmd_check() {
  struct Check {
    std::string name;
    std::function<std::pair<bool, std::string>()> run;
  };
  auto fmt = [](const char* f, double v) {
    char b[96];
    std::snprintf(b, sizeof b, f, v);
    return std::string(b);
  };
  const Grid g = make_grid(2, 32);
  std::vector<Check> checks = {
      {"spectral derivative of a trig monomial",
       [&] {
         const auto f = ScalarField::from_function(g, [](const std::array<double, 3>& x) { return std::sin(3 * x[0]) * std::cos(2 * x[1]); });
         const auto fx = ScalarField::from_function(g, [](const std::array<double, 3>& x) { return 3 * std::cos(3 * x[0]) * std::cos(2 * x[1]); });
         const double e = l2_norm(partial(f, 0) - fx) / l2_norm(fx);
         return std::pair{e < 1e-12, fmt("relative error %.2e", e)};
       }},
      {"equilibrium is stationary",
       [&] {
         PhysParams p;
         p.epsilon = 0.05;
         p.hbar = 0.05;
         p.kappa = 0.1;
         FluidState s{0.0, ScalarField::constant(g, 1.0), VectorField::zeros(g), ScalarField::constant(g, 1.0),
                      ScalarField::zeros(g)};
         const auto s1 = step(finalize_state(s, p), 1e-3, p, Scheme::imex_cn);
         const double e = l2_norm(s1.n - s.n) + l2_norm(s1.u) + l2_norm(s1.T - s.T);
         return std::pair{e == 0.0, fmt("change %.2e", e)};
       }},
      {"mass conservation and potential equation",
       [&] {
         LadderConfig c;
         c.grid.points = 32;
         c.initial.kind = "random";
         c.tau = 0.05;
         c.profile_samples = 10;
         c.sample_interval = 0.01;
         c.params.hbar = 0.05;
         c.params.kappa = 0.1;
         const auto ps = build_ladder_profiles(c);
         PhysParams p = c.params;
         p.epsilon = 0.05;
         IntegrateOptions io;
         io.sample_interval = 0.01;
         const auto tr = integrate(finalize_state(compose_initial_data(*ps, 0.05), p), 0.05, p, 1e-3,
                                   Scheme::rk4_explicit, io);
         const auto r = conservation_report(tr);
         const bool ok = tr.status == RunStatus::completed && r.max_mass_drift <= 1e-12 && r.max_pot_residual <= 1e-10;
         return std::pair{ok, fmt("mass drift %.2e", r.max_mass_drift) + fmt(", potential residual %.2e", r.max_pot_residual)};
       }},
      {"rate fit of an exact power law",
       [&] {
         const auto f = fit_rate({{4e-2, 3 * 16e-4}, {2e-2, 3 * 4e-4}, {1e-2, 3e-4}, {5e-3, 0.75e-4}});
         return std::pair{std::abs(f.slope - 2.0) < 1e-12 && std::abs(f.r2 - 1.0) < 1e-12, fmt("slope %.6f", f.slope)};
       }},
  };
  int failed = 0;
  for (const auto& c : checks) {
    bool ok = false;
    std::string detail;
    try {
      std::tie(ok, detail) = c.run();
    } catch (const std::exception& e) {
      detail = e.what();
    }
    std::printf("%s  %s: %s\n", ok ? "PASS" : "FAIL", c.name.c_str(), detail.c_str());
    failed += !ok;
  }
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Navier-Stokes-Poisson quasi-neutral limit experiments"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

  fs::path sim_config, sim_out;
  std::optional<double> sim_eps;
  auto* sim = app.add_subcommand("simulate", "Single full run from well-prepared data");
  sim->add_option("--config", sim_config, "Configuration file")->required();
  sim->add_option("--out", sim_out, "Output directory")->required();
  sim->add_option("--epsilon", sim_eps, "Epsilon (defaults to the first ladder value)");

  fs::path prof_config, prof_out;
  int prof_order = 0;
  auto* prof = app.add_subcommand("profiles", "Build the profile hierarchy");
  prof->add_option("--config", prof_config, "Configuration file")->required();
  prof->add_option("--order", prof_order, "Expansion order (defaults to the configured order)");
  prof->add_option("--out", prof_out, "Output directory")->required();

  fs::path lad_config;
  std::optional<fs::path> lad_out;
  auto* lad = app.add_subcommand("ladder", "Full epsilon-ladder experiment");
  lad->add_option("--config", lad_config, "Configuration file")->required();
  lad->add_option("--out", lad_out, "Output directory (defaults to output_dir)");

  auto* chk = app.add_subcommand("check", "Quick property and invariant suite");

  fs::path rep_record, rep_out;
  auto* rep = app.add_subcommand("report", "Re-emit report files from a stored run record");
  rep->add_option("--record", rep_record, "run_record.json")->required();
  rep->add_option("--out", rep_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);
  if (verbose) set_log_level(LogLevel::info);

  try {
    if (*sim) return cmd_simulate(sim_config, sim_out, sim_eps);
    if (*prof) return cmd_profiles(prof_config, prof_order, prof_out);
    if (*lad) return cmd_ladder(lad_config, lad_out);
    if (*chk) return cmd_check();
    if (*rep) return cmd_report(rep_record, rep_out);
  } catch (const ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
