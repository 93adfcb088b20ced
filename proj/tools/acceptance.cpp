// Acceptance suite A1-A11: one PASS/FAIL line per criterion, followed by
// supplementary lines, echoed to <out>/acceptance.txt. Exits 0 once the suite has run; --strict makes the
// exit status reflect the criteria.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "qnsp/qnsp.hpp"

using namespace qnsp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... v) {
  char b[512];
  std::snprintf(b, sizeof b, f, v...);
  return b;
}

double rel_l2(const ScalarField& a, const ScalarField& b) { return l2_norm(a - b) / std::max(l2_norm(b), 1e-300); }
double rel_l2(const VectorField& a, const VectorField& b) { return l2_norm(a - b) / std::max(l2_norm(b), 1e-300); }

PhysParams base_params(int order, double eps = 1.0) {
  PhysParams p;
  p.epsilon = eps;
  p.hbar = 0.05;
  p.mu = 0.1;
  p.kappa = 0.1;
  p.lambda = 0.0;
  p.order = order;
  return p;
}

double joint_h3(const FluidState& a, const FluidState& b) {
  const double en = h3_norm(a.n - b.n), eu = h3_norm(a.u - b.u), eT = h3_norm(a.T - b.T);
  return std::sqrt(en * en + eu * eu + eT * eT);
}

// ---------------------------------------------------------------- A1-A5

Outcome a1_spectral() {
  const Grid g = make_grid(2, 64);
  double worst = 0.0;
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b <= 5; ++b) {
      if (a == 0 && b == 0) continue;
      const auto f = ScalarField::from_function(g, [&](const std::array<double, 3>& x) { return std::sin(a * x[0]) * std::cos(b * x[1]); });
      const auto fx = ScalarField::from_function(g, [&](const std::array<double, 3>& x) { return a * std::cos(a * x[0]) * std::cos(b * x[1]); });
      const auto fy = ScalarField::from_function(g, [&](const std::array<double, 3>& x) { return -b * std::sin(a * x[0]) * std::sin(b * x[1]); });
      const ScalarField lap = -static_cast<double>(a * a + b * b) * f;
      if (a > 0) worst = std::max(worst, rel_l2(partial(f, 0), fx));
      if (b > 0) worst = std::max(worst, rel_l2(partial(f, 1), fy));
      worst = std::max(worst, rel_l2(laplacian(f), lap));
    }
  return {worst <= 1e-12, fmt("max relative error %.2e over sin(ax)cos(by), a,b <= 5, 64^2", worst)};
}

Outcome a2_hessian_laplacian() {
  const Grid g = make_grid(2, 64);
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const ScalarField f = random_smooth_field(g, 5000 + seed, {8, 3.0, true});
    const TensorField H = hessian(f);
    double h2 = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) h2 += std::pow(l2_norm(H(i, j)), 2);
    const double lap = l2_norm(laplacian(f));
    worst = std::max(worst, std::abs(std::sqrt(h2) - lap) / lap);
  }
  return {worst <= 1e-10, fmt("max | ||D2 f|| - ||lap f|| | / ||lap f|| = %.2e over 200 fields", worst)};
}

Outcome a3_bohm_forms() {
  const Grid g = make_grid(2, 64);
  double worst = 0.0;
  for (double hbar : {0.1, 0.01}) {
    ScalarField n = random_bounded_field(g, 31, 0.1);
    n.set_mean(1.0);
    const VectorField a = bohm_force(n, hbar, BohmForm::log_hessian);
    const VectorField b = bohm_force(n, hbar, BohmForm::expanded);
    worst = std::max(worst, l2_norm(a - b) / l2_norm(a));
  }
  return {worst <= 1e-8, fmt("max relative difference %.2e for hbar in {0.1, 0.01}", worst)};
}

Outcome a4_forcing(const ProfileSet& ps) {
  const auto od = order_constraint(1, ps);
  const auto fe = forcing_explicit(ps, od, ps.params);
  const auto fx = forcing_extraction(1, ps, od, ps.params);
  double worst = 0.0;
  for (double t : {0.0, 0.1}) {
    const auto j = static_cast<std::size_t>(std::lround(t / ps.spacing()));
    worst = std::max({worst, rel_l2(fx.f[j], fe.f[j]), rel_l2(fx.g[j], fe.g[j])});
  }
  return {worst <= 1e-6, fmt("max relative difference %.2e at t in {0, 0.1}", worst)};
}

Outcome a5_limit() {
  const Grid g = make_grid(2, 64);
  const auto d = taylor_green(g);
  const PhysParams p = base_params(1);
  const double tau = 0.5;
  const auto L = integrate_limit(d.u, d.T, tau, p, {});
  const VectorField exact = std::exp(-2.0 * p.mu * tau) * d.u;
  double err = 0.0;
  for (int a = 0; a < 2; ++a) {
    const auto x = L.u[L.size() - 1][a].to_physical();
    const auto y = exact[a].to_physical();
    for (std::size_t i = 0; i < x.size(); ++i) err = std::max(err, std::abs(x[i] - y[i]));
  }
  return {err <= 1e-6, fmt("max pointwise velocity error %.2e at tau = 0.5", err)};
}

// ---------------------------------------------------------------- A6, A10

struct GenericRun {
  ProfileSet ps;
  Trajectory tr;
  double eps = 0.05;
};

GenericRun generic_run() {
  GenericRun r;
  const Grid g = make_grid(2, 64);
  InitialDataSpec spec;
  spec.kind = "random";
  spec.seed = 11;
  const auto d = make_initial_data(g, spec);
  BuildOptions opt;
  opt.hierarchy.samples = 250;
  r.ps = build_profiles(d.u, d.T, 0.25, base_params(1), opt);
  const PhysParams p = base_params(1, r.eps);
  const FluidState s0 = finalize_state(compose_initial_data(r.ps, r.eps), p);
  const double dt = std::min(2e-3, 0.5 * stability_report(s0, p).dt_rk4);
  IntegrateOptions io;
  io.sample_interval = 0.005;
  r.tr = integrate(s0, 0.25, p, dt, Scheme::rk4_explicit, io);
  return r;
}

Outcome a6_conservation(const GenericRun& r) {
  if (r.tr.status != RunStatus::completed) return {false, "run ended with status " + to_string(r.tr.status)};
  const auto rep = conservation_report(r.tr);
  return {rep.max_mass_drift <= 1e-12 && rep.max_pot_residual <= 1e-10,
          fmt("mass drift %.2e, potential residual %.2e over %zu samples", rep.max_mass_drift, rep.max_pot_residual,
              rep.times.size())};
}

Outcome a10_identities(const GenericRun& r) {
  if (r.tr.status != RunStatus::completed) return {false, "run ended with status " + to_string(r.tr.status)};
  std::vector<RemainderSet> fine, coarse;
  double pot = 0.0;
  for (std::size_t j = 0; j < r.tr.states.size(); ++j) {
    fine.push_back(compute_remainders(r.tr.states[j], r.ps, r.eps));
    pot = std::max(pot, potential_residual(fine.back(), r.ps));
    if (j % 2 == 0) coarse.push_back(fine.back());
  }
  const auto rf = continuity_residual(fine, r.ps);
  const auto rc = continuity_residual(coarse, r.ps);
  double num = 0.0, den = 0.0;
  for (const auto& pc : rc)
    for (const auto& pf : rf)
      if (std::abs(pc.t - pf.t) < 1e-12) {
        num += pc.residual;
        den += pf.residual;
      }
  const double ratio = den > 0.0 ? num / den : 0.0;
  return {pot <= 1e-8 && ratio >= 3.0 && ratio <= 5.0,
          fmt("potential identity residual %.2e; continuity residual ratio %.3f under cadence halving 0.01 -> 0.005",
              pot, ratio)};
}

// ---------------------------------------------------------------- A7-A9

LadderConfig tg_ladder(int order) {
  LadderConfig c;
  c.grid.points = 64;
  c.params = base_params(order);
  c.epsilons = {4e-2, 2e-2, 1e-2, 5e-3};
  c.tau = 0.25;
  c.profile_samples = 250;
  c.sample_interval = 0.01;
  c.scheme = Scheme::rk4_explicit;
  c.dt_max = 2e-3;
  c.dt_fraction = 0.5;
  return c;
}

std::string ladder_detail(const RunRecord& rec) {
  std::string s = "errors";
  for (const auto& e : rec.entries) s += fmt(" %.3e", e.err_joint_H3);
  const auto it = rec.fits.find("joint");
  if (it == rec.fits.end()) return s + "; no fit";
  return s + fmt("; slope %.3f, R2 %.4f", it->second.fit.slope, it->second.fit.r2);
}

Outcome rate_outcome(const RunRecord& rec, double lo, double hi) {
  const auto it = rec.fits.find("joint");
  if (it == rec.fits.end()) return {false, ladder_detail(rec)};
  const auto& f = it->second.fit;
  return {f.slope >= lo && f.slope <= hi && f.r2 >= 0.98, ladder_detail(rec)};
}

Outcome a9_uniform(const RunRecord& rec) {
  std::string s = "max triple norm";
  for (const auto& e : rec.entries) s += fmt(" %.3g", e.triple_norm_max);
  if (!rec.triple_norm_ratio) return {false, s + "; ratio unavailable"};
  return {*rec.triple_norm_ratio <= 2.0, s + fmt("; largest/smallest %.3f", *rec.triple_norm_ratio)};
}

// ---------------------------------------------------------------- A11

struct CrossCheck {
  StabilityReport rep;
  double diff = 0.0;
  double rel = 0.0;
  double dt_rk4 = 0.0, dt_imex = 0.0;
};

CrossCheck cross_check(double frac_rk4, double frac_imex) {
  const Grid g = make_grid(2, 64);
  const auto d = taylor_green(g);
  const PhysParams p = base_params(1, 0.05);
  BuildOptions opt;
  opt.hierarchy.samples = 100;
  const auto ps = build_profiles(d.u, d.T, 0.1, p, opt);
  const FluidState s0 = finalize_state(compose_initial_data(ps, p.epsilon), p);
  CrossCheck c;
  c.rep = stability_report(s0, p);
  IntegrateOptions io;
  io.sample_interval = 0.1;
  const auto a = integrate(s0, 0.1, p, frac_rk4 * c.rep.dt_rk4, Scheme::rk4_explicit, io);
  const auto b = integrate(s0, 0.1, p, frac_imex * c.rep.dt_imex, Scheme::imex_cn, io);
  c.dt_rk4 = a.dt;
  c.dt_imex = b.dt;
  if (a.status != RunStatus::completed || b.status != RunStatus::completed) {
    c.diff = c.rel = INFINITY;
    return c;
  }
  const FluidState& A = a.states.back();
  FluidState ref = A;
  ref.n = ScalarField::constant(g, 1.0);
  ref.u = VectorField::zeros(g);
  ref.T = ScalarField::zeros(g);
  c.diff = joint_h3(A, b.states.back());
  c.rel = c.diff / joint_h3(A, ref);
  return c;
}

// ---------------------------------------------------------------- driver

struct Line {
  std::string id;
  std::string title;
  double budget_s;
};

class Suite {
 public:
  Suite(bool strict, const fs::path& log_path) : strict_(strict) {
    std::error_code ec;
    fs::create_directories(log_path.parent_path(), ec);
    log_ = std::fopen(log_path.string().c_str(), "w");
  }
  ~Suite() {
    if (log_) std::fclose(log_);
  }
  Suite(const Suite&) = delete;
  Suite& operator=(const Suite&) = delete;

  void emit(const std::string& line) {
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    if (log_) {
      std::fprintf(log_, "%s\n", line.c_str());
      std::fflush(log_);
    }
  }

  void report(const Line& l, const Outcome& o, double seconds) {
    const bool in_time = seconds <= l.budget_s;
    const bool ok = o.pass && in_time;
    failed_ += !ok;
    emit(fmt("%-4s %s  %s: %s [%.1f s, budget %.0f s%s]", l.id.c_str(), ok ? "PASS" : "FAIL", l.title.c_str(),
             o.detail.c_str(), seconds, l.budget_s, in_time ? "" : ", over budget"));
  }

  template <class F>
  void run(const Line& l, F&& f, double extra_s = 0.0) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    report(l, o, seconds_since(t0) + extra_s);
  }

  void info(const std::string& s) { emit("info " + s); }

  int exit_code() const { return strict_ && failed_ ? 1 : 0; }
  int failed() const { return failed_; }

 private:
  bool strict_;
  int failed_ = 0;
  std::FILE* log_ = nullptr;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  bool strict = false;
  fs::path out = "acceptance_out";
  app.add_flag("--strict", strict, "Exit with status 1 when any criterion fails");
  app.add_option("--out", out, "Directory for ladder artifacts");
  CLI11_PARSE(app, argc, argv);

  Suite s(strict, out / "acceptance.txt");
  s.run({"A1", "spectral exactness", 1}, a1_spectral);
  s.run({"A2", "Hessian and Laplacian L2 norms on the torus", 5}, a2_hessian_laplacian);
  s.run({"A3", "Bohm dual form", 5}, a3_bohm_forms);

  // Taylor-Green hierarchy through order 2 on 64^2, shared by A4, A7, A8 and A9.
  const auto tp = std::chrono::steady_clock::now();
  SharedProfiles tg2, tg1;
  std::string build_error;
  try {
    tg2 = build_ladder_profiles(tg_ladder(2));
    tg1 = std::make_shared<const ProfileSet>(tg2->truncated(1));
  } catch (const std::exception& e) {
    build_error = e.what();
  }
  const double profile_s = seconds_since(tp);

  s.run({"A4", "first-order forcing, extraction vs closed form", 30}, [&] {
    if (!tg1) return Outcome{false, "profile build failed: " + build_error};
    return a4_forcing(*tg1);
  });
  s.run({"A5", "limit solver against decaying Taylor-Green", 30}, a5_limit);

  std::optional<GenericRun> gen;
  s.run({"A6", "mass and potential conservation on a generic run", 120}, [&] {
    gen = generic_run();
    return a6_conservation(*gen);
  });

  std::optional<RunRecord> r1, r2;
  s.run(
      {"A7", "rate for N = 1", 600},
      [&] {
        if (!tg1) return Outcome{false, "profile build failed: " + build_error};
        r1 = run_ladder(tg_ladder(1), tg1);
        emit_report(*r1, out / "ladder_n1");
        return rate_outcome(*r1, 0.7, 1.3);
      },
      profile_s);
  s.run(
      {"A8", "rate for N = 2", 1200},
      [&] {
        if (!tg2) return Outcome{false, "profile build failed: " + build_error};
        r2 = run_ladder(tg_ladder(2), tg2);
        emit_report(*r2, out / "ladder_n2");
        return rate_outcome(*r2, 1.6, 2.4);
      },
      profile_s);
  s.run({"A9", "uniform bound of the triple norm across the N = 1 ladder", 60}, [&] {
    if (!r1) return Outcome{false, "N = 1 ladder unavailable"};
    return a9_uniform(*r1);
  });
  s.run({"A10", "remainder identities on the generic run", 60}, [&] {
    if (!gen) return Outcome{false, "generic run unavailable"};
    return a10_identities(*gen);
  });

  CrossCheck half;
  s.run({"A11", "rk4_explicit vs imex_cn at half of each stability report", 300}, [&] {
    half = cross_check(0.5, 0.5);
    return Outcome{half.diff <= 1e-5,
                   fmt("H3 difference %.3e (relative %.2e) at tau = 0.1, dt %.3g / %.3g", half.diff, half.rel,
                       half.dt_rk4, half.dt_imex)};
  });

  // Supplementary evidence.
  if (r1)
    for (const char* k : {"n", "u", "T"}) {
      const auto it = r1->fits.find(k);
      if (it != r1->fits.end())
        s.info(fmt("N = 1 component %s: slope %.3f, R2 %.4f", k, it->second.fit.slope, it->second.fit.r2));
    }
  if (r1 && r1->null_experiment) s.info(fmt("N = 1 discretisation floor %.2e", r1->null_experiment->floor));
  if (r2 && r2->triple_norm_ratio) s.info(fmt("N = 2 triple norm ratio %.3f", *r2->triple_norm_ratio));
  if (half.rep.dt_rk4 > 0.0) {
    s.info(fmt("A11 stability report: spectral radius %.4g, advective rate %.4g, dt_rk4 %.4g, dt_imex %.4g",
               half.rep.spectral_radius, half.rep.advective_rate, half.rep.dt_rk4, half.rep.dt_imex));
    try {
      for (double f : {0.25, 0.125}) {
        const auto c = cross_check(f, f);
        s.info(fmt("A11 at %.3g of each report: H3 difference %.3e (relative %.2e)", f, c.diff, c.rel));
      }
    } catch (const std::exception& e) {
      s.info(std::string("A11 refinement failed: ") + e.what());
    }
  }
  if (tg1) {
    try {
      auto c = tg_ladder(1);
      c.remainder.enabled = true;
      const auto rec = run_ladder(c, tg1);
      emit_report(rec, out / "ladder_n1_planted");
      s.info("N = 1 with planted O(1) remainder data: " + ladder_detail(rec) +
             (rec.triple_norm_ratio ? fmt(", triple norm ratio %.3f", *rec.triple_norm_ratio) : std::string()));
    } catch (const std::exception& e) {
      s.info(std::string("planted ladder failed: ") + e.what());
    }
  }
  s.emit(fmt("summary: %d of 11 criteria failed", s.failed()));
  return s.exit_code();
}
