#include <catch_amalgamated.hpp>

#include <filesystem>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "oracles.hpp"

using namespace qnsp;
using Catch::Approx;

namespace {

struct PhysicalState {
  std::vector<double> n, T, phi;
  std::vector<std::vector<double>> u;
};

PhysicalState physical(const ScalarField& n, const VectorField& u, const ScalarField& T, const ScalarField& phi) {
  PhysicalState p{n.to_physical(), T.to_physical(), phi.to_physical(), {}};
  for (const auto& c : u) p.u.push_back(c.to_physical());
  return p;
}

// Mixed second derivative by finite differences.
std::vector<double> fd_mixed(const Grid& g, const std::vector<double>& v, int i, int j) {
  if (i == j) return oracle::fd_second(g, v, i);
  return oracle::fd_first(g, oracle::fd_first(g, v, j, 8), i, 8);
}

std::vector<std::vector<double>> fd_momentum(const Grid& g, const PhysicalState& s, const PhysParams& p,
                                             bool bohm_only = false) {
  using namespace oracle;
  const int d = g.dim();
  const auto inv_n = map(s.n, [](double x) { return 1.0 / x; });
  const auto logn = map(s.n, [](double x) { return std::log(x); });
  std::vector<double> divu(s.n.size(), 0.0);
  for (int i = 0; i < d; ++i) divu = add(divu, fd_first(g, s.u[i], i, 8));
  const auto nT = mul(s.n, s.T);

  std::vector<std::vector<double>> out;
  for (int j = 0; j < d; ++j) {
    std::vector<double> bohm(s.n.size(), 0.0);
    for (int i = 0; i < d; ++i) bohm = add(bohm, fd_first(g, mul(s.n, fd_mixed(g, logn, i, j)), i, 8));
    bohm = scale(mul(bohm, inv_n), p.hbar * p.hbar / 12.0);
    if (bohm_only) {
      out.push_back(bohm);
      continue;
    }
    std::vector<double> r(s.n.size(), 0.0);
    for (int i = 0; i < d; ++i) r = add(r, mul(s.u[i], fd_first(g, s.u[j], i, 8)), -1.0);
    r = add(r, mul(inv_n, fd_first(g, nT, j, 8)), -1.0);
    r = add(r, bohm);
    r = add(r, fd_first(g, s.phi, j, 8));
    auto visc = add(scale(fd_laplacian(g, s.u[j]), p.mu), fd_first(g, divu, j, 8), p.mu + p.lambda);
    r = add(r, mul(inv_n, visc));
    out.push_back(r);
  }
  return out;
}

std::vector<double> fd_temperature(const Grid& g, const PhysicalState& s, const PhysParams& p) {
  using namespace oracle;
  const int d = g.dim();
  const auto inv_n = map(s.n, [](double x) { return 1.0 / x; });
  std::vector<double> divu(s.n.size(), 0.0);
  for (int i = 0; i < d; ++i) divu = add(divu, fd_first(g, s.u[i], i, 8));
  std::vector<double> r(s.n.size(), 0.0);
  for (int i = 0; i < d; ++i) r = add(r, mul(s.u[i], fd_first(g, s.T, i, 8)), -1.0);
  r = add(r, mul(s.T, divu), -2.0 / 3.0);
  r = add(r, mul(inv_n, fd_laplacian(g, s.T)), 2.0 * p.kappa / 3.0);
  std::vector<double> quantum(s.n.size(), 0.0);
  for (int i = 0; i < d; ++i) quantum = add(quantum, fd_first(g, mul(s.n, fd_laplacian(g, s.u[i])), i, 8));
  r = add(r, mul(inv_n, quantum), -p.hbar * p.hbar / 36.0);
  std::vector<double> heat(s.n.size(), 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const auto sij = add(fd_first(g, s.u[j], i, 8), fd_first(g, s.u[i], j, 8));
      heat = add(heat, mul(sij, sij), p.mu / 2.0);
    }
  heat = add(heat, mul(divu, divu), p.lambda);
  r = add(r, mul(inv_n, heat), 2.0 / 3.0);
  return r;
}

FluidState smooth_state(const Grid& g, const PhysParams& p, std::uint64_t seed, double amp = 0.1) {
  const RandomFieldSpec spec{3, 1.5, true};
  FluidState s;
  s.n = random_bounded_field(g, seed, amp, spec);
  s.n.set_mean(1.0);
  s.u = random_vector_field(g, seed + 1, spec);
  s.u *= amp;
  s.T = random_bounded_field(g, seed + 2, amp, spec);
  s.T.set_mean(1.0);
  s.phi = poisson_solve(s.n, p.epsilon);
  return s;
}

double state_distance(const FluidState& a, const FluidState& b) {
  return std::sqrt(std::pow(h3_norm(a.n - b.n), 2) + std::pow(h3_norm(a.u - b.u), 2) +
                   std::pow(h3_norm(a.T - b.T), 2));
}

FluidState equilibrium(const Grid& g, double Tbar) {
  return {0.0, ScalarField::constant(g, 1.0), VectorField::zeros(g), ScalarField::constant(g, Tbar),
          ScalarField::zeros(g)};
}

FluidState run(FluidState s, double dt, int steps, const PhysParams& p, Scheme scheme) {
  for (int i = 0; i < steps; ++i) s = step(s, dt, p, scheme);
  return s;
}

}  // namespace

TEST_CASE("Poisson solve") {
  const Grid g = make_grid(2, 32);
  const double eps = 0.05;
  for (double v : poisson_solve(ScalarField::constant(g, 1.0), eps).to_physical()) CHECK(v == 0.0);

  const ScalarField n = ScalarField::from_function(g, [&](const auto& x) { return 1.0 + eps * std::sin(x[0]); });
  const auto phi = poisson_solve(n, eps).to_physical();
  const auto expect = oracle::sample(g, [](const auto& x) { return -std::sin(x[0]); });
  CHECK(oracle::max_abs_diff(phi, expect) <= 1e-13);

  ScalarField r = random_smooth_field(g, 3);
  r.set_mean(1.0);
  const ScalarField ph = poisson_solve(r, eps);
  ScalarField resid = laplacian(ph);
  resid *= eps;
  ScalarField src = r;
  src.set_mean(0.0);
  CHECK(l2_norm(resid - src) <= 1e-12 * l2_norm(src));
  CHECK(ph.mean() == 0.0);

  ScalarField bad = r;
  bad.set_mean(1.1);
  CHECK_THROWS_AS(poisson_solve(bad, eps), SolvabilityError);
}

TEST_CASE("Bohm force") {
  const Grid g = make_grid(2, 32);
  for (auto form : {BohmForm::log_hessian, BohmForm::expanded})
    CHECK(l2_norm(bohm_force(ScalarField::constant(g, 1.0), 0.3, form)) == 0.0);
  ScalarField n = random_bounded_field(g, 1, 0.1);
  n.set_mean(1.0);
  CHECK(l2_norm(bohm_force(n, 0.0)) == 0.0);

  const Grid gf = make_grid(2, 64);
  for (double hbar : {0.1, 0.01}) {
    ScalarField m = random_bounded_field(gf, 17, 0.1);
    m.set_mean(1.0);
    const VectorField a = bohm_force(m, hbar, BohmForm::log_hessian);
    const VectorField b = bohm_force(m, hbar, BohmForm::expanded);
    CHECK(l2_norm(a - b) <= 1e-8 * l2_norm(a));
  }

  ScalarField neg = random_bounded_field(g, 2, 1.5);
  neg.set_mean(1.0);
  CHECK_THROWS_AS(bohm_force(neg, 0.1), DomainError);
}

TEST_CASE("right-hand side: equilibrium and term isolation") {
  const Grid g = make_grid(2, 32);
  PhysParams p{0.1, 0.05, 0.1, 0.0, 0.1, 1};
  const Tendencies eq = qnsp_rhs(equilibrium(g, 1.3), p);
  CHECK(l2_norm(eq.dn) == 0.0);
  CHECK(l2_norm(eq.du) == 0.0);
  CHECK(l2_norm(eq.dT) == 0.0);

  // u = 0, n = 1, hbar = kappa = 0: dT/dt = 0 and du/dt = -grad T.
  PhysParams q{0.1, 0.0, 0.1, -0.05, 0.0, 1};
  FluidState s = equilibrium(g, 1.0);
  s.T = random_bounded_field(g, 4, 0.2);
  s.T.set_mean(1.0);
  const Tendencies k = qnsp_rhs(s, q);
  CHECK(l2_norm(k.dT) <= 1e-14);
  CHECK(l2_norm(k.du + grad(s.T)) <= 1e-14 * l2_norm(grad(s.T)));
  CHECK(l2_norm(k.dn) == 0.0);
}

TEST_CASE("right-hand side matches a finite-difference discretisation") {
  const Grid g = make_grid(2, 256);
  PhysParams p{0.05, 0.1, 0.1, 0.05, 0.1, 1};
  const FluidState s = smooth_state(g, p, 101);
  const ScalarField phi = random_bounded_field(g, 55, 0.3, {3, 1.5, true});
  const PhysicalState ps = physical(s.n, s.u, s.T, phi);

  const auto ref_bohm = fd_momentum(g, ps, p, true);
  const VectorField bohm = bohm_force(s.n, p.hbar);
  for (int j = 0; j < 2; ++j) CHECK(oracle::rel_l2(bohm[j].to_physical(), ref_bohm[j]) <= 1e-6);

  const auto ref_m = fd_momentum(g, ps, p);
  const VectorField m = momentum_operator(s.n, s.u, s.T, phi, p);
  for (int j = 0; j < 2; ++j) CHECK(oracle::rel_l2(m[j].to_physical(), ref_m[j]) <= 1e-6);

  const auto ref_e = fd_temperature(g, ps, p);
  CHECK(oracle::rel_l2(temperature_operator(s.n, s.u, s.T, p).to_physical(), ref_e) <= 1e-6);

  std::vector<double> ref_c(ps.n.size(), 0.0);
  for (int i = 0; i < 2; ++i) ref_c = oracle::add(ref_c, oracle::fd_first(g, oracle::mul(ps.n, ps.u[i]), i, 8), -1.0);
  CHECK(oracle::rel_l2(continuity_operator(s.n, s.u).to_physical(), ref_c) <= 1e-6);
}

TEST_CASE("equilibrium is a fixed point of both schemes") {
  const Grid g = make_grid(2, 32);
  PhysParams p{0.01, 0.05, 0.1, 0.0, 0.1, 1};
  const FluidState e = equilibrium(g, 0.8);
  for (auto scheme : {Scheme::rk4_explicit, Scheme::imex_cn}) {
    const FluidState out = run(e, 0.3, 3, p, scheme);
    CHECK(state_distance(out, e) <= 1e-13);
    CHECK(out.t == Approx(0.9));
  }
}

TEST_CASE("rk4 is fourth order and imex_cn second order under dt halving") {
  const Grid g = make_grid(2, 32);
  PhysParams p{0.2, 0.05, 0.1, 0.0, 0.1, 1};
  const FluidState s0 = finalize_state(smooth_state(g, p, 7, 0.2), p);
  const double horizon = 0.2;

  auto observed_order = [&](Scheme scheme, int base_steps) {
    std::vector<FluidState> sol;
    for (int r = 0; r < 3; ++r) {
      const int n = base_steps << r;
      sol.push_back(run(s0, horizon / n, n, p, scheme));
    }
    const double e1 = state_distance(sol[0], sol[1]);
    const double e2 = state_distance(sol[1], sol[2]);
    return std::log2(e1 / e2);
  };
  const double p_rk4 = observed_order(Scheme::rk4_explicit, 10);
  const double p_imex = observed_order(Scheme::imex_cn, 10);
  INFO("rk4 order " << p_rk4 << ", imex order " << p_imex);
  CHECK(std::pow(2.0, p_rk4) == Approx(16.0).epsilon(0.2));
  CHECK(p_rk4 == Approx(4.0).margin(0.2));
  CHECK(p_imex == Approx(2.0).margin(0.2));
}

TEST_CASE("imex_cn matches the matrix exponential of the linearised system") {
  const Grid g = make_grid(2, 16);
  PhysParams p{0.05, 0.1, 0.1, 0.02, 0.1, 1};
  const double Tbar = 1.0;
  const double a = 1e-9;
  FluidState s = equilibrium(g, Tbar);
  s.n = ScalarField::from_function(g, [&](const auto& x) { return 1.0 + a * std::cos(x[0] + 2.0 * x[1]); });
  s.u[0] = ScalarField::from_function(g, [&](const auto& x) { return 0.5 * a * std::sin(x[0] + 2.0 * x[1]); });
  s = finalize_state(s, p);

  // Mode (1, 2) sits at spectral index row 1, column 2 of the r2c layout.
  std::size_t mode = 0;
  for (std::size_t i = 0; i < g.spec_size(); ++i)
    if (g.mode(i)[0] == 1 && g.mode(i)[1] == 2) mode = i;
  const ModeMatrix A = linear_block(g, mode, Tbar, p);
  ModeVector x0(4);
  x0 << s.n[mode], s.u[0][mode], s.u[1][mode], s.T[mode];
  const double horizon = 0.4;
  const ModeVector exact = (A * horizon).exp() * x0;

  auto error = [&](int steps) {
    const FluidState out = run(s, horizon / steps, steps, p, Scheme::imex_cn);
    ModeVector x(4);
    x << out.n[mode], out.u[0][mode], out.u[1][mode], out.T[mode];
    return (x - exact).norm() / exact.norm();
  };
  const double e1 = error(20), e2 = error(40), e3 = error(80);
  INFO("errors " << e1 << " " << e2 << " " << e3);
  CHECK(e1 < 1e-2);
  CHECK(e1 / e2 == Approx(4.0).epsilon(0.1));
  CHECK(e2 / e3 == Approx(4.0).epsilon(0.1));
}

TEST_CASE("stability report: explicit step shrinks with epsilon, implicit does not") {
  const Grid g = make_grid(2, 64);
  PhysParams p{0.04, 0.05, 0.01, 0.0, 0.01, 1};
  FluidState s = equilibrium(g, 1.0);
  s.u = random_vector_field(g, 3);
  s.u *= 0.01;
  s = finalize_state(s, p);
  const StabilityReport r1 = stability_report(s, p);
  p.epsilon = 1e-5;
  const StabilityReport r2 = stability_report(s, p);
  CHECK(r2.dt_rk4 < r1.dt_rk4);
  CHECK(r2.dt_imex == r1.dt_imex);
  CHECK(r2.dt_imex > 5.0 * r2.dt_rk4);
}

TEST_CASE("integrate: equilibrium, failures and cadence") {
  const Grid g = make_grid(2, 16);
  PhysParams p{0.1, 0.05, 0.1, 0.0, 0.1, 1};
  const Trajectory eq = integrate(equilibrium(g, 1.0), 1.0, p, 0.05, Scheme::rk4_explicit, {.sample_interval = 0.25});
  REQUIRE(eq.status == RunStatus::completed);
  REQUIRE(eq.states.size() == 5u);
  for (std::size_t i = 0; i < eq.states.size(); ++i) {
    CHECK(eq.states[i].t == Approx(0.25 * i));
    CHECK(state_distance(eq.states[i], eq.states[0]) <= 1e-13);
  }

  CHECK_THROWS_AS(plan_steps(1.0, 0.01, 0.3), ConfigurationError);
  const StepPlan plan = plan_steps(0.25, 0.003, 0.01);
  CHECK(plan.samples == 25);
  CHECK(plan.steps_per_sample == 4);
  CHECK(plan.dt == Approx(0.0025));

  FluidState low = equilibrium(g, 1.0);
  low.n = ScalarField::from_function(g, [](const auto& x) { return 1.0 + 0.8 * std::cos(x[0]); });
  const Trajectory bu = integrate(low, 0.1, p, 0.01, Scheme::rk4_explicit);
  CHECK(bu.status == RunStatus::blow_up);

  FluidState nan = equilibrium(g, 1.0);
  nan.T[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK(integrate(nan, 0.1, p, 0.01, Scheme::rk4_explicit).status == RunStatus::nan);

  // A large compression wave hits the density floor during the run; the last
  // valid sample is kept.
  FluidState wave = equilibrium(g, 1.0);
  wave.u[0] = ScalarField::from_function(g, [](const auto& x) { return 3.0 * std::sin(x[0]); });
  PhysParams weak = p;
  weak.epsilon = 1.0;
  const Trajectory late = integrate(wave, 2.0, weak, 0.002, Scheme::rk4_explicit, {.sample_interval = 0.01});
  CHECK(late.status == RunStatus::blow_up);
  CHECK(late.states.size() >= 2u);
  CHECK(min_value(late.states.back().n) > 0.25);
}

TEST_CASE("mass and potential consistency along a run") {
  const Grid g = make_grid(2, 32);
  PhysParams p{0.05, 0.05, 0.1, 0.0, 0.1, 1};
  const FluidState s0 = smooth_state(g, p, 19, 0.1);
  double worst_mass = 0.0, worst_pot = 0.0;
  IntegrateOptions opt;
  opt.sample_interval = 0.05;
  opt.keep_states = false;
  opt.on_sample = [&](const FluidState& s) {
    worst_mass = std::max(worst_mass, std::abs(s.n.mean() - 1.0));
    ScalarField lhs = laplacian(s.phi);
    lhs *= p.epsilon;
    ScalarField src = s.n;
    src.set_mean(0.0);
    worst_pot = std::max(worst_pot, l2_norm(lhs - src) / std::max(l2_norm(src), p.epsilon));
  };
  const Trajectory t = integrate(s0, 0.25, p, 0.005, Scheme::imex_cn, opt);
  CHECK(t.status == RunStatus::completed);
  CHECK(t.samples_emitted == 6u);
  CHECK(worst_mass <= 1e-12);
  CHECK(worst_pot <= 1e-10);
}

TEST_CASE("small-amplitude Taylor-Green decays like the viscous oracle") {
  const Grid g = make_grid(2, 32);
  PhysParams p{1.0, 0.0, 0.1, 0.0, 0.0, 1};
  const double a = 1e-4;
  FluidState s = equilibrium(g, 1.0);
  s.u[0] = ScalarField::from_function(g, [&](const auto& x) { return a * std::sin(x[0]) * std::cos(x[1]); });
  s.u[1] = ScalarField::from_function(g, [&](const auto& x) { return -a * std::cos(x[0]) * std::sin(x[1]); });
  const double horizon = 0.5;
  for (auto scheme : {Scheme::rk4_explicit, Scheme::imex_cn}) {
    const Trajectory t = integrate(s, horizon, p, 0.01, scheme);
    REQUIRE(t.status == RunStatus::completed);
    VectorField expect = s.u;
    expect *= std::exp(-2.0 * p.mu * horizon);
    CHECK(l2_norm(t.states.back().u - expect) <= 1e-3 * l2_norm(expect));
  }
}

TEST_CASE("checkpoints round trip") {
  const Grid g = make_grid(2, 16);
  PhysParams p{0.05, 0.02, 0.1, 0.01, 0.2, 2};
  FluidState s = smooth_state(g, p, 5);
  s.t = 0.125;
  const auto dir = std::filesystem::temp_directory_path() / "qnsp_ckpt_test";
  write_checkpoint(dir, s, p, Scheme::imex_cn);
  const Checkpoint c = read_checkpoint(dir);
  CHECK(c.state.t == 0.125);
  CHECK(c.scheme == Scheme::imex_cn);
  CHECK(c.params.kappa == 0.2);
  CHECK(c.params.order == 2);
  CHECK(l2_norm(c.state.u - s.u) <= 1e-14 * l2_norm(s.u));
  CHECK(l2_norm(c.state.n - s.n) <= 1e-14 * l2_norm(s.n));
  CHECK(l2_norm(c.state.T - s.T) <= 1e-14 * l2_norm(s.T));
  CHECK(l2_norm(c.state.phi - s.phi) <= 1e-14 * l2_norm(s.phi));
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(read_checkpoint(dir), IoError);
}

TEST_CASE("parameter validation") {
  PhysParams p;
  CHECK_NOTHROW(p.validate());
  p.mu = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigurationError);
  p = {};
  p.lambda = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigurationError);
  p = {};
  p.epsilon = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigurationError);
  CHECK_NOTHROW(p.validate(false));
  CHECK(scheme_from_string("imex_cn") == Scheme::imex_cn);
  CHECK_THROWS_AS(scheme_from_string("euler"), ConfigurationError);
}
