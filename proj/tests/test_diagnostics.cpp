#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "qnsp/diagnostics/series.hpp"

using namespace qnsp;

namespace {

PhysParams base_params(int order, double eps) {
  PhysParams p;
  p.epsilon = eps;
  p.hbar = 0.05;
  p.mu = 0.1;
  p.kappa = 0.1;
  p.order = order;
  return p;
}

const ProfileSet& profiles() {
  static const ProfileSet ps = [] {
    const Grid g = make_grid(2, 32);
    const auto d = taylor_green(g);
    BuildOptions opt;
    opt.hierarchy.samples = 100;
    return build_profiles(d.u, d.T, 0.1, base_params(2, 1.0), opt);
  }();
  return ps;
}

RemainderSet planted(const Grid& g, double eps, int order) {
  RemainderSet r = RemainderSet::zeros(g, eps, order);
  r.N_R = random_smooth_field(g, 11);
  r.U_R = random_vector_field(g, 12);
  r.T_R = random_smooth_field(g, 13);
  r.Phi_R = random_smooth_field(g, 14);
  return r;
}

double dist(const RemainderSet& a, const RemainderSet& b) {
  return l2_norm(a.N_R - b.N_R) + l2_norm(a.U_R - b.U_R) + l2_norm(a.T_R - b.T_R) + l2_norm(a.Phi_R - b.Phi_R);
}

// Well-prepared run stored at the given cadence.
Trajectory run(double eps, double cadence, double tau = 0.1) {
  const auto& ps = profiles();
  const PhysParams p = base_params(1, eps);
  IntegrateOptions io;
  io.sample_interval = cadence;
  return integrate(compose_initial_data(ps, eps, nullptr, 1), tau, p, 2e-3, Scheme::rk4_explicit, io);
}

}  // namespace

TEST_CASE("remainders of composed data vanish", "[diagnostics][remainders]") {
  const auto& ps = profiles();
  for (int N : {1, 2}) {
    const double eps = 0.05;
    const FluidState s = compose_initial_data(ps, eps, nullptr, N);
    const auto r = compute_remainders(s, ps, eps, N);
    CHECK(dist(r, RemainderSet::zeros(ps.grid)) <= 1e-12);
    CHECK(r.order == N);
    CHECK(r.epsilon == eps);
  }
}

TEST_CASE("remainder extraction inverts initial-data composition", "[diagnostics][remainders]") {
  const auto& ps = profiles();
  for (auto [eps, N] : {std::pair{0.05, 1}, std::pair{0.01, 2}}) {
    const auto r0 = planted(ps.grid, eps, N);
    const auto r = compute_remainders(compose_initial_data(ps, eps, &r0, N), ps, eps, N);
    INFO("eps " << eps << " N " << N);
    CHECK(dist(r, r0) <= 1e-12 * std::pow(eps, -N) * 1e-2 + 1e-12);
    CHECK(dist(r, r0) <= 1e-9 * dist(r0, RemainderSet::zeros(ps.grid)));
  }
  // Linearity: doubling the planted remainder doubles every extracted field.
  const double eps = 0.05;
  const auto r0 = planted(ps.grid, eps, 1);
  auto r2 = r0;
  r2 *= 2.0;
  const auto a = compute_remainders(compose_initial_data(ps, eps, &r0, 1), ps, eps, 1);
  const auto b = compute_remainders(compose_initial_data(ps, eps, &r2, 1), ps, eps, 1);
  auto twice = a;
  twice *= 2.0;
  CHECK(dist(b, twice) <= 1e-11);
  CHECK_THROWS_AS(compute_remainders(compose_initial_data(ps, eps), ps, 0.0), UsageError);
  CHECK_THROWS_AS(compute_remainders(compose_initial_data(ps, eps), ps, eps, 3), DependencyError);
}

TEST_CASE("potential identity holds for Poisson-consistent states", "[diagnostics][potential]") {
  const auto& ps = profiles();
  const double eps = 0.05;
  const PhysParams p = base_params(1, eps);
  const auto r0 = planted(ps.grid, eps, 1);
  const FluidState s = finalize_state(compose_initial_data(ps, eps, &r0, 1), p);
  const auto r = compute_remainders(s, ps, eps, 1);
  CHECK(potential_residual(r, ps) <= 1e-8);

  auto bad = r;
  bad.Phi_R *= 2.0;
  CHECK(potential_residual(bad, ps) > 0.1);

  const auto z = RemainderSet::zeros(ps.grid, eps, 1);
  CHECK(potential_residual(z, ScalarField::zeros(ps.grid), eps) == 0.0);

  for (const auto& st : run(eps, 0.02).states) CHECK(potential_residual(compute_remainders(st, ps, eps, 1), ps) <= 1e-8);
}

TEST_CASE("continuity residual is second order in the output cadence", "[diagnostics][continuity]") {
  const auto& ps = profiles();
  const double eps = 0.05;
  const auto coarse = run(eps, 0.01);
  const auto fine = run(eps, 0.005);
  REQUIRE(coarse.status == RunStatus::completed);
  REQUIRE(fine.status == RunStatus::completed);
  auto rem = [&](const Trajectory& tr) {
    std::vector<RemainderSet> rs;
    for (const auto& s : tr.states) rs.push_back(compute_remainders(s, ps, eps, 1));
    return rs;
  };
  const auto rc = continuity_residual(rem(coarse), ps);
  const auto rf = continuity_residual(rem(fine), ps);
  double num = 0.0, den = 0.0;
  for (const auto& pc : rc)
    for (const auto& pf : rf)
      if (std::abs(pc.t - pf.t) < 1e-12) {
        num += pc.residual;
        den += pf.residual;
      }
  REQUIRE(den > 0.0);
  INFO("cadence ratio " << num / den);
  CHECK(num / den >= 3.0);
  CHECK(num / den <= 5.0);
  CHECK_THROWS_AS(continuity_residual(std::vector<RemainderSet>(2, RemainderSet::zeros(ps.grid, eps, 1)), ps),
                  UsageError);
}

TEST_CASE("continuity residual localises a planted fault", "[diagnostics][continuity]") {
  const auto& ps = profiles();
  const double eps = 0.05;
  const auto tr = run(eps, 0.01);
  std::vector<RemainderSet> rs;
  for (const auto& s : tr.states) rs.push_back(compute_remainders(s, ps, eps, 1));
  const auto clean = continuity_residual(rs, ps);
  const std::size_t j = 5;
  rs[j].N_R += random_smooth_field(ps.grid, 99);
  const auto dirty = continuity_residual(rs, ps);
  // Interior index i corresponds to sample i + 1; centred differences spread
  // the fault over samples j - 1, j, j + 1.
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const std::size_t sample = i + 1;
    if (sample + 1 >= j && sample <= j + 1)
      CHECK(dirty[i].residual > 10.0 * clean[i].residual);
    else
      CHECK(dirty[i].residual == clean[i].residual);
  }
}

TEST_CASE("zero remainders on a trivial hierarchy give zero continuity residual", "[diagnostics][continuity]") {
  const Grid g = make_grid(2, 16);
  InitialDataSpec spec;
  spec.kind = "rest";
  const auto d = make_initial_data(g, spec);
  BuildOptions opt;
  opt.hierarchy.samples = 10;
  const auto ps = build_profiles(d.u, d.T, 0.1, base_params(1, 1.0), opt);
  std::vector<RemainderSet> rs;
  for (int j = 0; j < 5; ++j) {
    rs.push_back(RemainderSet::zeros(g, 0.1, 1));
    rs.back().t = 0.02 * j;
  }
  for (const auto& p : continuity_residual(rs, ps)) CHECK(p.residual == 0.0);
  for (double v : triple_norm_series(rs, 0.05).triple_norm) CHECK(v == 0.0);
}

TEST_CASE("triple norm series scales and reduces to the group norm", "[diagnostics][triple]") {
  const auto& ps = profiles();
  std::vector<RemainderSet> rs{planted(ps.grid, 0.1, 1), planted(ps.grid, 0.1, 1)};
  rs[1].t = 0.01;
  rs[1] *= -3.0;
  const auto d0 = triple_norm_series(rs, 0.0);
  for (std::size_t j = 0; j < rs.size(); ++j) {
    const auto& r = rs[j];
    const double group = std::sqrt(std::pow(h3_norm(r.N_R), 2) + std::pow(h3_norm(r.U_R), 2) +
                                   std::pow(h3_norm(r.T_R), 2) + std::pow(h3_norm(grad(r.Phi_R)), 2));
    CHECK(d0.triple_norm[j] == Catch::Approx(group).epsilon(1e-13));
  }
  const auto d = triple_norm_series(rs, 0.05, 0.5 * (triple_norm(rs[0], 0.05) + triple_norm(rs[1], 0.05)));
  CHECK(d.triple_norm[1] == Catch::Approx(3.0 * d.triple_norm[0]).epsilon(1e-13));
  REQUIRE(d.first_crossing.has_value());
  CHECK(*d.first_crossing == 1);
  CHECK(d.max_triple_norm() == d.triple_norm[1]);
  const auto none = triple_norm_series(rs, 0.05, 1e30);
  CHECK_FALSE(none.first_crossing.has_value());
}

TEST_CASE("diagnostics of a well-prepared run", "[diagnostics][series]") {
  const auto& ps = profiles();
  const double eps = 0.05;
  const auto tr = run(eps, 0.01);
  const auto d = diagnose_run(tr.states, ps, eps, 0.05, 1e6, 1);
  REQUIRE(d.size() == tr.states.size());
  CHECK(d.err_n_H3[0] <= 1e-12);
  CHECK(d.err_u_H3[0] <= 1e-12);
  CHECK(std::isnan(d.cont_residual.front()));
  CHECK(std::isnan(d.cont_residual.back()));
  CHECK(std::isfinite(d.max_triple_norm()));
  CHECK(d.sup_joint_error() > 0.0);
  CHECK(DiagnosticsSeries::sup(d.mass_drift) <= 1e-12);
  CHECK(DiagnosticsSeries::sup(d.pot_residual) <= 1e-8);
  for (std::size_t j = 0; j < d.size(); ++j) CHECK(d.err_limit_H3[j] >= 0.0);

  const auto path = std::filesystem::temp_directory_path() / "qnsp_diag_test.csv";
  write_diagnostics_csv(path, d);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,triple_norm,err_n_H3,err_u_H3,err_T_H3,mass_drift,pot_residual,cont_residual");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == d.size());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(write_diagnostics_csv("/nonexistent/dir/x.csv", d), IoError);
}

TEST_CASE("conservation report", "[diagnostics][conservation]") {
  const Grid g = make_grid(2, 16);
  PhysParams p = base_params(1, 0.05);
  FluidState eq{0.0, ScalarField::constant(g, 1.0), VectorField::zeros(g), ScalarField::constant(g, 1.0),
                ScalarField::zeros(g)};
  IntegrateOptions io;
  io.sample_interval = 0.05;
  const auto rep0 = conservation_report(integrate(eq, 0.1, p, 0.01, Scheme::imex_cn, io));
  for (std::size_t j = 0; j < rep0.times.size(); ++j) {
    CHECK(rep0.mass_drift[j] == 0.0);
    CHECK(rep0.n_min[j] == Catch::Approx(1.0).margin(1e-15));
    CHECK(rep0.n_max[j] == Catch::Approx(1.0).margin(1e-15));
  }
  CHECK_FALSE(rep0.first_violation.has_value());

  const auto tr = run(0.05, 0.01);
  const auto rep = conservation_report(tr);
  CHECK(rep.max_mass_drift <= 1e-12);
  CHECK(rep.max_pot_residual <= 1e-10);

  // Density leaving (1/2, 3/2) is flagged at the first offending sample.
  FluidState hot = eq;
  hot.n = ScalarField::from_function(g, [](const std::array<double, 3>& x) { return 1.0 + 0.6 * std::cos(x[0]); });
  hot.phi = poisson_solve(hot.n, p.epsilon);
  const auto rep2 = conservation_report({eq, hot}, p.epsilon);
  REQUIRE(rep2.first_violation.has_value());
  CHECK(*rep2.first_violation == 1);
  CHECK_THROWS_AS(conservation_report(std::vector<FluidState>{}, 0.1), UsageError);
}
