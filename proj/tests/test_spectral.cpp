#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "oracles.hpp"

using namespace qnsp;
using Catch::Approx;
constexpr double pi = std::numbers::pi;

namespace {

ScalarField sin_x(const Grid& g) {
  return ScalarField::from_function(g, [](const auto& x) { return std::sin(x[0]); });
}

ScalarField from_poly(const Grid& g, const oracle::TrigPoly& p) {
  return ScalarField::from_function(g, [&](const auto& x) { return p(x); });
}

}  // namespace

TEST_CASE("make_grid builds the mode table and 2/3 mask") {
  const Grid g = make_grid(2, 64);
  CHECK(g.phys_size() == 64u * 64u);
  CHECK(g.dealias_cutoff() == 21);

  const Grid g1 = make_grid(1, 8);
  CHECK(g1.axis_wavenumbers() == std::vector<int>{0, 1, 2, 3, -4, -3, -2, -1});
  // r2c storage: the last axis holds k = 0..4, with k = 4 the Nyquist mode.
  CHECK(g1.spec_size() == 5u);
  CHECK(g1.is_nyquist(4));
  CHECK_FALSE(g1.is_kept(4));
  CHECK(g1.xi(0, 4) == 0.0);

  CHECK_THROWS_AS(make_grid(3, 7), ConfigurationError);
  CHECK_THROWS_AS(make_grid(2, 6), ConfigurationError);
  CHECK_THROWS_AS(make_grid(4, 16), ConfigurationError);
  CHECK_THROWS_AS(make_grid(2, 16, -1.0), ConfigurationError);
}

TEST_CASE("transform round trip is exact to 1e-13") {
  for (int d = 1; d <= 3; ++d) {
    const Grid g = make_grid(d, d == 3 ? 16 : 32);
    std::mt19937_64 rng(11 + d);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(g.phys_size());
    for (auto& x : v) x = u(rng);
    const auto back = ScalarField::from_physical(g, v).to_physical();
    CHECK(oracle::rel_l2(back, v) <= 1e-13);
  }
}

TEST_CASE("derivatives of trigonometric monomials are exact") {
  const Grid g = make_grid(1, 64);
  const ScalarField s = sin_x(g);
  const auto lap = laplacian(s).to_physical();
  const auto expect = oracle::sample(g, [](const auto& x) { return -std::sin(x[0]); });
  CHECK(oracle::max_abs_diff(lap, expect) <= 1e-12);

  const Grid g2 = make_grid(2, 32);
  const VectorField zero = grad(ScalarField::constant(g2, 3.5));
  for (const auto& c : zero)
    for (double v : c.to_physical()) CHECK(v == 0.0);
}

TEST_CASE("gradient agrees with a 6th-order finite-difference oracle") {
  const Grid g = make_grid(2, 256);
  const ScalarField f = random_smooth_field(g, 5);
  const auto values = f.to_physical();
  const VectorField df = grad(f);
  for (int a = 0; a < 2; ++a) {
    const auto ref = oracle::fd_first(g, values, a, 6);
    CHECK(oracle::rel_l2(df[a].to_physical(), ref) <= 1e-8);
  }
}

TEST_CASE("differentiate dispatches by kind and rejects rank mismatches") {
  const Grid g = make_grid(2, 16);
  const ScalarField f = random_smooth_field(g, 2);
  const VectorField v = random_vector_field(g, 3);
  CHECK(std::holds_alternative<VectorField>(differentiate(f, DiffKind::grad)));
  CHECK(std::holds_alternative<ScalarField>(differentiate(v, DiffKind::div)));
  CHECK(std::holds_alternative<TensorField>(differentiate(f, DiffKind::hessian)));
  CHECK(std::holds_alternative<VectorField>(differentiate(f, DiffKind::grad_laplacian)));
  CHECK_THROWS_AS(differentiate(f, DiffKind::div), UsageError);
  CHECK_THROWS_AS(differentiate(v, DiffKind::grad), UsageError);
  CHECK_THROWS_AS(differentiate(v, DiffKind::hessian), UsageError);
}

TEST_CASE("Nyquist modes are zeroed by differentiation") {
  const Grid g = make_grid(1, 8);
  ScalarField f(g);
  f[4] = 1.0;  // pure Nyquist cos(4x)
  const VectorField df = grad(f);
  const ScalarField lf = laplacian(f);
  for (const auto& c : df[0].coeffs()) CHECK(std::abs(c) == 0.0);
  for (const auto& c : lf.coeffs()) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("inverse Laplacian") {
  const Grid g = make_grid(1, 32);
  const ScalarField f = -sin_x(g);
  CHECK(oracle::max_abs_diff(inverse_laplacian(f).to_physical(), sin_x(g).to_physical()) <= 1e-13);
  for (double v : inverse_laplacian(ScalarField::zeros(g)).to_physical()) CHECK(v == 0.0);

  const Grid g2 = make_grid(2, 64);
  const ScalarField r = random_smooth_field(g2, 9);
  const ScalarField back = laplacian(inverse_laplacian(r));
  CHECK(oracle::rel_l2(back.to_physical(), r.to_physical()) <= 1e-12);
  CHECK(std::abs(inverse_laplacian(r).mean()) == 0.0);

  ScalarField shifted = r;
  shifted.set_mean(0.25);
  try {
    (void)inverse_laplacian(shifted);
    FAIL("expected a solvability error");
  } catch (const SolvabilityError& e) {
    CHECK(e.mean() == Approx(0.25));
  }
}

TEST_CASE("Leray projection") {
  const Grid g = make_grid(2, 32);
  const ScalarField psi = random_smooth_field(g, 21);
  const VectorField gradient = grad(psi);
  CHECK(l2_norm(leray_project(gradient)) <= 1e-12 * l2_norm(gradient));

  // Curl of a stream function is divergence-free.
  const VectorField curl(std::vector<ScalarField>{partial(psi, 1), -partial(psi, 0)});
  CHECK(l2_norm(leray_project(curl) - curl) <= 1e-12 * l2_norm(curl));

  const VectorField v = random_vector_field(g, 4);
  const VectorField pv = leray_project(v);
  CHECK(l2_norm(leray_project(pv) - pv) <= 1e-13 * l2_norm(pv));
  CHECK(l2_norm(div(pv)) <= 1e-12 * l2_norm(v));
  CHECK(l2_norm(gradient_part(v) + pv - v) <= 1e-13 * l2_norm(v));
}

TEST_CASE("dealiased products") {
  const Grid g = make_grid(2, 32);
  const ScalarField r = random_smooth_field(g, 8, {12, 8.0, true});
  ScalarField masked = r;
  masked.dealias();
  const ScalarField one = ScalarField::constant(g, 1.0);
  CHECK(oracle::rel_l2(dealiased_product(one, r).to_physical(), masked.to_physical()) <= 1e-14);

  const Grid g1 = make_grid(1, 16);
  const ScalarField s = sin_x(g1);
  const ScalarField c = ScalarField::from_function(g1, [](const auto& x) { return std::cos(x[0]); });
  const auto expect = oracle::sample(g1, [](const auto& x) { return 0.5 * std::sin(2.0 * x[0]); });
  CHECK(oracle::max_abs_diff(dealiased_product(s, c).to_physical(), expect) <= 1e-14);

  // Bandwidth <= cutoff / 2, so the product is resolved and unaliased.
  const auto pa = oracle::TrigPoly::random(2, 5, 31);
  const auto pb = oracle::TrigPoly::random(2, 5, 32);
  const auto conv = oracle::TrigPoly::convolve(pa, pb);
  const auto ref = oracle::sample(g, [&](const auto& x) { return oracle::TrigPoly::evaluate(conv, x); });
  const auto got = dealiased_product(from_poly(g, pa), from_poly(g, pb)).to_physical();
  CHECK(oracle::rel_l2(got, ref) <= 1e-12);

  CHECK_THROWS_AS(dealiased_product(r, sin_x(g1)), UsageError);
}

TEST_CASE("Sobolev norms") {
  for (int d = 1; d <= 3; ++d) {
    const Grid g = make_grid(d, 8);
    const double vol = std::pow(2.0 * pi, d);
    CHECK(sobolev_norm(ScalarField::constant(g, -2.0), 0.0) == Approx(2.0 * std::sqrt(vol)).epsilon(1e-14));
  }
  const Grid g1 = make_grid(1, 16);
  CHECK(sobolev_norm(sin_x(g1), 1.0) == Approx(std::sqrt(2.0 * pi)).epsilon(1e-14));
  CHECK_THROWS_AS(sobolev_norm(sin_x(g1), -1.0), UsageError);

  // ||f||_{H^2}^2 = ||f||^2 + 2||grad f||^2 + ||lap f||^2 with physical-space sums.
  const Grid g = make_grid(2, 32);
  const ScalarField f = random_smooth_field(g, 13, {4, 2.0, false});
  const auto fv = f.to_physical();
  const double l2f = oracle::l2_physical(g, fv);
  const double l2gx = oracle::l2_physical(g, grad(f)[0].to_physical());
  const double l2gy = oracle::l2_physical(g, grad(f)[1].to_physical());
  const double l2lap = oracle::l2_physical(g, laplacian(f).to_physical());
  const double termwise = l2f * l2f + 2.0 * (l2gx * l2gx + l2gy * l2gy) + l2lap * l2lap;
  CHECK(sobolev_norm_squared(f, 2.0) == Approx(termwise).epsilon(1e-10));
  CHECK(l2f == Approx(sobolev_norm(f, 0.0)).epsilon(1e-12));

  double prev = 0.0;
  for (double s : {0.0, 0.5, 1.0, 2.0, 3.0, 4.5}) {
    const double v = sobolev_norm(f, s);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("second derivatives on the torus: Hessian and Laplacian have equal L2 norms") {
  const Grid g = make_grid(2, 32);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const ScalarField f = random_smooth_field(g, 1000 + seed, {6, 3.0, true});
    const TensorField H = hessian(f);
    double hess2 = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) hess2 += std::pow(l2_norm(H(i, j)), 2);
    const double lap = l2_norm(laplacian(f));
    REQUIRE(std::abs(std::sqrt(hess2) - lap) <= 1e-10 * lap);
  }
}

TEST_CASE("triple norm") {
  const Grid g = make_grid(2, 16);
  CHECK(triple_norm(RemainderSet::zeros(g), 0.3) == 0.0);

  RemainderSet r = RemainderSet::zeros(g, 0.01, 1);
  r.N_R = random_smooth_field(g, 1);
  r.U_R = random_vector_field(g, 2);
  r.T_R = random_smooth_field(g, 3);
  r.Phi_R = random_smooth_field(g, 4);
  const double group = std::sqrt(h3_norm(r.N_R) * h3_norm(r.N_R) + std::pow(h3_norm(r.U_R), 2) +
                                 std::pow(h3_norm(r.T_R), 2) + std::pow(h3_norm(grad(r.Phi_R)), 2));
  CHECK(triple_norm(r, 0.0) == Approx(group).epsilon(1e-15));

  RemainderSet scaled = r;
  scaled *= -2.5;
  CHECK(triple_norm(scaled, 0.2) == Approx(2.5 * triple_norm(r, 0.2)).epsilon(1e-13));

  // N_R = sin x alone: every group is (1+1)^3 * ||sin x||^2 = 8 * 2 pi^2 on the 2-D box.
  RemainderSet single = RemainderSet::zeros(g);
  single.N_R = sin_x(g);
  const double unit = 8.0 * 2.0 * pi * pi;
  for (double h : {1.0, 0.5}) {
    const double closed = std::sqrt(unit * (1.0 + h * h + h * h * h * h));
    CHECK(triple_norm(single, h) == Approx(closed).epsilon(1e-13));
  }
  CHECK_THROWS_AS(triple_norm(r, -1.0), UsageError);
}

TEST_CASE("field snapshots round trip and reject corrupt files") {
  const auto dir = std::filesystem::temp_directory_path() / "qnsp_snapshot_test";
  std::filesystem::create_directories(dir);
  const Grid g = make_grid(2, 16, 3.0);
  const ScalarField f = random_smooth_field(g, 77);
  const VectorField v = random_vector_field(g, 78);
  write_snapshot((dir / "f.snap").string(), f);
  write_snapshot((dir / "v.snap").string(), v);

  const Snapshot sf = read_snapshot((dir / "f.snap").string());
  CHECK(sf.grid == g);
  CHECK(oracle::rel_l2(sf.scalar().to_physical(), f.to_physical()) <= 1e-14);
  const VectorField back = read_snapshot((dir / "v.snap").string()).vector();
  for (int a = 0; a < 2; ++a) CHECK(oracle::rel_l2(back[a].to_physical(), v[a].to_physical()) <= 1e-14);
  CHECK_THROWS_AS(sf.vector(), UsageError);

  {
    std::ofstream bad(dir / "bad.snap", std::ios::binary);
    bad << "NOTASNAPSHOT";
  }
  CHECK_THROWS_AS(read_snapshot((dir / "bad.snap").string()), IoError);
  {
    // Valid header, truncated payload.
    std::ifstream in(dir / "f.snap", std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    bytes.resize(bytes.size() - 8);
    std::ofstream out(dir / "short.snap", std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  CHECK_THROWS_AS(read_snapshot((dir / "short.snap").string()), IoError);
  CHECK_THROWS_AS(read_snapshot((dir / "missing.snap").string()), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("random fields are deterministic, real and band-limited") {
  const Grid g = make_grid(2, 32);
  const ScalarField a = random_smooth_field(g, 42);
  const ScalarField b = random_smooth_field(g, 42);
  CHECK(oracle::max_abs_diff(a.to_physical(), b.to_physical()) == 0.0);
  CHECK(std::abs(a.mean()) == 0.0);
  const ScalarField bounded = random_bounded_field(g, 5, 0.1);
  CHECK(std::max(std::abs(min_value(bounded)), std::abs(max_value(bounded))) == Approx(0.1).epsilon(1e-12));
}
