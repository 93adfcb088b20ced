#pragma once

// A profile directory holds manifest.json and, per order k and sample j, a
// checkpoint directory order_k/sample_jjjjj with the extra divergence.snap.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "qnsp/hierarchy/profile_set.hpp"
#include "qnsp/solver/checkpoint.hpp"

namespace qnsp {

namespace detail {

inline std::filesystem::path sample_dir(const std::filesystem::path& dir, int k, std::size_t j) {
  char name[32];
  std::snprintf(name, sizeof name, "sample_%05zu", j);
  return dir / ("order_" + std::to_string(k)) / name;
}

}  // namespace detail

inline void write_profiles(const std::filesystem::path& dir, const ProfileSet& ps) {
  if (ps.empty()) throw UsageError("no profiles to write");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create profile directory: " + ec.message(), dir.string());
  for (int k = 0; k <= ps.order(); ++k) {
    const auto& L = ps.level(k);
    for (std::size_t j = 0; j < ps.samples(); ++j) {
      const auto sd = detail::sample_dir(dir, k, j);
      FluidState s{ps.time(j), k == 0 ? ScalarField::zeros(ps.grid) : L.n[j], L.u[j], L.T[j], L.phi[j]};
      write_checkpoint(sd, s, ps.params, Scheme::rk4_explicit);
      write_snapshot((sd / "divergence.snap").string(), L.divergence[j]);
    }
  }
  const nlohmann::json manifest = {{"format", "qnsp-profiles"},  {"version", 1},
                                   {"order", ps.order()},        {"samples", ps.samples()},
                                   {"t0", ps.t0()},              {"spacing", ps.spacing()},
                                   {"params", params_to_json(ps.params)}};
  std::ofstream out(dir / "manifest.json");
  if (!out) throw IoError("cannot write profile manifest", (dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

inline ProfileSet read_profiles(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw IoError("missing profile manifest", (dir / "manifest.json").string());
  nlohmann::json m;
  try {
    in >> m;
    if (m.at("format").get<std::string>() != "qnsp-profiles" || m.at("version").get<int>() != 1)
      throw IoError("unsupported profile manifest", (dir / "manifest.json").string());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed profile manifest (") + e.what() + ")", (dir / "manifest.json").string());
  }
  ProfileSet ps;
  ps.params = params_from_json(m.at("params"));
  const int order = m.at("order").get<int>();
  const auto samples = m.at("samples").get<std::size_t>();
  const double t0 = m.at("t0").get<double>();
  const double h = m.at("spacing").get<double>();
  for (int k = 0; k <= order; ++k) {
    ProfileLevel L;
    L.order = k;
    L.n = SampledSeries<ScalarField>(t0, h);
    L.u = SampledSeries<VectorField>(t0, h);
    L.T = SampledSeries<ScalarField>(t0, h);
    L.phi = SampledSeries<ScalarField>(t0, h);
    L.divergence = SampledSeries<ScalarField>(t0, h);
    for (std::size_t j = 0; j < samples; ++j) {
      const auto sd = detail::sample_dir(dir, k, j);
      const Checkpoint c = read_checkpoint(sd);
      if (k == 0 && j == 0) ps.grid = c.state.grid();
      L.n.push_back(c.state.n);
      L.u.push_back(c.state.u);
      L.T.push_back(c.state.T);
      L.phi.push_back(c.state.phi);
      L.divergence.push_back(read_snapshot((sd / "divergence.snap").string()).scalar());
    }
    ps.levels.push_back(std::move(L));
  }
  return ps;
}

}  // namespace qnsp
