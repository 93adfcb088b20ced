#pragma once

// A checkpoint directory holds n.snap, u.snap, T.snap, phi.snap and
// manifest.json with the time, scheme and physical parameters.

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "qnsp/solver/params.hpp"
#include "qnsp/spectral/snapshot.hpp"

namespace qnsp {

inline nlohmann::json params_to_json(const PhysParams& p) {
  return {{"epsilon", p.epsilon}, {"hbar", p.hbar},   {"mu", p.mu},
          {"lambda", p.lambda},   {"kappa", p.kappa}, {"order", p.order}};
}

inline PhysParams params_from_json(const nlohmann::json& j) {
  PhysParams p;
  p.epsilon = j.value("epsilon", p.epsilon);
  p.hbar = j.value("hbar", p.hbar);
  p.mu = j.value("mu", p.mu);
  p.lambda = j.value("lambda", p.lambda);
  p.kappa = j.value("kappa", p.kappa);
  p.order = j.value("order", p.order);
  return p;
}

struct Checkpoint {
  FluidState state;
  PhysParams params;
  Scheme scheme = Scheme::rk4_explicit;
};

inline void write_checkpoint(const std::filesystem::path& dir, const FluidState& s, const PhysParams& p,
                             Scheme scheme) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create checkpoint directory: " + ec.message(), dir.string());
  write_snapshot((dir / "n.snap").string(), s.n);
  write_snapshot((dir / "u.snap").string(), s.u);
  write_snapshot((dir / "T.snap").string(), s.T);
  write_snapshot((dir / "phi.snap").string(), s.phi);
  nlohmann::json manifest = {{"format", "qnsp-checkpoint"}, {"version", 1},       {"t", s.t},
                             {"scheme", to_string(scheme)}, {"params", params_to_json(p)}};
  std::ofstream out(dir / "manifest.json");
  if (!out) throw IoError("cannot write checkpoint manifest", (dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

inline Checkpoint read_checkpoint(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw IoError("missing checkpoint manifest", (dir / "manifest.json").string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed checkpoint manifest: ") + e.what(), (dir / "manifest.json").string());
  }
  Checkpoint c;
  c.params = params_from_json(manifest.at("params"));
  c.scheme = scheme_from_string(manifest.at("scheme").get<std::string>());
  c.state.t = manifest.at("t").get<double>();
  c.state.n = read_snapshot((dir / "n.snap").string()).scalar();
  c.state.u = read_snapshot((dir / "u.snap").string()).vector();
  c.state.T = read_snapshot((dir / "T.snap").string()).scalar();
  c.state.phi = read_snapshot((dir / "phi.snap").string()).scalar();
  return c;
}

}  // namespace qnsp
