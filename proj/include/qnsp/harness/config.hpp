#pragma once

// Ladder experiment configuration, read from a JSON file.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnsp/hierarchy/correction.hpp"
#include "qnsp/hierarchy/initial_data.hpp"
#include "qnsp/log.hpp"
#include "qnsp/solver/checkpoint.hpp"

namespace qnsp {

struct GridSpec {
  int dim = 2;
  int points = 64;
  double box_length = 2.0 * std::numbers::pi;

  Grid make() const { return make_grid(dim, points, box_length); }
};

struct PlantedRemainder {
  bool enabled = false;
  double velocity_amplitude = 1.0;  ///< divergence-free U_R0, max modulus
  double temperature_amplitude = 0.5;
  double density_amplitude = 0.0;
  std::uint64_t seed = 7;
};

struct FitGate {
  double min_r2 = 0.98;
  double floor_factor = 10.0;  ///< runs within this factor of the floor are rejected
};

struct LadderConfig {
  GridSpec grid;
  PhysParams params;  ///< epsilon is overridden per run
  std::vector<double> epsilons{4e-2, 2e-2, 1e-2, 5e-3};
  double tau = 0.25;
  std::optional<double> profile_horizon;  ///< defaults to tau
  int profile_samples = 250;
  int profile_substeps = 1;
  double sample_interval = 0.01;
  Scheme scheme = Scheme::rk4_explicit;
  double dt_max = 2e-3;          ///< user step bound
  double dt_fraction = 0.5;      ///< fraction of the stability report
  InitialDataSpec initial;
  PlantedRemainder remainder;
  ForcingMethod forcing = ForcingMethod::automatic;
  std::optional<double> c_tilde;
  FitGate gate;
  bool null_experiment = true;
  std::optional<double> wall_limit_s;
  int workers = 1;
  std::string output_dir = "ladder_out";

  double horizon() const { return profile_horizon.value_or(tau); }

  void validate() const {
    params.validate(false);
    if (grid.dim < 2 || grid.dim > 3) throw ConfigurationError("grid.dim must be 2 or 3");
    if (grid.points < 8 || grid.points % 2) throw ConfigurationError("grid.points must be even and >= 8");
    if (!(grid.box_length > 0.0)) throw ConfigurationError("grid.box_length must be positive");
    if (epsilons.empty()) throw ConfigurationError("epsilons must not be empty");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
      if (!(epsilons[i] > 0.0)) throw ConfigurationError("epsilons must be positive");
      if (i > 0 && !(epsilons[i] < epsilons[i - 1])) throw ConfigurationError("epsilons must be strictly decreasing");
    }
    if (!(tau > 0.0)) throw ConfigurationError("tau must be positive");
    if (!(horizon() >= tau)) throw ConfigurationError("tau must not exceed the profile horizon");
    if (profile_samples < 1 || profile_substeps < 1) throw ConfigurationError("profile sampling must be positive");
    if (!(sample_interval > 0.0)) throw ConfigurationError("sample_interval must be positive");
    const double h = horizon() / profile_samples;
    const double ratio = sample_interval / h;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
      throw ConfigurationError("sample_interval must be a multiple of the profile spacing");
    if (!(dt_max > 0.0) || !(dt_fraction > 0.0) || dt_fraction > 1.0)
      throw ConfigurationError("dt_max must be positive and dt_fraction in (0, 1]");
    if (workers < 1) throw ConfigurationError("workers must be >= 1");
    if (c_tilde && !(*c_tilde > 0.0)) throw ConfigurationError("c_tilde must be positive");
    if (!(gate.min_r2 > 0.0 && gate.min_r2 <= 1.0) || !(gate.floor_factor >= 1.0))
      throw ConfigurationError("fit gate must have r2 in (0, 1] and floor factor >= 1");
    if (epsilons.size() >= 3) {
      for (std::size_t i = 2; i < epsilons.size(); ++i) {
        const double r0 = epsilons[1] / epsilons[0];
        const double r = epsilons[i] / epsilons[i - 1];
        if (std::abs(r - r0) > 1e-6 * r0) {
          log_warning("epsilon list is not geometric");
          break;
        }
      }
    }
  }

  /// Worker count after the DEBYE_LADDER_WORKERS override.
  int effective_workers() const {
    if (const char* env = std::getenv("DEBYE_LADDER_WORKERS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v < 1) throw ConfigurationError("DEBYE_LADDER_WORKERS must be a positive integer");
      return static_cast<int>(v);
    }
    return workers;
  }
};

namespace detail {

template <class T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> keys, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) throw ConfigurationError("unknown key '" + it.key() + "' in " + where);
  }
}

}  // namespace detail

inline nlohmann::json to_json(const LadderConfig& c) {
  nlohmann::json j;
  j["grid"] = {{"dim", c.grid.dim}, {"points", c.grid.points}, {"box_length", c.grid.box_length}};
  j["params"] = {{"hbar", c.params.hbar}, {"mu", c.params.mu}, {"lambda", c.params.lambda}, {"kappa", c.params.kappa}};
  j["order"] = c.params.order;
  j["epsilons"] = c.epsilons;
  j["tau"] = c.tau;
  if (c.profile_horizon) j["profile_horizon"] = *c.profile_horizon;
  j["profile_samples"] = c.profile_samples;
  j["profile_substeps"] = c.profile_substeps;
  j["sample_interval"] = c.sample_interval;
  j["scheme"] = to_string(c.scheme);
  j["dt_max"] = c.dt_max;
  j["dt_fraction"] = c.dt_fraction;
  j["initial"] = {{"kind", c.initial.kind},
                  {"velocity_amplitude", c.initial.velocity_amplitude},
                  {"temperature_mean", c.initial.temperature_mean},
                  {"temperature_amplitude", c.initial.temperature_amplitude},
                  {"seed", c.initial.seed},
                  {"max_wavenumber", c.initial.max_wavenumber}};
  j["remainder"] = {{"enabled", c.remainder.enabled},
                    {"velocity_amplitude", c.remainder.velocity_amplitude},
                    {"temperature_amplitude", c.remainder.temperature_amplitude},
                    {"density_amplitude", c.remainder.density_amplitude},
                    {"seed", c.remainder.seed}};
  j["forcing"] = to_string(c.forcing);
  if (c.c_tilde) j["c_tilde"] = *c.c_tilde;
  j["fit_gate"] = {{"min_r2", c.gate.min_r2}, {"floor_factor", c.gate.floor_factor}};
  j["null_experiment"] = c.null_experiment;
  if (c.wall_limit_s) j["wall_limit_s"] = *c.wall_limit_s;
  j["workers"] = c.workers;
  j["output_dir"] = c.output_dir;
  return j;
}

inline LadderConfig ladder_config_from_json(const nlohmann::json& j) {
  using detail::read_opt;
  LadderConfig c;
  try {
    detail::reject_unknown(j,
                           {"grid", "params", "order", "epsilons", "tau", "profile_horizon", "profile_samples",
                            "profile_substeps", "sample_interval", "scheme", "dt_max", "dt_fraction", "initial",
                            "remainder", "forcing", "c_tilde", "fit_gate", "null_experiment", "wall_limit_s",
                            "workers", "output_dir"},
                           "ladder config");
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      detail::reject_unknown(g, {"dim", "points", "box_length"}, "grid");
      read_opt(g, "dim", c.grid.dim);
      read_opt(g, "points", c.grid.points);
      read_opt(g, "box_length", c.grid.box_length);
    }
    if (j.contains("params")) {
      const auto& p = j.at("params");
      detail::reject_unknown(p, {"hbar", "mu", "lambda", "kappa"}, "params");
      read_opt(p, "hbar", c.params.hbar);
      read_opt(p, "mu", c.params.mu);
      read_opt(p, "lambda", c.params.lambda);
      read_opt(p, "kappa", c.params.kappa);
    }
    read_opt(j, "order", c.params.order);
    read_opt(j, "epsilons", c.epsilons);
    read_opt(j, "tau", c.tau);
    if (j.contains("profile_horizon")) c.profile_horizon = j.at("profile_horizon").get<double>();
    read_opt(j, "profile_samples", c.profile_samples);
    read_opt(j, "profile_substeps", c.profile_substeps);
    read_opt(j, "sample_interval", c.sample_interval);
    if (j.contains("scheme")) c.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    read_opt(j, "dt_max", c.dt_max);
    read_opt(j, "dt_fraction", c.dt_fraction);
    if (j.contains("initial")) {
      const auto& i = j.at("initial");
      detail::reject_unknown(i,
                             {"kind", "velocity_amplitude", "temperature_mean", "temperature_amplitude", "seed",
                              "max_wavenumber"},
                             "initial");
      read_opt(i, "kind", c.initial.kind);
      read_opt(i, "velocity_amplitude", c.initial.velocity_amplitude);
      read_opt(i, "temperature_mean", c.initial.temperature_mean);
      read_opt(i, "temperature_amplitude", c.initial.temperature_amplitude);
      read_opt(i, "seed", c.initial.seed);
      read_opt(i, "max_wavenumber", c.initial.max_wavenumber);
    }
    if (j.contains("remainder")) {
      const auto& r = j.at("remainder");
      detail::reject_unknown(r, {"enabled", "velocity_amplitude", "temperature_amplitude", "density_amplitude", "seed"},
                             "remainder");
      read_opt(r, "enabled", c.remainder.enabled);
      read_opt(r, "velocity_amplitude", c.remainder.velocity_amplitude);
      read_opt(r, "temperature_amplitude", c.remainder.temperature_amplitude);
      read_opt(r, "density_amplitude", c.remainder.density_amplitude);
      read_opt(r, "seed", c.remainder.seed);
    }
    if (j.contains("forcing")) c.forcing = forcing_method_from_string(j.at("forcing").get<std::string>());
    if (j.contains("c_tilde")) c.c_tilde = j.at("c_tilde").get<double>();
    if (j.contains("fit_gate")) {
      const auto& f = j.at("fit_gate");
      detail::reject_unknown(f, {"min_r2", "floor_factor"}, "fit_gate");
      read_opt(f, "min_r2", c.gate.min_r2);
      read_opt(f, "floor_factor", c.gate.floor_factor);
    }
    read_opt(j, "null_experiment", c.null_experiment);
    if (j.contains("wall_limit_s")) c.wall_limit_s = j.at("wall_limit_s").get<double>();
    read_opt(j, "workers", c.workers);
    read_opt(j, "output_dir", c.output_dir);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("malformed ladder config: ") + e.what());
  }
  c.validate();
  return c;
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open", path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError("cannot parse " + path.string() + ": " + e.what());
  }
}

inline LadderConfig load_ladder_config(const std::filesystem::path& path) {
  return ladder_config_from_json(read_json_file(path));
}

}  // namespace qnsp
