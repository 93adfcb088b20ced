#pragma once

// Machine-readable ladder record and its JSON form.

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnsp/diagnostics/series.hpp"
#include "qnsp/harness/fit.hpp"
#include "qnsp/solver/integrate.hpp"

namespace qnsp {

inline constexpr int kRunRecordSchema = 1;
inline constexpr const char* kDomainNote =
    "periodic torus surrogate for the whole-space problem; errors are measured on the torus";

struct RunEntry {
  double epsilon = 0.0;
  RunStatus status = RunStatus::completed;
  std::string message;
  double wall_s = 0.0;
  double dt = 0.0;
  double dt_report = 0.0;  ///< stability report of the chosen scheme
  double t_reached = 0.0;
  double err_n_H3 = 0.0;  ///< sup over samples
  double err_u_H3 = 0.0;
  double err_T_H3 = 0.0;
  double err_joint_H3 = 0.0;
  double err_limit_H3 = 0.0;
  double triple_norm_max = 0.0;
  double triple_norm_t0 = 0.0;
  DiagnosticsSeries diagnostics;
};

struct RateFit {
  FitResult fit;
  bool confirming = false;  ///< passes the R^2 and floor gates
  std::string note;
};

struct NullExperiment {
  double floor = 0.0;
  std::vector<double> errors;
  std::optional<FitResult> fit;
  bool rejected = true;
};

struct RunRecord {
  int schema_version = kRunRecordSchema;
  nlohmann::json config;
  std::string domain_note = kDomainNote;
  int order = 1;
  std::optional<double> c_tilde;
  std::vector<RunEntry> entries;
  std::map<std::string, RateFit> fits;  ///< keys: joint, n, u, T
  std::optional<NullExperiment> null_experiment;
  std::optional<double> triple_norm_ratio;  ///< max over min of triple_norm_max
  double profile_wall_s = 0.0;
};

namespace detail {

inline nlohmann::json num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

inline double num_from(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

inline nlohmann::json vec(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

inline std::vector<double> vec_from(const nlohmann::json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(num_from(x));
  return v;
}

inline nlohmann::json fit_json(const FitResult& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"points", f.points}};
}

inline FitResult fit_from(const nlohmann::json& j) {
  return {j.at("slope").get<double>(), j.at("intercept").get<double>(), j.at("r2").get<double>(),
          j.at("points").get<std::size_t>()};
}

}  // namespace detail

inline nlohmann::json to_json(const DiagnosticsSeries& d) {
  using detail::vec;
  nlohmann::json j{{"epsilon", d.epsilon},
                   {"order", d.order},
                   {"hbar", d.hbar},
                   {"t", vec(d.times)},
                   {"triple_norm", vec(d.triple_norm)},
                   {"err_n_H3", vec(d.err_n_H3)},
                   {"err_u_H3", vec(d.err_u_H3)},
                   {"err_T_H3", vec(d.err_T_H3)},
                   {"err_limit_H3", vec(d.err_limit_H3)},
                   {"mass_drift", vec(d.mass_drift)},
                   {"pot_residual", vec(d.pot_residual)},
                   {"cont_residual", vec(d.cont_residual)}};
  j["c_tilde"] = d.c_tilde ? nlohmann::json(*d.c_tilde) : nlohmann::json(nullptr);
  j["first_crossing"] = d.first_crossing ? nlohmann::json(*d.first_crossing) : nlohmann::json(nullptr);
  return j;
}

inline DiagnosticsSeries diagnostics_from_json(const nlohmann::json& j) {
  using detail::vec_from;
  DiagnosticsSeries d;
  d.epsilon = j.at("epsilon").get<double>();
  d.order = j.at("order").get<int>();
  d.hbar = j.at("hbar").get<double>();
  d.times = vec_from(j.at("t"));
  d.triple_norm = vec_from(j.at("triple_norm"));
  d.err_n_H3 = vec_from(j.at("err_n_H3"));
  d.err_u_H3 = vec_from(j.at("err_u_H3"));
  d.err_T_H3 = vec_from(j.at("err_T_H3"));
  d.err_limit_H3 = vec_from(j.at("err_limit_H3"));
  d.mass_drift = vec_from(j.at("mass_drift"));
  d.pot_residual = vec_from(j.at("pot_residual"));
  d.cont_residual = vec_from(j.at("cont_residual"));
  if (!j.at("c_tilde").is_null()) d.c_tilde = j.at("c_tilde").get<double>();
  if (!j.at("first_crossing").is_null()) d.first_crossing = j.at("first_crossing").get<std::size_t>();
  return d;
}

inline nlohmann::json to_json(const RunRecord& r) {
  using detail::num;
  nlohmann::json j;
  j["format"] = "qnsp-run-record";
  j["schema_version"] = r.schema_version;
  j["config"] = r.config;
  j["domain_note"] = r.domain_note;
  j["order"] = r.order;
  j["c_tilde"] = r.c_tilde ? nlohmann::json(*r.c_tilde) : nlohmann::json(nullptr);
  j["profile_wall_s"] = r.profile_wall_s;
  j["runs"] = nlohmann::json::array();
  for (const auto& e : r.entries) {
    j["runs"].push_back({{"epsilon", e.epsilon},
                         {"status", to_string(e.status)},
                         {"message", e.message},
                         {"wall_s", e.wall_s},
                         {"dt", e.dt},
                         {"dt_report", e.dt_report},
                         {"t_reached", e.t_reached},
                         {"err_n_H3", num(e.err_n_H3)},
                         {"err_u_H3", num(e.err_u_H3)},
                         {"err_T_H3", num(e.err_T_H3)},
                         {"err_joint_H3", num(e.err_joint_H3)},
                         {"err_limit_H3", num(e.err_limit_H3)},
                         {"triple_norm_max", num(e.triple_norm_max)},
                         {"triple_norm_t0", num(e.triple_norm_t0)},
                         {"diagnostics", to_json(e.diagnostics)}});
  }
  j["fits"] = nlohmann::json::object();
  for (const auto& [k, f] : r.fits)
    j["fits"][k] = {{"fit", detail::fit_json(f.fit)}, {"confirming", f.confirming}, {"note", f.note}};
  if (r.null_experiment) {
    const auto& n = *r.null_experiment;
    j["null_experiment"] = {{"floor", n.floor},
                            {"errors", detail::vec(n.errors)},
                            {"fit", n.fit ? detail::fit_json(*n.fit) : nlohmann::json(nullptr)},
                            {"rejected", n.rejected}};
  } else {
    j["null_experiment"] = nullptr;
  }
  j["triple_norm_ratio"] = r.triple_norm_ratio ? nlohmann::json(*r.triple_norm_ratio) : nlohmann::json(nullptr);
  return j;
}

inline RunRecord run_record_from_json(const nlohmann::json& j) {
  using detail::num_from;
  RunRecord r;
  try {
    if (j.at("format").get<std::string>() != "qnsp-run-record") throw ConfigurationError("not a run record");
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kRunRecordSchema)
      throw ConfigurationError("unsupported run record schema " + std::to_string(r.schema_version));
    r.config = j.at("config");
    r.domain_note = j.at("domain_note").get<std::string>();
    r.order = j.at("order").get<int>();
    if (!j.at("c_tilde").is_null()) r.c_tilde = j.at("c_tilde").get<double>();
    r.profile_wall_s = j.at("profile_wall_s").get<double>();
    for (const auto& e : j.at("runs")) {
      RunEntry x;
      x.epsilon = e.at("epsilon").get<double>();
      x.status = run_status_from_string(e.at("status").get<std::string>());
      x.message = e.at("message").get<std::string>();
      x.wall_s = e.at("wall_s").get<double>();
      x.dt = e.at("dt").get<double>();
      x.dt_report = e.at("dt_report").get<double>();
      x.t_reached = e.at("t_reached").get<double>();
      x.err_n_H3 = num_from(e.at("err_n_H3"));
      x.err_u_H3 = num_from(e.at("err_u_H3"));
      x.err_T_H3 = num_from(e.at("err_T_H3"));
      x.err_joint_H3 = num_from(e.at("err_joint_H3"));
      x.err_limit_H3 = num_from(e.at("err_limit_H3"));
      x.triple_norm_max = num_from(e.at("triple_norm_max"));
      x.triple_norm_t0 = num_from(e.at("triple_norm_t0"));
      x.diagnostics = diagnostics_from_json(e.at("diagnostics"));
      r.entries.push_back(std::move(x));
    }
    for (auto it = j.at("fits").begin(); it != j.at("fits").end(); ++it)
      r.fits[it.key()] = {detail::fit_from(it.value().at("fit")), it.value().at("confirming").get<bool>(),
                          it.value().at("note").get<std::string>()};
    if (!j.at("null_experiment").is_null()) {
      const auto& n = j.at("null_experiment");
      NullExperiment ne;
      ne.floor = n.at("floor").get<double>();
      ne.errors = detail::vec_from(n.at("errors"));
      if (!n.at("fit").is_null()) ne.fit = detail::fit_from(n.at("fit"));
      ne.rejected = n.at("rejected").get<bool>();
      r.null_experiment = ne;
    }
    if (!j.at("triple_norm_ratio").is_null()) r.triple_norm_ratio = j.at("triple_norm_ratio").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("malformed run record: ") + e.what());
  }
  return r;
}

}  // namespace qnsp
