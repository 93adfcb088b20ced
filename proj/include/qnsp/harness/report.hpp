#pragma once

// Files written for a ladder record:
//   ladder_summary.csv   epsilon,err_n_H3,err_u_H3,err_T_H3,triple_norm_max,status,wall_s
//   run_record.json      the full record
//   diagnostics/eps_<i>.csv  per-run diagnostics table

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "qnsp/harness/record.hpp"

namespace qnsp {

inline constexpr const char* kSummaryHeader = "epsilon,err_n_H3,err_u_H3,err_T_H3,triple_norm_max,status,wall_s";

inline std::filesystem::path diagnostics_path(const std::filesystem::path& outdir, std::size_t i) {
  char name[32];
  std::snprintf(name, sizeof name, "eps_%02zu.csv", i);
  return outdir / "diagnostics" / name;
}

inline void write_summary_csv(const std::filesystem::path& path, const RunRecord& r) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write ladder summary", path.string());
  out.precision(17);
  out << kSummaryHeader << '\n';
  for (const auto& e : r.entries)
    out << e.epsilon << ',' << e.err_n_H3 << ',' << e.err_u_H3 << ',' << e.err_T_H3 << ',' << e.triple_norm_max
        << ',' << to_string(e.status) << ',' << e.wall_s << '\n';
  if (!out) throw IoError("failed while writing ladder summary", path.string());
}

inline void write_run_record(const std::filesystem::path& path, const RunRecord& r) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write run record", path.string());
  out << to_json(r).dump(2) << '\n';
  if (!out) throw IoError("failed while writing run record", path.string());
}

inline RunRecord load_run_record(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open run record", path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed run record (") + e.what() + ")", path.string());
  }
  return run_record_from_json(j);
}

inline void emit_report(const RunRecord& r, const std::filesystem::path& outdir) {
  std::error_code ec;
  std::filesystem::create_directories(outdir / "diagnostics", ec);
  if (ec) throw IoError("cannot create report directory: " + ec.message(), outdir.string());
  write_summary_csv(outdir / "ladder_summary.csv", r);
  write_run_record(outdir / "run_record.json", r);
  for (std::size_t i = 0; i < r.entries.size(); ++i)
    write_diagnostics_csv(diagnostics_path(outdir, i), r.entries[i].diagnostics);
}

}  // namespace qnsp
