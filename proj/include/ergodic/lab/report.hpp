#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "models.hpp"
#include "tiling.hpp"

namespace ergodic::lab {

inline constexpr const char* kCsvHeader = "stage,eps,mass_within_eps,max_tile,mean_tile,wall_ms";

inline std::string format_double(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

inline double parse_double(const std::string& s) {
  double x = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw Error(ErrorKind::Parse, "bad number '" + s + "'");
  return x;
}

// wall_ms is written as 0 unless timing is requested, keeping reruns byte-identical.
inline void write_csv(std::ostream& out, const ConvergenceReport& rep, bool timing) {
  out << kCsvHeader << '\n';
  for (const auto& s : rep.stages)
    out << s.stage << ',' << format_double(s.eps) << ',' << format_double(s.mass_within_eps) << ',' << s.max_tile
        << ',' << format_double(s.mean_tile) << ',' << format_double(timing ? s.wall_ms : 0.0) << '\n';
}

inline std::vector<StageStats> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw Error(ErrorKind::Parse, "missing CSV header");
  std::vector<StageStats> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
    if (cols.size() != 6) throw Error(ErrorKind::Parse, "expected 6 columns in '" + line + "'");
    StageStats s;
    s.stage = static_cast<std::size_t>(std::stoull(cols[0]));
    s.eps = parse_double(cols[1]);
    s.mass_within_eps = parse_double(cols[2]);
    s.max_tile = static_cast<std::size_t>(std::stoull(cols[3]));
    s.mean_tile = parse_double(cols[4]);
    s.wall_ms = parse_double(cols[5]);
    rows.push_back(s);
  }
  return rows;
}

inline nlohmann::json summary_json(const ConvergenceReport& rep, const nlohmann::json& config, std::uint64_t seed) {
  nlohmann::json j;
  j["config"] = config;
  j["seed"] = seed;
  j["success"] = rep.success;
  j["target"] = rep.target;
  j["delta"] = rep.delta;
  j["truncation_level"] = rep.truncation_level;
  j["stages"] = rep.stages.size();
  if (!rep.stages.empty()) {
    const auto& s = rep.stages.back();
    j["final"] = {{"mass_within_eps", s.mass_within_eps}, {"covered_mass", s.covered_mass},
                  {"frontier_mass", s.frontier_mass},     {"max_tile", s.max_tile},
                  {"mean_tile", s.mean_tile},             {"mean_drift", s.mean_drift}};
  }
  auto& stalls = j["stalls"] = nlohmann::json::array();
  for (const auto& d : rep.stalls)
    stalls.push_back({{"stage", d.stage}, {"components", d.components}, {"room_violations", d.room_violations}});
  return j;
}

// Writes <dir>/report.csv and <dir>/summary.json.
inline void emit_report(const ConvergenceReport& rep, const std::string& dir, const nlohmann::json& config,
                        std::uint64_t seed, bool timing = false) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir + ": " + ec.message());
  auto open = [](const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    return out;
  };
  std::string csv = dir + "/report.csv", js = dir + "/summary.json";
  {
    auto out = open(csv);
    write_csv(out, rep, timing);
    if (!out) throw Error(ErrorKind::Io, "write failed for " + csv);
  }
  auto out = open(js);
  out << summary_json(rep, config, seed).dump(2) << '\n';
  if (!out) throw Error(ErrorKind::Io, "write failed for " + js);
}

}  // namespace ergodic::lab
