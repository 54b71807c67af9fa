#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "json.hpp"
#include "models.hpp"

namespace ergodic::lab {

struct RunConfig {
  ModelSpec model;
  double eps = 0.05;
  std::size_t max_stages = 12;
  bool timing = false;
  std::string ratio_g = "one";  // ratio-run denominator: one | smooth
};

// key=value lines; '#' starts a comment.
inline std::map<std::string, std::string> read_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Parse, "config line " + std::to_string(lineno) + " lacks '='");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

inline void apply_settings(RunConfig& c, const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv) {
    try {
      if (k == "model.kind") c.model.kind = parse_kind(v);
      else if (k == "model.n") c.model.n = std::stoull(v);
      else if (k == "model.p") c.model.p = std::stod(v);
      else if (k == "model.q") c.model.q = std::stod(v);
      else if (k == "model.degree") c.model.degree = std::stoull(v);
      else if (k == "run.eps") c.eps = std::stod(v);
      else if (k == "run.max_stages") c.max_stages = std::stoull(v);
      else if (k == "run.timing") c.timing = v == "1" || v == "true";
      else if (k == "ratio.g") c.ratio_g = v;
      else throw Error(ErrorKind::Parse, "unknown config key '" + k + "'");
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Parse, "bad value for " + k + ": '" + v + "'");
    }
  }
}

inline RunConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  RunConfig c;
  apply_settings(c, read_key_values(in));
  return c;
}

inline nlohmann::json to_json(const RunConfig& c) {
  return {{"model.kind", kind_name(c.model.kind)}, {"model.n", c.model.n},     {"model.p", c.model.p},
          {"model.q", c.model.q},                  {"model.degree", c.model.degree},
          {"run.eps", c.eps},                      {"run.max_stages", c.max_stages},
          {"ratio.g", c.ratio_g}};
}

}  // namespace ergodic::lab
