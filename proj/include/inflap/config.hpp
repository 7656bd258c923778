// Flat [section] key=value config files plus the resolved RunConfig every
// command consumes. The format is deliberately primitive: comments start
// with '#' or ';', keys are namespaced as "section.key", values are scalars
// or comma-separated lists. CLI flags override file values downstream.
#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "inflap/eigensolver.hpp"
#include "inflap/geometry.hpp"

namespace inflap {

namespace detail {

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

struct ConfigMap {
  std::map<std::string, std::string> kv;  // "section.key" -> raw value

  bool has(const std::string& key) const { return kv.count(key) > 0; }

  std::string get_string(const std::string& key, std::string dflt = "") const {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : it->second;
  }

  double get_double(const std::string& key, double dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    try {
      size_t used = 0;
      double v = std::stod(it->second, &used);
      if (detail::trim(it->second.substr(used)).empty()) return v;
    } catch (...) {
    }
    throw InvalidArgument("config value for '" + key + "' is not a number");
  }

  long get_long(const std::string& key, long dflt) const {
    double v = get_double(key, (double)dflt);
    long l = (long)v;
    if ((double)l != v)
      throw InvalidArgument("config value for '" + key + "' is not an integer");
    return l;
  }

  bool get_bool(const std::string& key, bool dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    std::string v = detail::trim(it->second);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw InvalidArgument("config value for '" + key + "' is not a boolean");
  }

  std::vector<double> get_list(const std::string& key,
                               std::vector<double> dflt = {}) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = detail::trim(tok);
      if (tok.empty()) continue;
      try {
        out.push_back(std::stod(tok));
      } catch (...) {
        throw InvalidArgument("config list '" + key + "' has a bad entry: " + tok);
      }
    }
    return out;
  }
};

inline ConfigMap parse_config_text(const std::string& text) {
  ConfigMap cfg;
  std::stringstream ss(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw InvalidArgument("config line " + std::to_string(lineno) +
                              ": unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(lineno) +
                            ": expected key=value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw InvalidArgument("config line " + std::to_string(lineno) +
                            ": empty key");
    cfg.kv[section.empty() ? key : section + "." + key] = val;
  }
  return cfg;
}

inline ConfigMap load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

struct RunConfig {
  DomainSpec domain = DomainSpec::disk({0.0, 0.0}, 1.0);
  double h = 1.0 / 64.0;
  std::vector<double> p_list = {2, 4, 8, 16, 32, 64, 128};
  SolverConfig solver;
  std::string out_dir = "out";
  std::set<std::string> formats = {"csv", "json"};
  bool reproducible = true;
  uint64_t seed = 1234;
};

inline DomainSpec domain_from_config(const ConfigMap& c) {
  std::string shape = c.get_string("domain.shape", "disk");
  auto pt = [&](const std::string& key, Point dflt) {
    auto v = c.get_list(key, {dflt.x, dflt.y});
    if (v.size() != 2)
      throw InvalidArgument("config point '" + key + "' needs two entries");
    return Point{v[0], v[1]};
  };
  if (shape == "disk")
    return DomainSpec::disk(pt("domain.center", {0, 0}),
                            c.get_double("domain.radius", 1.0));
  if (shape == "square") {
    double s = c.get_double("domain.side", 1.0);
    return DomainSpec::rectangle({0, 0}, {s, s});
  }
  if (shape == "rectangle")
    return DomainSpec::rectangle(pt("domain.corner_min", {0, 0}),
                                 pt("domain.corner_max", {1, 1}));
  if (shape == "l_shape")
    return DomainSpec::l_shape(c.get_double("domain.outer_side", 2.0),
                               c.get_double("domain.notch_side", 1.0));
  if (shape == "annulus")
    return DomainSpec::annulus(pt("domain.center", {0, 0}),
                               c.get_double("domain.r_in", 0.5),
                               c.get_double("domain.r_out", 1.0));
  if (shape == "polygon") {
    auto v = c.get_list("domain.vertices");
    if (v.size() < 6 || v.size() % 2 != 0)
      throw InvalidArgument("polygon vertices need >= 3 x,y pairs");
    std::vector<Point> pts;
    for (size_t i = 0; i + 1 < v.size(); i += 2) pts.push_back({v[i], v[i + 1]});
    return DomainSpec::polygon(std::move(pts));
  }
  throw InvalidArgument("unknown shape: " + shape);
}

inline SolverConfig solver_from_config(const ConfigMap& c) {
  SolverConfig s;
  s.max_iters = c.get_long("solver.max_iters", s.max_iters);
  s.grad_tol = c.get_double("solver.grad_tol", s.grad_tol);
  s.grad_tol_large_p = c.get_double("solver.grad_tol_large_p", s.grad_tol_large_p);
  s.fixed_step = c.get_double("solver.fixed_step", s.fixed_step);
  std::string rule = c.get_string("solver.step_rule", "backtracking");
  if (rule == "backtracking")
    s.step_rule = StepRule::Backtracking;
  else if (rule == "fixed")
    s.step_rule = StepRule::Fixed;
  else
    throw InvalidArgument("unknown step rule: " + rule);
  std::string seedp = c.get_string("solver.seed_profile", "distance");
  if (seedp == "distance")
    s.seed_profile = SeedProfile::DistanceField;
  else if (seedp == "cone")
    s.seed_profile = SeedProfile::Cone;
  else if (seedp == "ones")
    s.seed_profile = SeedProfile::Ones;
  else
    throw InvalidArgument("unknown seed profile: " + seedp);
  s.reproducible = c.get_bool("run.reproducible", s.reproducible);
  return s;
}

inline RunConfig run_config_from(const ConfigMap& c) {
  RunConfig rc;
  rc.domain = domain_from_config(c);
  rc.h = c.get_double("grid.h", rc.h);
  rc.p_list = c.get_list("sweep.p_list", rc.p_list);
  rc.solver = solver_from_config(c);
  rc.out_dir = c.get_string("outputs.dir", rc.out_dir);
  if (c.has("outputs.formats")) {
    rc.formats.clear();
    std::stringstream ss(c.get_string("outputs.formats"));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = detail::trim(tok);
      if (tok.empty()) continue;
      if (tok != "csv" && tok != "json" && tok != "svg")
        throw InvalidArgument("unknown output format: " + tok);
      rc.formats.insert(tok);
    }
    if (rc.formats.empty())
      throw InvalidArgument("outputs.formats must name at least one format");
  }
  rc.reproducible = c.get_bool("run.reproducible", rc.reproducible);
  rc.seed = (uint64_t)c.get_long("run.seed", (long)rc.seed);
  return rc;
}

}  // namespace inflap
