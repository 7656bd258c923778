// Report writers: per-p CSV tables, field and plan CSVs, and the JSON
// documents (eigenpair summary, transport report, study verdict) that the
// shipped schemas in docs/schemas describe. All output is deterministic:
// fixed column orders, round-trip double formatting, no timestamps.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "inflap/asymptotics.hpp"
#include "inflap/transport.hpp"

namespace inflap {

using json = nlohmann::json;

namespace detail {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir);
}

inline void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

inline std::string sweep_csv(const SweepResult& s) {
  std::string t =
      "p,lambda,log_lambda,lambda_root,primal_value,dual_value,pairing,"
      "div_residual,sup_u,f_mass,concentration_mass_fraction,w1_of_fp,"
      "ray_deviation,uinf_bound_violation,iterations,residual_norm,"
      "converged,note\n";
  for (const auto& r : s.records) {
    t += detail::num(r.p) + "," + detail::num(r.lambda) + "," +
         detail::num(r.log_lambda) + "," + detail::num(r.lambda_root) + "," +
         detail::num(r.primal_value) + "," + detail::num(r.dual_value) + "," +
         detail::num(r.pairing) + "," + detail::num(r.div_residual) + "," +
         detail::num(r.sup_u) + "," + detail::num(r.f_mass) + "," +
         detail::num(r.concentration_mass_fraction) + "," +
         detail::num(r.w1_of_fp) + "," + detail::num(r.ray_deviation) + "," +
         detail::num(r.uinf_bound_violation) + "," +
         std::to_string(r.iterations) + "," + detail::num(r.residual_norm) +
         "," + (r.converged ? "1" : "0") + ",\"" + r.note + "\"\n";
  }
  return t;
}

inline std::string field_csv(const DomainGrid& g,
                             std::span<const double> values) {
  if ((int)values.size() != g.interior_count())
    throw InvalidArgument("field size does not match grid");
  std::string t = "x,y,value\n";
  for (int k = 0; k < g.interior_count(); ++k) {
    Point pt = g.node_pos(k);
    t += detail::num(pt.x) + "," + detail::num(pt.y) + "," +
         detail::num(values[k]) + "\n";
  }
  return t;
}

inline std::string plan_csv(const TransportPlan& plan) {
  std::string t = "source_x,source_y,target_x,target_y,mass\n";
  for (const auto& e : plan.entries) {
    const Point& s = plan.sources[e.s];
    const Point& y = plan.targets[e.t];
    t += detail::num(s.x) + "," + detail::num(s.y) + "," + detail::num(y.x) +
         "," + detail::num(y.y) + "," + detail::num(e.mass) + "\n";
  }
  return t;
}

inline json eigenpair_json(const EigenPair& pair, const DomainSpec& spec,
                           double h) {
  double sup_u = 0.0;
  for (double x : pair.u.values) sup_u = std::max(sup_u, x);
  return json{{"schema", "inflap-eigenpair/1"},
              {"shape", spec.name()},
              {"h", h},
              {"p", pair.p},
              {"lambda", pair.lambda},
              {"log_lambda", pair.log_lambda},
              {"lambda_root", pair.lambda_root()},
              {"iterations", pair.iterations},
              {"residual_norm", pair.residual_norm},
              {"converged", pair.converged},
              {"sup_u", sup_u}};
}

inline json verdict_json(const StudyVerdict& v, const SweepResult& s) {
  json checks = json::array();
  for (const auto& c : v.checks)
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"value", c.value},
                      {"target", c.target},
                      {"detail", c.detail}});
  json rows = json::array();
  for (const auto& r : s.records)
    rows.push_back({{"p", r.p},
                    {"lambda_root", r.lambda_root},
                    {"primal_value", r.primal_value},
                    {"sup_u", r.sup_u},
                    {"concentration_mass_fraction", r.concentration_mass_fraction},
                    {"w1_of_fp", r.w1_of_fp},
                    {"ray_deviation", r.ray_deviation},
                    {"uinf_bound_violation", r.uinf_bound_violation},
                    {"converged", r.converged},
                    {"note", r.note}});
  return json{{"schema", "inflap-verdict/1"},
              {"shape", s.spec.name()},
              {"h", s.h},
              {"R1", v.R1},
              {"lambda_inf_estimate", v.lambda_inf_estimate},
              {"extrapolation_model", v.extrapolation_model},
              {"all_pass", v.all_pass},
              {"checks", checks},
              {"rows", rows}};
}

inline json transport_json(double closed_form_value, const OtSolution& lp,
                           const DomainSpec& spec) {
  double scale = std::max(std::abs(closed_form_value), std::abs(lp.plan.cost));
  double gap = scale > 0.0 ? std::abs(closed_form_value - lp.plan.cost) / scale
                           : 0.0;
  return json{{"schema", "inflap-transport/1"},
              {"shape", spec.name()},
              {"closed_form_value", closed_form_value},
              {"lp_cost", lp.plan.cost},
              {"relative_gap", gap},
              {"agreement", gap <= 1e-9},
              {"sources", lp.plan.sources.size()},
              {"targets", lp.plan.targets.size()},
              {"certificate",
               {{"max_feasibility_violation", lp.cert.max_feasibility_violation},
                {"max_support_slack", lp.cert.max_support_slack},
                {"dual_value", lp.cert.dual_value},
                {"duality_gap", lp.cert.duality_gap}}}};
}

inline void write_json(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace inflap
