// Command-line front end: solve (one eigenpair), study (full p sweep with
// verdict), transport (closed form vs LP cross-check), report (re-read a
// verdict). Exit codes: 0 success, 1 usage/config/IO, 2 solver
// non-convergence, 3 verdict failure.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "inflap/asymptotics.hpp"
#include "inflap/config.hpp"
#include "inflap/io.hpp"
#include "inflap/svg.hpp"

namespace {

using namespace inflap;

struct CommonOpts {
  std::string config_path;
  std::string shape;
  double h = -1.0;
  double radius = -1.0, side = -1.0;
  double outer_side = -1.0, notch_side = -1.0;
  double r_in = -1.0, r_out = -1.0;
  std::vector<double> center;
  std::string p_list_str;
  std::string out_dir;
  std::string formats;
  long max_iters = -1;
  double grad_tol = -1.0, grad_tol_large_p = -1.0;
  bool reproducible_flag = false;
  long seed = -1;
  std::vector<std::string> sets;  // raw section.key=value overrides
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  // --h is a real option here, so help is long-form only
  cmd->set_help_flag("--help", "print this help");
  cmd->add_option("--config", o.config_path, "config file (key=value sections)");
  cmd->add_option("--shape", o.shape,
                  "disk|square|rectangle|l_shape|annulus|polygon");
  cmd->add_option("--h", o.h, "grid cell size");
  cmd->add_option("--radius", o.radius, "disk radius");
  cmd->add_option("--side", o.side, "square side");
  cmd->add_option("--outer-side", o.outer_side, "l_shape outer side");
  cmd->add_option("--notch-side", o.notch_side, "l_shape notch side");
  cmd->add_option("--r-in", o.r_in, "annulus inner radius");
  cmd->add_option("--r-out", o.r_out, "annulus outer radius");
  cmd->add_option("--center", o.center, "domain center x y")->expected(2);
  cmd->add_option("--p-list", o.p_list_str, "comma-separated exponent list");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--formats", o.formats, "comma list of csv,json,svg");
  cmd->add_option("--max-iters", o.max_iters, "solver iteration cap");
  cmd->add_option("--grad-tol", o.grad_tol, "stationarity tolerance, p <= 16");
  cmd->add_option("--grad-tol-large-p", o.grad_tol_large_p,
                  "stationarity tolerance, p > 16");
  cmd->add_flag("--reproducible", o.reproducible_flag,
                "record reproducible mode in reports");
  cmd->add_option("--seed", o.seed, "seed for randomized helpers");
  cmd->add_option("--set", o.sets, "extra overrides as section.key=value");
}

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

RunConfig resolve(const CommonOpts& o) {
  ConfigMap cm;
  if (!o.config_path.empty()) cm = load_config(o.config_path);
  for (const std::string& s : o.sets) {
    size_t eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw InvalidArgument("--set expects section.key=value, got: " + s);
    cm.kv[s.substr(0, eq)] = s.substr(eq + 1);
  }
  if (!o.shape.empty()) cm.kv["domain.shape"] = o.shape;
  if (o.radius > 0) cm.kv["domain.radius"] = fmt_num(o.radius);
  if (o.side > 0) cm.kv["domain.side"] = fmt_num(o.side);
  if (o.outer_side > 0) cm.kv["domain.outer_side"] = fmt_num(o.outer_side);
  if (o.notch_side > 0) cm.kv["domain.notch_side"] = fmt_num(o.notch_side);
  if (o.r_in > 0) cm.kv["domain.r_in"] = fmt_num(o.r_in);
  if (o.r_out > 0) cm.kv["domain.r_out"] = fmt_num(o.r_out);
  if (o.center.size() == 2)
    cm.kv["domain.center"] = fmt_num(o.center[0]) + "," + fmt_num(o.center[1]);
  if (o.h > 0) cm.kv["grid.h"] = fmt_num(o.h);
  if (!o.p_list_str.empty()) cm.kv["sweep.p_list"] = o.p_list_str;
  if (!o.out_dir.empty()) cm.kv["outputs.dir"] = o.out_dir;
  if (!o.formats.empty()) cm.kv["outputs.formats"] = o.formats;
  if (o.max_iters > 0) cm.kv["solver.max_iters"] = std::to_string(o.max_iters);
  if (o.grad_tol > 0) cm.kv["solver.grad_tol"] = fmt_num(o.grad_tol);
  if (o.grad_tol_large_p > 0)
    cm.kv["solver.grad_tol_large_p"] = fmt_num(o.grad_tol_large_p);
  if (o.reproducible_flag) cm.kv["run.reproducible"] = "true";
  if (o.seed >= 0) cm.kv["run.seed"] = std::to_string(o.seed);

  RunConfig rc = run_config_from(cm);
  if (const char* env = std::getenv("INFLAP_OUT"); env && *env)
    rc.out_dir = env;
  return rc;
}

// Studies need several cells across the domain to mean anything; reject
// cell sizes that leave fewer than 8 across the narrower extent.
void require_study_resolution(const DomainSpec& spec, double h) {
  auto [lo, hi] = bounding_box(spec);
  double ext = std::min(hi.x - lo.x, hi.y - lo.y);
  if (h > ext / 8.0)
    throw InvalidArgument("h too coarse for a study: need h <= " +
                          fmt_num(ext / 8.0));
}

int cmd_solve(const CommonOpts& o, double p) {
  RunConfig rc = resolve(o);
  ensure_dir(rc.out_dir);
  DomainGrid g = build_domain(rc.domain, rc.h);
  DistanceField d = distance_to_boundary(g);
  ScalarField seed = make_seed(g, rc.solver.seed_profile, &d);
  EigenPair pair = solve_first_eigenpair(g, p, seed, rc.solver);

  std::string stem = rc.out_dir + "/eigenpair_" + rc.domain.name() + "_p" +
                     fmt_num(p);
  if (rc.formats.count("json"))
    write_json(stem + ".json", eigenpair_json(pair, rc.domain, rc.h));
  if (rc.formats.count("csv"))
    write_text(stem + ".csv", field_csv(g, pair.u.values));
  if (rc.formats.count("svg")) {
    char cap[64];
    std::snprintf(cap, sizeof(cap), "u p=%g", p);
    write_svg_heatmap(stem + ".svg", g, pair.u.values, cap);
  }
  std::cout << "lambda=" << pair.lambda << " lambda_root=" << pair.lambda_root()
            << " iterations=" << pair.iterations
            << " converged=" << (pair.converged ? "yes" : "no") << "\n";
  return pair.converged ? 0 : 2;
}

int cmd_study(const CommonOpts& o) {
  RunConfig rc = resolve(o);
  ensure_dir(rc.out_dir);
  require_study_resolution(rc.domain, rc.h);
  SweepResult sweep = run_asymptotic_study(rc.domain, rc.h, rc.p_list, rc.solver);
  StudyVerdict verdict = assemble_verdict(sweep);

  std::string stem = rc.out_dir + "/study_" + rc.domain.name();
  if (rc.formats.count("csv")) write_text(stem + ".csv", sweep_csv(sweep));
  if (rc.formats.count("json"))
    write_json(stem + "_verdict.json", verdict_json(verdict, sweep));
  if (rc.formats.count("svg")) write_svg_study_panel(stem + ".svg", sweep);

  for (const auto& c : verdict.checks)
    std::cout << (c.pass ? "pass " : "FAIL ") << c.name << " value=" << c.value
              << " target=" << c.target << "\n";
  std::cout << "R1=" << verdict.R1
            << " lambda_inf_estimate=" << verdict.lambda_inf_estimate << "\n";
  return verdict.all_pass ? 0 : 3;
}

// CSV rows of x,y[,mass]; a non-numeric first line is treated as a header.
void read_points_csv(const std::string& path, std::vector<Point>& pts,
                     std::vector<double>& mass) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read measure file: " + path);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::string t = detail::trim(line);
    if (t.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(t);
    std::string tok;
    bool numeric = true;
    while (std::getline(ss, tok, ',')) {
      try {
        vals.push_back(std::stod(detail::trim(tok)));
      } catch (...) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw InvalidArgument("bad row in " + path + ": " + t);
    }
    first = false;
    if (vals.size() != 2 && vals.size() != 3)
      throw InvalidArgument("rows must be x,y or x,y,mass in " + path);
    pts.push_back({vals[0], vals[1]});
    mass.push_back(vals.size() == 3 ? vals[2] : -1.0);
  }
  if (pts.empty()) throw InvalidArgument("no rows in " + path);
}

int cmd_transport(const CommonOpts& o, double from_eigen_p,
                  const std::string& source_file,
                  const std::string& target_file, long max_sources,
                  long max_targets) {
  RunConfig rc = resolve(o);
  ensure_dir(rc.out_dir);

  std::vector<Point> sources;
  std::vector<double> source_mass;
  DomainGrid g = build_domain(rc.domain, rc.h);

  if (from_eigen_p > 0) {
    DistanceField d = distance_to_boundary(g);
    ScalarField seed = make_seed(g, rc.solver.seed_profile, &d);
    EigenPair pair = solve_first_eigenpair(g, from_eigen_p, seed, rc.solver);
    if (!pair.converged) return 2;
    MeasureTriple tri = derived_measures(pair, g);
    std::vector<size_t> order(tri.f.ids.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return tri.f.weights[a] > tri.f.weights[b];
    });
    size_t keep = std::min(order.size(), (size_t)max_sources);
    for (size_t i = 0; i < keep; ++i) {
      sources.push_back(g.node_pos(tri.f.ids[order[i]]));
      source_mass.push_back(tri.f.weights[order[i]]);
    }
  } else if (!source_file.empty()) {
    read_points_csv(source_file, sources, source_mass);
    for (double& m : source_mass)
      if (m < 0) throw InvalidArgument("source rows need x,y,mass");
  } else {
    throw InvalidArgument("provide --from-eigen P or --source FILE");
  }

  std::vector<Point> targets;
  std::vector<double> target_mass;
  bool fixed_marginal = false;
  if (!target_file.empty()) {
    std::vector<double> tm;
    read_points_csv(target_file, targets, tm);
    fixed_marginal = tm[0] >= 0.0;
    for (double m : tm)
      if ((m >= 0.0) != fixed_marginal)
        throw InvalidArgument("target rows must uniformly have or omit mass");
    if (fixed_marginal) target_mass = tm;
  } else {
    size_t stride =
        std::max<size_t>(1, (g.boundary_points.size() + max_targets - 1) /
                                (size_t)max_targets);
    for (size_t j = 0; j < g.boundary_points.size(); j += stride)
      targets.push_back(g.boundary_points[j]);
  }

  OtSolution lp = solve_discrete_ot(
      sources, source_mass, targets,
      fixed_marginal ? std::span<const double>(target_mass)
                     : std::span<const double>{});

  // nearest-target closed form on the same instance; exact for the free
  // marginal, a lower bound otherwise
  double closed = 0.0;
  for (size_t i = 0; i < sources.size(); ++i) {
    double dmin = std::numeric_limits<double>::infinity();
    for (const Point& y : targets) dmin = std::min(dmin, dist(sources[i], y));
    closed += source_mass[i] * dmin;
  }

  json rep = transport_json(closed, lp, rc.domain);
  rep["fixed_marginal"] = fixed_marginal;
  if (rc.formats.count("json")) write_json(rc.out_dir + "/transport.json", rep);
  if (rc.formats.count("csv"))
    write_text(rc.out_dir + "/plan.csv", plan_csv(lp.plan));
  std::cout << "closed_form=" << closed << " lp_cost=" << lp.plan.cost
            << " agreement=" << (rep["agreement"].get<bool>() ? "yes" : "no")
            << "\n";
  if (fixed_marginal) return 0;  // closed form is only exact when free
  return rep["agreement"].get<bool>() ? 0 : 3;
}

int cmd_report(const std::string& in_path) {
  std::ifstream in(in_path);
  if (!in) throw IoError("cannot read verdict file: " + in_path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InvalidArgument(std::string("bad verdict JSON: ") + e.what());
  }
  std::cout << "shape=" << j.value("shape", std::string("?"))
            << " h=" << j.value("h", 0.0) << " R1=" << j.value("R1", 0.0)
            << " lambda_inf_estimate=" << j.value("lambda_inf_estimate", 0.0)
            << "\n";
  for (const auto& c : j.value("checks", json::array()))
    std::cout << (c.value("pass", false) ? "pass " : "FAIL ")
              << c.value("name", std::string("?"))
              << " value=" << c.value("value", 0.0)
              << " target=" << c.value("target", 0.0) << "\n";
  return j.value("all_pass", false) ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-Laplacian eigenpair laboratory"};
  app.set_help_flag("--help", "print this help");
  app.require_subcommand(1);

  CommonOpts o;
  double solve_p = 2.0;
  double from_eigen_p = -1.0;
  std::string source_file, target_file, report_in;
  long max_sources = 500, max_targets = 200;

  CLI::App* c_solve = app.add_subcommand("solve", "compute one eigenpair");
  add_common(c_solve, o);
  c_solve->add_option("--p", solve_p, "exponent in [2,256]")->required();

  CLI::App* c_study = app.add_subcommand("study", "run the full p sweep");
  add_common(c_study, o);

  CLI::App* c_transport =
      app.add_subcommand("transport", "solve a transport-to-boundary LP");
  add_common(c_transport, o);
  c_transport->add_option("--from-eigen", from_eigen_p,
                          "derive the source from the eigenpair at this p");
  c_transport->add_option("--source", source_file, "source measure CSV");
  c_transport->add_option("--targets", target_file, "target set CSV");
  c_transport->add_option("--max-sources", max_sources,
                          "keep at most this many heaviest atoms");
  c_transport->add_option("--max-targets", max_targets,
                          "subsample the boundary to this many points");

  CLI::App* c_report =
      app.add_subcommand("report", "summarize a saved verdict JSON");
  c_report->add_option("--in", report_in, "verdict JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (c_solve->parsed()) return cmd_solve(o, solve_p);
    if (c_study->parsed()) return cmd_study(o);
    if (c_transport->parsed())
      return cmd_transport(o, from_eigen_p, source_file, target_file,
                           max_sources, max_targets);
    if (c_report->parsed()) return cmd_report(report_in);
  } catch (const inflap::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
