// First eigenpair of the p-Laplacian by projected gradient descent on the
// Rayleigh quotient R(u) = ||grad u||_p^p / ||u||_p^p over the masked grid.
//
// Numerics that matter here:
//  * All p-th powers go through max-shifted log sums (p up to 256).
//  * The iterate is kept sup-normalized; the ||.||_p = 1 normalization is
//    applied analytically at the end via the stored log norm.
//  * The search direction is the gradient of log R, whose components stay
//    O(p) for every p, so no intermediate blows up even when lambda itself
//    is ~1e150.
//  * The descent direction is the gradient scaled by the diagonal of the
//    frozen-coefficient Hessian (the raw per-node stiffness spans ~p orders
//    of magnitude, which stalls plain gradient steps), and the step length
//    alternates the two spectral (Barzilai-Borwein) secant fits in that
//    scaled metric. Backtracking accepts only non-increasing Rayleigh values.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "inflap/lognorm.hpp"
#include "inflap/operators.hpp"

namespace inflap {

enum class StepRule { Backtracking, Fixed };
enum class SeedProfile { DistanceField, Cone, Ones };

struct SolverConfig {
  long max_iters = 400000;
  double grad_tol = 1e-8;         // relative stationarity, p <= 16
  double grad_tol_large_p = 1e-6; // relaxed for p > 16 (flat landscape)
  StepRule step_rule = StepRule::Backtracking;
  double armijo_c = 1e-4;         // sufficient-decrease constant
  double shrink = 0.5;            // backtracking factor
  double fixed_step = 1e-2;       // used only by StepRule::Fixed
  SeedProfile seed_profile = SeedProfile::DistanceField;
  bool reproducible = true;       // kept in reports; solver is deterministic

  double grad_tol_for(double p) const {
    return p > 16.0 ? grad_tol_large_p : grad_tol;
  }
};

struct EigenPair {
  double p = 0.0;
  double lambda = 0.0;      // Rayleigh value at the minimizer
  double log_lambda = 0.0;
  ScalarField u;            // ||u||_p = 1 (cell_area weighted), u > 0 inside
  long iterations = 0;
  double residual_norm = 0.0;  // ||-div(|du|^{p-2}du) - lambda u^{p-1}||_1 / lambda
  double rayleigh_value = 0.0; // recomputed on the returned u
  bool converged = false;

  double lambda_root() const { return std::exp(log_lambda / p); }
};

namespace detail {

// Everything the descent loop needs about one iterate. The iterate v is
// nonnegative with sup v = 1; all powers are taken against that scaling.
struct RayleighEval {
  GradField grad;
  std::vector<double> s;     // (|grad v|/M)^(p-2) per cell
  std::vector<double> vp1;   // v^(p-1) per node
  std::vector<double> diag;  // diagonal of G^T(s G) in M-scaled units
  double max_grad = 0.0;     // M
  double sum_tp = 0.0;       // sum of (|grad v|/M)^p
  double sum_vp = 0.0;       // sum of v^p  (>= 1 since sup v = 1)
  double log_energy = 0.0;   // log of cell_area * M^p * sum_tp
  double log_mass = 0.0;     // log of cell_area * sum_vp
  double log_rayleigh = 0.0;
};

inline void eval_rayleigh(const DomainGrid& g, std::span<const double> v,
                          double p, RayleighEval& e) {
  gradient(g, v, e.grad);
  size_t nc = e.grad.x.size();
  e.s.resize(nc);
  double m2 = 0.0;
  for (size_t c = 0; c < nc; ++c) {
    double t2 = e.grad.x[c] * e.grad.x[c] + e.grad.y[c] * e.grad.y[c];
    e.s[c] = t2;  // first pass stores |grad|^2
    m2 = std::max(m2, t2);
  }
  if (m2 == 0.0) throw ZeroField("iterate has identically zero gradient");
  e.max_grad = std::sqrt(m2);
  e.sum_tp = 0.0;
  double ih = (p - 2.0) / 2.0;
  bool p_int = p == std::floor(p);
  bool half_exp = p_int && ((long)p % 2 != 0);  // odd p: use sqrt(t2)^(p-2)
  for (size_t c = 0; c < nc; ++c) {
    double t2 = e.s[c] / m2;
    double s;  // (|g|/M)^(p-2)
    if (t2 <= 0.0)
      s = 0.0;
    else if (p_int)
      s = half_exp ? ipow(std::sqrt(t2), (long)p - 2) : ipow(t2, (long)ih);
    else
      s = std::pow(t2, ih);
    if (p == 2.0) s = 1.0;  // 0^0 := 1, harmless
    e.s[c] = s;
    e.sum_tp += s * t2;
  }
  double la = std::log(g.cell_area);
  e.log_energy = p * std::log(e.max_grad) + std::log(e.sum_tp) + la;

  // diagonal of the frozen-coefficient operator v -> G^T(s Gv)
  e.diag.assign(v.size(), 0.0);
  double ih2 = 1.0 / (g.h * g.h);
  for (size_t c = 0; c < g.cells.size(); ++c) {
    const auto& cl = g.cells[c];
    double sc = e.s[c] * ih2;
    if (cl.base >= 0) e.diag[cl.base] += 2.0 * sc;
    if (cl.right >= 0) e.diag[cl.right] += sc;
    if (cl.up >= 0) e.diag[cl.up] += sc;
  }

  size_t n = v.size();
  e.vp1.resize(n);
  e.sum_vp = 0.0;
  if (p_int) {
    for (size_t i = 0; i < n; ++i) {
      double w = v[i] > 0.0 ? ipow(v[i], (long)p - 1) : 0.0;
      e.vp1[i] = w;
      e.sum_vp += w * v[i];
    }
  } else {
    for (size_t i = 0; i < n; ++i) {
      double w = v[i] > 0.0 ? std::pow(v[i], p - 1.0) : 0.0;
      e.vp1[i] = w;
      e.sum_vp += w * v[i];
    }
  }
  if (e.sum_vp <= 0.0) throw ZeroField("iterate vanished on the interior");
  e.log_mass = std::log(e.sum_vp) + la;
  e.log_rayleigh = e.log_energy - e.log_mass;
}

// Residual direction in eigen units against a reference eigenvalue
// exp(log_lambda): rhat = G^T(|dv|^{p-2} dv)/lambda - v^{p-1}.
// Returns the relative l1 stationarity  rho = sum|rhat| / sum v^{p-1}.
inline double eval_residual(const DomainGrid& g, const RayleighEval& e,
                            double p, double log_lambda, GradField& wbuf,
                            std::vector<double>& qbuf,
                            std::vector<double>& rhat) {
  size_t nc = e.grad.x.size();
  wbuf.x.resize(nc);
  wbuf.y.resize(nc);
  for (size_t c = 0; c < nc; ++c) {
    wbuf.x[c] = e.s[c] * e.grad.x[c];
    wbuf.y[c] = e.s[c] * e.grad.y[c];
  }
  size_t n = e.vp1.size();
  qbuf.resize(n);
  rhat.resize(n);
  divergence_transpose(g, wbuf, qbuf);
  double scale = std::exp((p - 2.0) * std::log(e.max_grad) - log_lambda);
  double sum_abs = 0.0, sum_vp1 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    rhat[i] = scale * qbuf[i] - e.vp1[i];
    sum_abs += std::abs(rhat[i]);
    sum_vp1 += e.vp1[i];
  }
  return sum_abs / sum_vp1;
}

}  // namespace detail

// Scale-invariant Rayleigh quotient, valid for any p > 1 and any real field.
inline double rayleigh_quotient(const ScalarField& u, double p,
                                const DomainGrid& g) {
  if (!(p > 1.0)) throw InvalidArgument("rayleigh_quotient requires p > 1");
  if ((int)u.values.size() != g.interior_count())
    throw InvalidArgument("field size does not match grid");
  GradField gf;
  gradient(g, u.values, gf);
  std::vector<double> mag(gf.x.size());
  for (size_t c = 0; c < mag.size(); ++c)
    mag[c] = std::hypot(gf.x[c], gf.y[c]);
  double le = log_abs_pow_sum(mag, p);
  double ln = log_abs_pow_sum(u.values, p);
  if (ln == neg_inf) throw ZeroField("rayleigh_quotient of the zero field");
  // cell_area weights cancel between numerator and denominator
  return std::exp(le - ln);
}

inline ScalarField make_seed(const DomainGrid& g, SeedProfile profile,
                             const DistanceField* d_hint = nullptr) {
  ScalarField f;
  int n = g.interior_count();
  switch (profile) {
    case SeedProfile::Ones:
      f.values.assign(n, 1.0);
      break;
    case SeedProfile::DistanceField: {
      DistanceField d = d_hint ? *d_hint : distance_to_boundary(g);
      f.values = d.values;
      break;
    }
    case SeedProfile::Cone: {
      DistanceField d = d_hint ? *d_hint : distance_to_boundary(g);
      auto rep = inradius(g, d);
      // apex at the deepest node: the band's first entry can sit well off
      // the incenter, leaving a rim jump once the cone is clamped at zero
      int apex = rep.argmax_nodes.front();
      for (int k : rep.argmax_nodes)
        if (d.values[k] > d.values[apex]) apex = k;
      Point c = g.node_pos(apex);
      f.values.resize(n);
      for (int k = 0; k < n; ++k)
        f.values[k] = std::max(rep.R1 - dist(g.node_pos(k), c), 0.0);
      break;
    }
  }
  return f;
}

// ||-div(|du|^{p-2} du) - lambda u^{p-1}||_1 (cell_area weighted) / lambda,
// evaluated with the same scaled algebra the solver iterates on.
inline double pde_residual(const EigenPair& pair, const DomainGrid& g) {
  detail::RayleighEval e;
  detail::eval_rayleigh(g, pair.u.values, pair.p, e);
  GradField wb;
  std::vector<double> qb, rh;
  detail::eval_residual(g, e, pair.p, pair.log_lambda, wb, qb, rh);
  double sum_abs = 0.0;
  for (double r : rh) sum_abs += std::abs(r);
  return sum_abs * g.cell_area;
}

inline EigenPair solve_first_eigenpair(const DomainGrid& g, double p,
                                       const ScalarField& init,
                                       const SolverConfig& cfg = {}) {
  if (!(p >= 2.0 && p <= 256.0))
    throw InvalidArgument("p outside the supported range [2, 256]");
  int n = g.interior_count();
  if ((int)init.values.size() != n)
    throw InvalidArgument("seed size does not match grid");

  std::vector<double> v(init.values);
  double vmax = 0.0;
  for (double& x : v) {
    x = std::max(x, 0.0);
    vmax = std::max(vmax, x);
  }
  if (vmax <= 0.0) throw ZeroField("seed is nonpositive everywhere");
  for (double& x : v) x /= vmax;

  detail::RayleighEval cur, trial;
  GradField wbuf;
  std::vector<double> qbuf, rhat, gvec(n), vtrial(n), vprev, dprev;
  detail::eval_rayleigh(g, v, p, cur);

  const double tol = cfg.grad_tol_for(p);
  long it = 0;
  bool converged = false;
  double rho = 0.0;
  bool have_prev = false;
  bool short_turn = false;
  double alpha = 0.0;
  double alpha_acc = std::numeric_limits<double>::infinity();
  int stalls = 0;
  long since_refresh = 0;

  while (it < cfg.max_iters) {
    rho = detail::eval_residual(g, cur, p, cur.log_rayleigh, wbuf, qbuf, rhat);
    if (rho <= tol) {
      converged = true;
      break;
    }
    ++it;

    // descent direction: gradient of log R scaled by the diagonal of its
    // frozen-coefficient Hessian. The raw gradient stalls for large p (cell
    // weights and cap curvature span many orders of magnitude); the diagonal
    // scaling equalizes the per-node stiffness, and a full step (alpha = 1)
    // is the natural quasi-Newton step
    double gscale = p / cur.sum_vp;
    double hscale = std::exp((p - 2.0) * std::log(cur.max_grad) -
                             cur.log_rayleigh);
    double gmax = 0.0, gg = 0.0, pmax = 0.0;
    for (int i = 0; i < n; ++i) {
      double vp2 = v[i] > 0.0 ? cur.vp1[i] / v[i] : 0.0;
      double prec = hscale * cur.diag[i] + (p - 1.0) * vp2;
      gvec[i] = prec;  // stash; floored below once pmax is known
      pmax = std::max(pmax, prec);
    }
    double floor_p = 1e-12 * pmax;
    for (int i = 0; i < n; ++i) {
      double dir = rhat[i] / std::max(gvec[i], floor_p);
      gvec[i] = dir;
      gmax = std::max(gmax, std::abs(dir));
      gg += gscale * rhat[i] * dir;  // directional slope, positive
    }

    if (cfg.step_rule == StepRule::Fixed) {
      alpha = cfg.fixed_step / gmax;
    } else if (have_prev) {
      // spectral step in the scaled metric: secant fits of the scaled
      // gradient along the last accepted displacement. The two classical
      // fits alternate; the long one advances the near-flat ridge modes,
      // the short one keeps the stiff modes stable, and alternation stops
      // the step from locking onto a single Hessian eigencomponent (which
      // stalls domains with an extended ridge set)
      double ss = 0.0, sy = 0.0, yy = 0.0;
      for (int i = 0; i < n; ++i) {
        double si = v[i] - vprev[i];
        double yi = gvec[i] - dprev[i];
        ss += si * si;
        sy += si * yi;
        yy += yi * yi;
      }
      if (sy > 0.0) {
        alpha = short_turn && yy > 0.0 ? sy / yy : ss / sy;
      } else {
        alpha = std::min(1.0, alpha * 2.0);
      }
      short_turn = !short_turn;
    } else {
      alpha = 1.0;
    }
    // growth cap against limit cycles: a rejected spectral step must not be
    // retried verbatim next iteration (the same overshoot, the same
    // backtrack, the same poisoned secant pair, forever); anchoring the
    // trial to the last accepted length keeps the step history contractive
    alpha = std::min(alpha, 2.0 * alpha_acc);
    // keep the sup-norm displacement per step under control
    alpha = std::min(alpha, 0.25 / gmax);
    vprev = v;
    dprev = gvec;

    // monotone acceptance up to rounding: once the true decrease per step
    // falls under one ulp of the objective, demanding strict decrease would
    // stall the spectral stepping while the residual can still contract
    double slack = 1e-14 * std::max(1.0, std::abs(cur.log_rayleigh));

    bool accepted = false;
    double lo_alpha = 1e-14 / gmax;
    while (alpha >= lo_alpha) {
      double tmax = 0.0;
      for (int i = 0; i < n; ++i) {
        vtrial[i] = std::max(v[i] - alpha * gvec[i], 0.0);
        tmax = std::max(tmax, vtrial[i]);
      }
      if (tmax > 0.0) {
        for (int i = 0; i < n; ++i) vtrial[i] /= tmax;
        detail::eval_rayleigh(g, vtrial, p, trial);
        bool ok = cfg.step_rule == StepRule::Fixed ||
                  trial.log_rayleigh <=
                      cur.log_rayleigh - cfg.armijo_c * alpha * gg + slack;
        if (ok) {
          v.swap(vtrial);
          std::swap(cur, trial);
          accepted = true;
          break;
        }
      }
      if (cfg.step_rule == StepRule::Fixed) break;  // no adaptation requested
      alpha *= cfg.shrink;
    }
    if (accepted) {
      have_prev = true;
      stalls = 0;
      alpha_acc = alpha;
      // secant pairs also degrade slowly once per-step decrease reaches
      // rounding scale (the slack admits non-descent wander that poisons
      // them); refreshing the quasi-Newton scale clears the history
      if (++since_refresh >= 5000) {
        have_prev = false;
        since_refresh = 0;
      }
    } else {
      // restart the spectral step from scratch before giving up
      have_prev = false;
      alpha_acc = std::numeric_limits<double>::infinity();
      if (++stalls >= 3) break;
    }
  }

  // analytic ||.||_p = 1 normalization via the stored log norm
  EigenPair pair;
  pair.p = p;
  pair.log_lambda = cur.log_rayleigh;
  pair.lambda = std::exp(cur.log_rayleigh);
  pair.iterations = it;
  pair.converged = converged;
  double log_pn = cur.log_mass / p;
  pair.u.values.resize(n);
  double sc = std::exp(-log_pn);
  for (int i = 0; i < n; ++i) pair.u.values[i] = v[i] * sc;
  pair.rayleigh_value = rayleigh_quotient(pair.u, p, g);
  pair.residual_norm = pde_residual(pair, g);
  return pair;
}

// Warm-started sweep over increasing p. Rows that fail to converge are kept
// (flagged); subsequent solves are seeded from the last converged iterate.
inline std::vector<EigenPair> continuation_sweep(
    const DomainGrid& g, std::span<const double> p_list,
    const SolverConfig& cfg = {}, const DistanceField* d_hint = nullptr) {
  std::vector<EigenPair> out;
  if (p_list.empty()) return out;
  ScalarField seed = make_seed(g, cfg.seed_profile, d_hint);
  for (double p : p_list) {
    EigenPair pair = solve_first_eigenpair(g, p, seed, cfg);
    if (pair.converged) seed = pair.u;
    out.push_back(std::move(pair));
  }
  return out;
}

}  // namespace inflap
