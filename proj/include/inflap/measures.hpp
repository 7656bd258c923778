// Measures derived from an eigenpair and the exact finite-p duality checks:
//   f  = u^{p-1} dx            (node measure; <f, u> = ||u||_p^p = 1)
//   sigma = |du|^{p-2} du / lambda dx   (cell vector measure)
//   mu = |du|^{p-2} / lambda dx         (cell measure; sigma = du . mu)
// The primal/dual functional values collapse to -1/p' and +1/p' identically
// at a normalized eigenpair; computing them through the measures (rather
// than asserting the algebra) is what ties the solver output to the duality
// structure.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "inflap/eigensolver.hpp"

namespace inflap {

struct DiscreteMeasure {
  std::vector<int32_t> ids;     // node ids (or cell ids for cell-supported)
  std::vector<double> weights;  // nonnegative masses
  double total_mass = 0.0;
};

struct VectorMeasure {
  std::vector<double> x, y;       // mass vectors, one per gradient cell
  double total_variation = 0.0;   // sum of |v_c|

  // normalized direction where the magnitude is meaningful; zero otherwise
  Point direction(size_t c) const {
    double m = std::hypot(x[c], y[c]);
    if (m <= 1e-30) return {0.0, 0.0};
    return {x[c] / m, y[c] / m};
  }
};

struct MeasureTriple {
  DiscreteMeasure f;   // dense on interior nodes: ids[k] == k
  VectorMeasure sigma; // dense on gradient cells
  DiscreteMeasure mu;  // dense on gradient cells: ids[c] == c
};

struct DualityReport {
  double p = 0.0;
  double primal_value = 0.0;   // (1/(p lambda)) ||du||_p^p - <f, u>
  double dual_value = 0.0;     // (1/p') lambda^{p'-1} \int |sigma|^{p'}
  double analytic_value = 0.0; // -1/p'
  double div_residual = 0.0;   // ||-div sigma - f||_1
  double pairing = 0.0;        // <f, u>
};

inline MeasureTriple derived_measures(const EigenPair& pair,
                                      const DomainGrid& g) {
  const double p = pair.p;
  const auto& u = pair.u.values;
  MeasureTriple t;

  int n = g.interior_count();
  t.f.ids.resize(n);
  t.f.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    t.f.ids[i] = i;
    double w = u[i] > 0.0 ? std::pow(u[i], p - 1.0) * g.cell_area : 0.0;
    t.f.weights[i] = w;
    t.f.total_mass += w;
  }

  GradField gf;
  gradient(g, u, gf);
  size_t nc = gf.x.size();
  double m2 = 0.0;
  for (size_t c = 0; c < nc; ++c)
    m2 = std::max(m2, gf.x[c] * gf.x[c] + gf.y[c] * gf.y[c]);
  if (m2 == 0.0) throw ZeroField("eigenfunction has zero gradient");
  double log_m = 0.5 * std::log(m2);
  // K = M^{p-2} * cell_area / lambda, applied after the (|g|/M)^{p-2} shift
  double bigK =
      std::exp((p - 2.0) * log_m + std::log(g.cell_area) - pair.log_lambda);

  t.sigma.x.resize(nc);
  t.sigma.y.resize(nc);
  t.mu.ids.resize(nc);
  t.mu.weights.resize(nc);
  for (size_t c = 0; c < nc; ++c) {
    double t2 = (gf.x[c] * gf.x[c] + gf.y[c] * gf.y[c]) / m2;
    double s = t2 > 0.0 ? std::pow(t2, (p - 2.0) / 2.0) : 0.0;
    if (p == 2.0) s = 1.0;
    double a = bigK * s;
    t.mu.ids[c] = (int32_t)c;
    t.mu.weights[c] = a;
    t.mu.total_mass += a;
    t.sigma.x[c] = a * gf.x[c];
    t.sigma.y[c] = a * gf.y[c];
    t.sigma.total_variation += a * std::hypot(gf.x[c], gf.y[c]);
  }
  return t;
}

// ||-div sigma - f||_1, cell_area-weighted over interior nodes. Shares the
// gradient-transpose algebra with pde_residual, so the two agree to rounding.
inline double divergence_residual(const VectorMeasure& sigma,
                                  const DiscreteMeasure& f,
                                  const DomainGrid& g) {
  size_t nc = g.cells.size();
  if (sigma.x.size() != nc)
    throw InvalidArgument("sigma does not match the grid's cell set");
  GradField w;
  w.x.resize(nc);
  w.y.resize(nc);
  for (size_t c = 0; c < nc; ++c) {
    w.x[c] = sigma.x[c] / g.cell_area;  // mass -> density
    w.y[c] = sigma.y[c] / g.cell_area;
  }
  std::vector<double> q(g.interior_count());
  divergence_transpose(g, w, q);
  double res = 0.0;
  for (int i = 0; i < g.interior_count(); ++i)
    res += std::abs(q[i] * g.cell_area - f.weights[i]);
  return res;
}

inline DualityReport primal_dual_values(const EigenPair& pair,
                                        const MeasureTriple& t,
                                        const DomainGrid& g) {
  const double p = pair.p;
  const double pprime = p / (p - 1.0);
  DualityReport r;
  r.p = p;
  r.analytic_value = -1.0 / pprime;

  // energy via the log-domain norm of the gradient magnitudes
  GradField gf;
  gradient(g, pair.u.values, gf);
  std::vector<double> mag(gf.x.size());
  for (size_t c = 0; c < mag.size(); ++c)
    mag[c] = std::hypot(gf.x[c], gf.y[c]);
  double log_energy = log_abs_pow_sum(mag, p) + std::log(g.cell_area);

  for (size_t i = 0; i < t.f.weights.size(); ++i)
    r.pairing += t.f.weights[i] * pair.u.values[i];
  r.primal_value = std::exp(log_energy - pair.log_lambda) / p - r.pairing;

  // dual through sigma: (1/p') lambda^{p'-1} \int |sigma/dx|^{p'} dx
  std::vector<double> dens(t.sigma.x.size());
  for (size_t c = 0; c < dens.size(); ++c)
    dens[c] = std::hypot(t.sigma.x[c], t.sigma.y[c]) / g.cell_area;
  double log_int = log_abs_pow_sum(dens, pprime) + std::log(g.cell_area);
  r.dual_value =
      std::exp((pprime - 1.0) * pair.log_lambda + log_int) / pprime;

  r.div_residual = divergence_residual(t.sigma, t.f, g);
  return r;
}

struct GradientConcentrationReport {
  double mu_mean_grad = 0.0;      // mu-weighted mean of |du|
  double mu_std_grad = 0.0;       // mu-weighted std of |du| about the mean
  double mean_alignment = 0.0;    // mu-weighted <xi, du/|du|>
  double concentration = 0.0;     // mu-weighted rms of |du| about lambda^{1/p},
                                  // relative to lambda^{1/p}
};

// Discrete stand-in for the limit optimality system: as p grows, |du| must
// flatten onto lambda_p^{1/p} under mu, and xi must align with du.
inline GradientConcentrationReport optimality_surrogate(
    const EigenPair& pair, const MeasureTriple& t, const DomainGrid& g) {
  if (!(t.mu.total_mass > 0.0))
    throw DegenerateMeasure("mu has no mass");
  GradField gf;
  gradient(g, pair.u.values, gf);
  double wsum = 0.0, mean = 0.0, align = 0.0, align_w = 0.0;
  for (size_t c = 0; c < gf.x.size(); ++c) {
    double w = t.mu.weights[c];
    if (w <= 0.0) continue;
    double m = std::hypot(gf.x[c], gf.y[c]);
    wsum += w;
    mean += w * m;
    Point xi = t.sigma.direction(c);
    if (m > 0.0 && (xi.x != 0.0 || xi.y != 0.0)) {
      align += w * (xi.x * gf.x[c] + xi.y * gf.y[c]) / m;
      align_w += w;
    }
  }
  mean /= wsum;
  GradientConcentrationReport rep;
  rep.mu_mean_grad = mean;
  rep.mean_alignment = align_w > 0.0 ? align / align_w : 0.0;
  double lam_root = pair.lambda_root();
  double var = 0.0, dev = 0.0;
  for (size_t c = 0; c < gf.x.size(); ++c) {
    double w = t.mu.weights[c];
    if (w <= 0.0) continue;
    double m = std::hypot(gf.x[c], gf.y[c]);
    var += w * (m - mean) * (m - mean);
    dev += w * (m - lam_root) * (m - lam_root);
  }
  rep.mu_std_grad = std::sqrt(var / wsum);
  rep.concentration = std::sqrt(dev / wsum) / lam_root;
  return rep;
}

// Boundary part of the limit measure: the divergence imbalance of sigma
// accumulated on the exterior lattice points its stencils touch. Its total
// mass reproduces <f, u>-style unit mass up to the solver residual.
inline GhostMeasure boundary_divergence_measure(const MeasureTriple& t,
                                                const DomainGrid& g) {
  GradField w;
  size_t nc = g.cells.size();
  w.x.resize(nc);
  w.y.resize(nc);
  for (size_t c = 0; c < nc; ++c) {
    w.x[c] = t.sigma.x[c] / g.cell_area;
    w.y[c] = t.sigma.y[c] / g.cell_area;
  }
  return ghost_divergence(g, w);
}

}  // namespace inflap
