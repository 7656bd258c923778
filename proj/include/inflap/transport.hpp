// Transport-to-boundary problems on the grid. Two independent routes to the
// same value: the closed form sum f(x) d(x) with a nearest-projection plan,
// and a genuine LP over the bipartite source/boundary graph (network simplex
// with a free target marginal via zero-cost sink arcs). Their agreement, plus
// per-solve optimality certificates, is the evidence the transport claims
// stand on.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "inflap/measures.hpp"
#include "inflap/network_simplex.hpp"

namespace inflap {

struct TransportPlan {
  std::vector<Point> sources, targets;
  std::vector<double> source_mass;  // marginal actually shipped per source
  std::vector<double> target_mass;  // induced (or prescribed) per target
  struct Entry {
    int32_t s, t;
    double mass;
  };
  std::vector<Entry> entries;
  double cost = 0.0;
};

struct OptimalityCertificate {
  std::vector<double> source_potential;  // u_i
  std::vector<double> target_potential;  // v_j
  double max_feasibility_violation = 0.0;  // max over pairs (u_i+v_j-c_ij)+
  double max_support_slack = 0.0;          // max |c_ij-u_i-v_j| on the plan
  double dual_value = 0.0;                 // sum a u + sum b v
  double duality_gap = 0.0;                // |cost - dual_value|
};

struct OtSolution {
  TransportPlan plan;
  OptimalityCertificate cert;
};

// Bipartite optimal transport with Euclidean costs. Pass an empty
// target_mass for the free-marginal variant (mass may land anywhere on the
// target set). Dense cost matrices only; instances beyond 1e6 entries must
// be subsampled by the caller.
inline OtSolution solve_discrete_ot(std::span<const Point> sources,
                                    std::span<const double> source_mass,
                                    std::span<const Point> targets,
                                    std::span<const double> target_mass = {}) {
  size_t ns = sources.size(), nt = targets.size();
  if (ns == 0 || nt == 0)
    throw InvalidArgument("transport instance needs sources and targets");
  if (ns * nt > 1000000)
    throw InvalidArgument(
        "cost matrix exceeds 1e6 entries; subsample the boundary first");
  if (source_mass.size() != ns)
    throw InvalidArgument("source mass count mismatch");
  bool free_marginal = target_mass.empty();
  if (!free_marginal && target_mass.size() != nt)
    throw InvalidArgument("target mass count mismatch");

  double total_a = 0.0;
  for (double a : source_mass) {
    if (a < 0.0) throw InvalidArgument("negative source mass");
    total_a += a;
  }
  if (!(total_a > 0.0)) throw DegenerateMeasure("source measure has no mass");
  if (!free_marginal) {
    double total_b = 0.0;
    for (double b : target_mass) {
      if (b < 0.0) throw InvalidArgument("negative target mass");
      total_b += b;
    }
    if (std::abs(total_a - total_b) > 1e-9 * std::max(total_a, total_b))
      throw InfeasibleMarginals("source and target masses differ");
  }

  int sink = (int)(ns + nt);
  NetworkSimplex net((int)(ns + nt) + (free_marginal ? 1 : 0));
  for (size_t i = 0; i < ns; ++i) net.set_supply((int)i, source_mass[i]);
  if (free_marginal) {
    net.set_supply(sink, -total_a);
  } else {
    // rescale exactly onto the source total so the LP is balanced even when
    // the inputs differ inside the 1e-9 tolerance
    double total_b = 0.0;
    for (double b : target_mass) total_b += b;
    for (size_t j = 0; j < nt; ++j)
      net.set_supply((int)(ns + j), -target_mass[j] * (total_a / total_b));
  }
  for (size_t i = 0; i < ns; ++i)
    for (size_t j = 0; j < nt; ++j)
      net.add_arc((int)i, (int)(ns + j), dist(sources[i], targets[j]));
  if (free_marginal)
    for (size_t j = 0; j < nt; ++j) net.add_arc((int)(ns + j), sink, 0.0);

  net.solve();

  OtSolution sol;
  TransportPlan& plan = sol.plan;
  plan.sources.assign(sources.begin(), sources.end());
  plan.targets.assign(targets.begin(), targets.end());
  plan.source_mass.assign(ns, 0.0);
  plan.target_mass.assign(nt, 0.0);
  double mass_floor = 1e-14 * total_a;
  for (size_t i = 0; i < ns; ++i) {
    for (size_t j = 0; j < nt; ++j) {
      double fl = net.flow((int)(i * nt + j));
      if (fl > mass_floor) {
        plan.entries.push_back({(int32_t)i, (int32_t)j, fl});
        plan.source_mass[i] += fl;
        plan.target_mass[j] += fl;
        plan.cost += fl * dist(sources[i], targets[j]);
      }
    }
  }

  OptimalityCertificate& cert = sol.cert;
  double ref = free_marginal ? net.potential(sink) : 0.0;
  cert.source_potential.resize(ns);
  cert.target_potential.resize(nt);
  for (size_t i = 0; i < ns; ++i)
    cert.source_potential[i] = net.potential((int)i) - ref;
  for (size_t j = 0; j < nt; ++j)
    cert.target_potential[j] = ref - net.potential((int)(ns + j));
  for (size_t i = 0; i < ns; ++i) {
    for (size_t j = 0; j < nt; ++j) {
      double viol = cert.source_potential[i] + cert.target_potential[j] -
                    dist(sources[i], targets[j]);
      cert.max_feasibility_violation =
          std::max(cert.max_feasibility_violation, viol);
    }
  }
  for (const auto& e : plan.entries) {
    double slack = dist(sources[e.s], targets[e.t]) -
                   cert.source_potential[e.s] - cert.target_potential[e.t];
    cert.max_support_slack = std::max(cert.max_support_slack, std::abs(slack));
  }
  for (size_t i = 0; i < ns; ++i)
    cert.dual_value += source_mass[i] * cert.source_potential[i];
  for (size_t j = 0; j < nt; ++j)
    cert.dual_value += plan.target_mass[j] * cert.target_potential[j];
  cert.duality_gap = std::abs(plan.cost - cert.dual_value);
  return sol;
}

// Grid-node source measure convenience wrapper (targets default to the
// grid's boundary sample).
inline OtSolution solve_discrete_ot(const DomainGrid& g,
                                    const DiscreteMeasure& f,
                                    std::span<const double> target_mass = {}) {
  std::vector<Point> src(f.ids.size());
  for (size_t i = 0; i < f.ids.size(); ++i) src[i] = g.node_pos(f.ids[i]);
  return solve_discrete_ot(src, f.weights, g.boundary_points, target_mass);
}

struct W1Result {
  double value = 0.0;
  TransportPlan plan;
};

// Closed form: shipping each atom to its nearest boundary point is optimal
// for transport to a free boundary marginal, so W1 = sum_x f(x) d(x). The
// plan resolves ties through boundary_projection's angular order; among the
// tied candidates the exact distance minimizer is kept so cost == value.
inline W1Result w1_to_boundary(const DomainGrid& g, const DiscreteMeasure& f,
                               const DistanceField& d) {
  if (f.ids.size() != f.weights.size())
    throw InvalidArgument("malformed measure");
  W1Result r;
  r.plan.targets = g.boundary_points;
  r.plan.target_mass.assign(g.boundary_points.size(), 0.0);
  for (size_t i = 0; i < f.ids.size(); ++i) {
    int k = f.ids[i];
    double w = f.weights[i];
    Point x = g.node_pos(k);
    r.plan.sources.push_back(x);
    r.plan.source_mass.push_back(w);
    if (w <= 0.0) continue;
    double dk = d.values[k];
    r.value += w * dk;
    auto ties = boundary_projection(g, k);
    // first (in angular order) candidate achieving the exact minimum
    Point y = ties.front();
    double best = dist(x, ties.front());
    for (const auto& c : ties) {
      double dc = dist(x, c);
      if (dc < best - 1e-12 * dk) {
        best = dc;
        y = c;
      }
    }
    // locate y's index in the boundary sample (projection returns copies)
    int ty = -1;
    for (size_t j = 0; j < g.boundary_points.size(); ++j) {
      if (g.boundary_points[j].x == y.x && g.boundary_points[j].y == y.y) {
        ty = (int)j;
        break;
      }
    }
    r.plan.entries.push_back({(int32_t)i, (int32_t)ty, w});
    r.plan.target_mass[ty] += w;
    r.plan.cost += w * dist(x, y);
  }
  if (r.plan.sources.empty()) throw DegenerateMeasure("empty source measure");
  return r;
}

struct MaxW1Result {
  double value = 0.0;          // equals the inradius exactly
  DiscreteMeasure maximizer;   // uniform on the distance argmax band
};

// max over probability sources of W1(., boundary) is attained by any measure
// on the argmax of d; the discrete maximizer reported is uniform on the band.
inline MaxW1Result max_w1_over_sources(const DomainGrid& g,
                                       const DistanceField& d) {
  auto rep = inradius(g, d);
  MaxW1Result r;
  r.value = rep.R1;
  double w = 1.0 / rep.argmax_nodes.size();
  for (int k : rep.argmax_nodes) {
    r.maximizer.ids.push_back(k);
    r.maximizer.weights.push_back(w);
    r.maximizer.total_mass += w;
  }
  return r;
}

struct RaySet {
  struct Ray {
    int32_t source_node;
    Point target;
    std::vector<int32_t> nodes;  // interior nodes within h/2 of the segment
  };
  std::vector<Ray> rays;
};

// One ray per (significant source atom, tied boundary projection).
inline RaySet transport_rays(const DomainGrid& g, const DiscreteMeasure& f,
                             double mass_threshold = 1e-3) {
  double wmax = 0.0;
  for (double w : f.weights) wmax = std::max(wmax, w);
  if (!(wmax > 0.0)) throw DegenerateMeasure("source measure has no mass");
  RaySet rs;
  for (size_t i = 0; i < f.ids.size(); ++i) {
    if (f.weights[i] < mass_threshold * wmax) continue;
    int k = f.ids[i];
    Point x = g.node_pos(k);
    for (const Point& y : boundary_projection(g, k)) {
      RaySet::Ray ray{(int32_t)k, y, {}};
      // lattice window around the segment, filtered by distance to it
      double lox = std::min(x.x, y.x) - g.h, hix = std::max(x.x, y.x) + g.h;
      double loy = std::min(x.y, y.y) - g.h, hiy = std::max(x.y, y.y) + g.h;
      int i0 = std::max(0, (int)std::floor((lox - g.origin.x) / g.h));
      int i1 = std::min(g.nx - 1, (int)std::ceil((hix - g.origin.x) / g.h));
      int j0 = std::max(0, (int)std::floor((loy - g.origin.y) / g.h));
      int j1 = std::min(g.ny - 1, (int)std::ceil((hiy - g.origin.y) / g.h));
      for (int jj = j0; jj <= j1; ++jj) {
        for (int ii = i0; ii <= i1; ++ii) {
          int id = g.id_at(ii, jj);
          if (id < 0) continue;
          Point z{g.origin.x + ii * g.h, g.origin.y + jj * g.h};
          if (dist_point_segment(z, x, y) <= g.h / 2.0)
            ray.nodes.push_back(id);
        }
      }
      rs.rays.push_back(std::move(ray));
    }
  }
  if (rs.rays.empty()) throw EmptyRaySet("no source atom clears the threshold");
  return rs;
}

// Largest deviation of u from the affine profile lambda_inf * |z - y| along
// all rays; the limit eigenfunction is exactly affine on transport rays.
inline double ray_profile_check(const ScalarField& u, const RaySet& rays,
                                double lambda_inf, const DomainGrid& g) {
  if (rays.rays.empty()) throw EmptyRaySet("ray set is empty");
  double worst = 0.0;
  for (const auto& ray : rays.rays) {
    for (int32_t id : ray.nodes) {
      double want = lambda_inf * dist(g.node_pos(id), ray.target);
      worst = std::max(worst, std::abs(u.values[id] - want));
    }
  }
  return worst;
}

}  // namespace inflap
