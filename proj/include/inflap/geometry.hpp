// Discretized planar domains: lattice grids with an interior mask (Dirichlet
// data imposed by zero extension), analytic boundary sampling, exhaustive
// distance-to-boundary, inradius, and nearest-boundary projections.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "inflap/core.hpp"

namespace inflap {

enum class ShapeKind { Disk, Rectangle, LShape, Annulus, Polygon };

struct DomainSpec {
  ShapeKind kind = ShapeKind::Disk;
  // disk / annulus
  Point center{0.0, 0.0};
  double radius = 1.0;
  double r_in = 0.5;
  double r_out = 1.0;
  // rectangle
  Point corner_min{0.0, 0.0};
  Point corner_max{1.0, 1.0};
  // l_shape: [0,outer]^2 minus the closed square [outer-notch,outer]^2
  double outer_side = 2.0;
  double notch_side = 1.0;
  // polygon: simple, counterclockwise or clockwise, implicitly closed
  std::vector<Point> vertices;

  static DomainSpec disk(Point c, double r) {
    DomainSpec s;
    s.kind = ShapeKind::Disk;
    s.center = c;
    s.radius = r;
    return s;
  }
  static DomainSpec rectangle(Point lo, Point hi) {
    DomainSpec s;
    s.kind = ShapeKind::Rectangle;
    s.corner_min = lo;
    s.corner_max = hi;
    return s;
  }
  static DomainSpec unit_square() { return rectangle({0.0, 0.0}, {1.0, 1.0}); }
  static DomainSpec l_shape(double outer, double notch) {
    DomainSpec s;
    s.kind = ShapeKind::LShape;
    s.outer_side = outer;
    s.notch_side = notch;
    return s;
  }
  static DomainSpec annulus(Point c, double rin, double rout) {
    DomainSpec s;
    s.kind = ShapeKind::Annulus;
    s.center = c;
    s.r_in = rin;
    s.r_out = rout;
    return s;
  }
  static DomainSpec polygon(std::vector<Point> verts) {
    DomainSpec s;
    s.kind = ShapeKind::Polygon;
    s.vertices = std::move(verts);
    return s;
  }

  std::string name() const {
    switch (kind) {
      case ShapeKind::Disk: return "disk";
      case ShapeKind::Rectangle: return "rectangle";
      case ShapeKind::LShape: return "l_shape";
      case ShapeKind::Annulus: return "annulus";
      case ShapeKind::Polygon: return "polygon";
    }
    return "unknown";
  }
};

struct ScalarField {
  std::vector<double> values;  // one entry per interior node
};

struct DistanceField {
  std::vector<double> values;  // one entry per interior node
};

// ---------------------------------------------------------------- helpers

inline double dist_point_segment(Point p, Point a, Point b) {
  Point ab = b - a;
  double l2 = dot(ab, ab);
  if (l2 == 0.0) return dist(p, a);
  double t = std::clamp(dot(p - a, ab) / l2, 0.0, 1.0);
  return dist(p, Point{a.x + t * ab.x, a.y + t * ab.y});
}

namespace detail {

inline double orient(Point a, Point b, Point c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Proper or improper crossing of two closed segments.
inline bool segments_intersect(Point a, Point b, Point c, Point d) {
  double o1 = orient(a, b, c), o2 = orient(a, b, d);
  double o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 &&
      o3 != 0 && o4 != 0)
    return true;
  auto on = [](Point p, Point q, Point r) {
    return orient(p, q, r) == 0.0 && std::min(p.x, q.x) <= r.x &&
           r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
           r.y <= std::max(p.y, q.y);
  };
  return on(a, b, c) || on(a, b, d) || on(c, d, a) || on(c, d, b);
}

inline double dist_point_polyline(Point p, const std::vector<Point>& v) {
  double d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < v.size(); ++i)
    d = std::min(d, dist_point_segment(p, v[i], v[(i + 1) % v.size()]));
  return d;
}

// Even-odd crossing test; callers exclude points within eps of the outline
// first, so ray/vertex coincidences cannot flip the answer for points we
// actually classify as interior.
inline bool inside_polygon(Point p, const std::vector<Point>& v) {
  bool in = false;
  for (size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      double xi =
          v[j].x + (p.y - v[j].y) / (v[i].y - v[j].y) * (v[i].x - v[j].x);
      if (p.x < xi) in = !in;
    }
  }
  return in;
}

}  // namespace detail

// Closed outline for the polygonal shapes (used for sampling and features).
inline std::vector<Point> polygon_outline(const DomainSpec& s) {
  switch (s.kind) {
    case ShapeKind::Rectangle:
      return {s.corner_min,
              {s.corner_max.x, s.corner_min.y},
              s.corner_max,
              {s.corner_min.x, s.corner_max.y}};
    case ShapeKind::LShape: {
      double a = s.outer_side, c = s.outer_side - s.notch_side;
      return {{0, 0}, {a, 0}, {a, c}, {c, c}, {c, a}, {0, a}};
    }
    case ShapeKind::Polygon:
      return s.vertices;
    default:
      return {};
  }
}

inline void validate_spec(const DomainSpec& s) {
  auto finite = [](double v) { return std::isfinite(v); };
  switch (s.kind) {
    case ShapeKind::Disk:
      if (!(finite(s.radius) && s.radius > 0.0))
        throw DegenerateSpec("disk radius must be positive");
      break;
    case ShapeKind::Rectangle:
      if (!(s.corner_max.x > s.corner_min.x && s.corner_max.y > s.corner_min.y))
        throw DegenerateSpec("rectangle extents must be positive");
      break;
    case ShapeKind::LShape:
      if (!(s.outer_side > 0.0 && s.notch_side > 0.0 &&
            s.notch_side < s.outer_side))
        throw DegenerateSpec("l_shape requires 0 < notch_side < outer_side");
      break;
    case ShapeKind::Annulus:
      if (!(s.r_in > 0.0 && s.r_out > s.r_in))
        throw DegenerateSpec("annulus requires 0 < r_in < r_out");
      break;
    case ShapeKind::Polygon: {
      const auto& v = s.vertices;
      if (v.size() < 3) throw DegenerateSpec("polygon needs >= 3 vertices");
      size_t n = v.size();
      double area2 = 0.0;
      for (size_t i = 0; i < n; ++i) {
        Point a = v[i], b = v[(i + 1) % n];
        area2 += a.x * b.y - b.x * a.y;
        if (dist(a, b) == 0.0)
          throw DegenerateSpec("polygon has a zero-length edge");
      }
      if (area2 == 0.0) throw DegenerateSpec("polygon has zero area");
      for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
          // skip edges sharing a vertex
          if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
          if (detail::segments_intersect(v[i], v[(i + 1) % n], v[j],
                                         v[(j + 1) % n]))
            throw DegenerateSpec("polygon is not simple");
        }
      }
      break;
    }
  }
}

// Width of the narrowest local feature the lattice must resolve. Convex
// shapes without necks (disk, rectangle) impose no constraint.
inline double feature_size(const DomainSpec& s) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (s.kind) {
    case ShapeKind::Disk:
    case ShapeKind::Rectangle:
      return inf;
    case ShapeKind::LShape:
      return std::min(s.notch_side, s.outer_side - s.notch_side);
    case ShapeKind::Annulus:
      return s.r_out - s.r_in;
    case ShapeKind::Polygon: {
      const auto& v = s.vertices;
      size_t n = v.size();
      double f = inf;
      for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
          if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
          // distance between non-adjacent edges i and j
          Point a = v[i], b = v[(i + 1) % n];
          Point c = v[j], d = v[(j + 1) % n];
          f = std::min({f, dist_point_segment(a, c, d),
                        dist_point_segment(b, c, d),
                        dist_point_segment(c, a, b),
                        dist_point_segment(d, a, b)});
        }
      }
      return f;
    }
  }
  return inf;
}

inline bool inside(const DomainSpec& s, Point p) {
  switch (s.kind) {
    case ShapeKind::Disk:
      return dist(p, s.center) < s.radius;
    case ShapeKind::Rectangle:
      return p.x > s.corner_min.x && p.x < s.corner_max.x &&
             p.y > s.corner_min.y && p.y < s.corner_max.y;
    case ShapeKind::LShape: {
      double a = s.outer_side, c = s.outer_side - s.notch_side;
      if (!(p.x > 0.0 && p.x < a && p.y > 0.0 && p.y < a)) return false;
      return !(p.x >= c && p.y >= c);  // removed closed notch square
    }
    case ShapeKind::Annulus: {
      double r = dist(p, s.center);
      return r > s.r_in && r < s.r_out;
    }
    case ShapeKind::Polygon: {
      double scale = 0.0;
      for (const auto& q : s.vertices)
        scale = std::max({scale, std::abs(q.x), std::abs(q.y)});
      if (detail::dist_point_polyline(p, s.vertices) <= 1e-12 * std::max(scale, 1.0))
        return false;
      return detail::inside_polygon(p, s.vertices);
    }
  }
  return false;
}

struct BBox {
  Point lo, hi;
};

inline BBox bounding_box(const DomainSpec& s) {
  switch (s.kind) {
    case ShapeKind::Disk:
      return {{s.center.x - s.radius, s.center.y - s.radius},
              {s.center.x + s.radius, s.center.y + s.radius}};
    case ShapeKind::Annulus:
      return {{s.center.x - s.r_out, s.center.y - s.r_out},
              {s.center.x + s.r_out, s.center.y + s.r_out}};
    default: {
      auto v = polygon_outline(s);
      BBox b{{v[0].x, v[0].y}, {v[0].x, v[0].y}};
      for (const auto& p : v) {
        b.lo.x = std::min(b.lo.x, p.x);
        b.lo.y = std::min(b.lo.y, p.y);
        b.hi.x = std::max(b.hi.x, p.x);
        b.hi.y = std::max(b.hi.y, p.y);
      }
      return b;
    }
  }
}

inline double perimeter(const DomainSpec& s) {
  switch (s.kind) {
    case ShapeKind::Disk:
      return 2.0 * std::numbers::pi * s.radius;
    case ShapeKind::Annulus:
      return 2.0 * std::numbers::pi * (s.r_in + s.r_out);
    default: {
      auto v = polygon_outline(s);
      double l = 0.0;
      for (size_t i = 0; i < v.size(); ++i)
        l += dist(v[i], v[(i + 1) % v.size()]);
      return l;
    }
  }
}

// Analytic boundary sample at spacing <= `spacing`: circles at equal arc
// length, polygon edges subdivided per edge (each corner emitted once).
inline std::vector<Point> sample_boundary(const DomainSpec& s, double spacing) {
  std::vector<Point> pts;
  auto circle = [&](Point c, double r) {
    int n = std::max<int>(8, (int)std::ceil(2.0 * std::numbers::pi * r / spacing));
    for (int k = 0; k < n; ++k) {
      double th = 2.0 * std::numbers::pi * k / n;
      pts.push_back({c.x + r * std::cos(th), c.y + r * std::sin(th)});
    }
  };
  switch (s.kind) {
    case ShapeKind::Disk:
      circle(s.center, s.radius);
      break;
    case ShapeKind::Annulus:
      circle(s.center, s.r_out);
      circle(s.center, s.r_in);
      break;
    default: {
      auto v = polygon_outline(s);
      for (size_t i = 0; i < v.size(); ++i) {
        Point a = v[i], b = v[(i + 1) % v.size()];
        int n = std::max<int>(1, (int)std::ceil(dist(a, b) / spacing));
        for (int k = 0; k < n; ++k) {
          double t = (double)k / n;
          pts.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
      }
      break;
    }
  }
  return pts;
}

// ---------------------------------------------------------------- the grid

struct DomainGrid {
  DomainSpec spec;
  double h = 0.0;
  int nx = 0, ny = 0;  // lattice extents (nodes per axis over the bbox)
  Point origin;        // position of lattice node (0,0)
  double cell_area = 0.0;
  std::vector<uint8_t> interior_mask;  // nx*ny lattice flags
  std::vector<Point> boundary_points;  // analytic samples on the true boundary

  // compact indexing of interior nodes
  std::vector<int32_t> node_id;          // lattice -> compact id or -1
  std::vector<int32_t> node_ix, node_iy; // compact id -> lattice coords

  // forward-difference stencils: every lattice point whose {self, +x, +y}
  // triple touches the interior carries a gradient sample
  struct Cell {
    int32_t base, right, up;  // compact node ids, -1 = zero extension
    int32_t cx, cy;           // lattice coords of the base corner
  };
  std::vector<Cell> cells;

  int lattice_index(int i, int j) const { return j * nx + i; }
  int interior_count() const { return (int)node_ix.size(); }
  int cell_count() const { return (int)cells.size(); }
  Point node_pos(int k) const {
    return {origin.x + node_ix[k] * h, origin.y + node_iy[k] * h};
  }
  Point cell_pos(int c) const {
    return {origin.x + cells[c].cx * h, origin.y + cells[c].cy * h};
  }
  int id_at(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx || j >= ny) return -1;
    return node_id[lattice_index(i, j)];
  }
  // measured areas: both converge to |Omega| as h -> 0
  double node_area() const { return interior_count() * cell_area; }
  double cell_set_area() const { return cell_count() * cell_area; }
};

// Shared by the distance field and the transport closed form so that both
// produce identical doubles for identical query points.
inline double min_dist_to_boundary(const DomainGrid& g, Point x) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : g.boundary_points) {
    double dx = x.x - b.x, dy = x.y - b.y;
    double d = std::sqrt(dx * dx + dy * dy);
    if (d < best) best = d;
  }
  return best;
}

inline DomainGrid build_domain(const DomainSpec& spec, double h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw InvalidArgument("grid spacing h must be positive");
  validate_spec(spec);
  double feat = feature_size(spec);
  if (h * 8.0 > feat)
    throw FeatureTooFine("narrowest feature spans fewer than 8 cells at this h");

  DomainGrid g;
  g.spec = spec;
  g.h = h;
  g.cell_area = h * h;
  BBox bb = bounding_box(spec);
  g.origin = bb.lo;
  g.nx = (int)std::ceil((bb.hi.x - bb.lo.x) / h - 1e-9) + 1;
  g.ny = (int)std::ceil((bb.hi.y - bb.lo.y) / h - 1e-9) + 1;

  g.interior_mask.assign((size_t)g.nx * g.ny, 0);
  g.node_id.assign((size_t)g.nx * g.ny, -1);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      Point p{g.origin.x + i * h, g.origin.y + j * h};
      if (inside(spec, p)) g.interior_mask[g.lattice_index(i, j)] = 1;
    }
  }

  int n = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (g.interior_mask[g.lattice_index(i, j)]) {
        g.node_id[g.lattice_index(i, j)] = n++;
        g.node_ix.push_back(i);
        g.node_iy.push_back(j);
      }
  if (n == 0) throw FeatureTooFine("grid resolves no interior nodes");

  // flood fill (4-neighbor): a split mask means an unresolved feature
  {
    std::vector<uint8_t> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int k = stack.back();
      stack.pop_back();
      int i = g.node_ix[k], j = g.node_iy[k];
      for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        int m = g.id_at(i + di, j + dj);
        if (m >= 0 && !seen[m]) {
          seen[m] = 1;
          ++count;
          stack.push_back(m);
        }
      }
    }
    if (count != n)
      throw FeatureTooFine("interior mask is disconnected at this h");
  }

  g.boundary_points = sample_boundary(spec, h / 2.0);

  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      int32_t b = g.id_at(i, j), r = g.id_at(i + 1, j), u = g.id_at(i, j + 1);
      if (b >= 0 || r >= 0 || u >= 0) g.cells.push_back({b, r, u, i, j});
    }
  }
  return g;
}

inline DistanceField distance_to_boundary(const DomainGrid& g) {
  DistanceField d;
  d.values.resize(g.interior_count());
  for (int k = 0; k < g.interior_count(); ++k)
    d.values[k] = min_dist_to_boundary(g, g.node_pos(k));
  return d;
}

struct InradiusReport {
  double R1 = 0.0;
  std::vector<int> argmax_nodes;  // all nodes with d >= R1 - 2h
};

inline InradiusReport inradius(const DomainGrid& g, const DistanceField& d) {
  if (d.values.empty()) throw InvalidArgument("empty distance field");
  InradiusReport r;
  r.R1 = *std::max_element(d.values.begin(), d.values.end());
  for (int k = 0; k < (int)d.values.size(); ++k)
    if (d.values[k] >= r.R1 - 2.0 * g.h) r.argmax_nodes.push_back(k);
  return r;
}

// All boundary samples within tie_tol = h/2 of the minimal distance from
// node k, sorted by angle around the node for determinism.
inline std::vector<Point> boundary_projection(const DomainGrid& g, int k) {
  if (k < 0 || k >= g.interior_count())
    throw NotInterior("node index out of range");
  Point x = g.node_pos(k);
  double dmin = min_dist_to_boundary(g, x);
  std::vector<Point> out;
  for (const auto& b : g.boundary_points)
    if (dist(x, b) <= dmin + g.h / 2.0) out.push_back(b);
  std::sort(out.begin(), out.end(), [&](Point a, Point b) {
    return std::atan2(a.y - x.y, a.x - x.x) < std::atan2(b.y - x.y, b.x - x.x);
  });
  return out;
}

// Point overload: snaps to the nearest lattice node, which must be interior.
inline std::vector<Point> boundary_projection(const DomainGrid& g, Point x) {
  int i = (int)std::lround((x.x - g.origin.x) / g.h);
  int j = (int)std::lround((x.y - g.origin.y) / g.h);
  int k = g.id_at(i, j);
  if (k < 0) throw NotInterior("point does not snap to an interior node");
  return boundary_projection(g, k);
}

}  // namespace inflap
