// Forward-difference gradient on the masked lattice and its exact negative
// adjoint, which serves as the discrete divergence. Zero extension across the
// mask boundary imposes the Dirichlet condition; because the divergence is
// assembled as the literal transpose of the gradient scatter, the summation-
// by-parts identity <Gu, w> = <u, G^T w> holds to machine rounding, which the
// duality and residual checks rely on.
#pragma once

#include <span>
#include <vector>

#include "inflap/geometry.hpp"

namespace inflap {

struct GradField {
  std::vector<double> x, y;  // one pair per gradient cell
  void resize(size_t n) {
    x.assign(n, 0.0);
    y.assign(n, 0.0);
  }
};

inline void gradient(const DomainGrid& g, std::span<const double> u,
                     GradField& out) {
  size_t nc = g.cells.size();
  out.x.resize(nc);
  out.y.resize(nc);
  double inv_h = 1.0 / g.h;
  for (size_t c = 0; c < nc; ++c) {
    const auto& cell = g.cells[c];
    double ub = cell.base >= 0 ? u[cell.base] : 0.0;
    double ur = cell.right >= 0 ? u[cell.right] : 0.0;
    double uu = cell.up >= 0 ? u[cell.up] : 0.0;
    out.x[c] = (ur - ub) * inv_h;
    out.y[c] = (uu - ub) * inv_h;
  }
}

// out = G^T w on interior nodes, i.e. the negative discrete divergence.
inline void divergence_transpose(const DomainGrid& g, const GradField& w,
                                 std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  double inv_h = 1.0 / g.h;
  for (size_t c = 0; c < g.cells.size(); ++c) {
    const auto& cell = g.cells[c];
    if (cell.base >= 0) out[cell.base] -= (w.x[c] + w.y[c]) * inv_h;
    if (cell.right >= 0) out[cell.right] += w.x[c] * inv_h;
    if (cell.up >= 0) out[cell.up] += w.y[c] * inv_h;
  }
}

// Flux lost through the mask boundary, accumulated at the exterior lattice
// points the stencils touch: returns positions and weights of (div w)
// restricted to those ghost points, scaled by cell_area so the result is a
// measure. For w = sigma_p this is the boundary part of the limit measure.
struct GhostMeasure {
  std::vector<Point> points;
  std::vector<double> weights;
  double total_mass = 0.0;
};

inline GhostMeasure ghost_divergence(const DomainGrid& g, const GradField& w) {
  // accumulate G^T w at non-interior lattice slots
  std::vector<double> acc((size_t)g.nx * g.ny, 0.0);
  double inv_h = 1.0 / g.h;
  auto lat = [&](const DomainGrid::Cell& cell, int dx, int dy) {
    return (size_t)g.lattice_index(cell.cx + dx, cell.cy + dy);
  };
  for (size_t c = 0; c < g.cells.size(); ++c) {
    const auto& cell = g.cells[c];
    if (cell.base < 0) acc[lat(cell, 0, 0)] -= (w.x[c] + w.y[c]) * inv_h;
    if (cell.right < 0 && cell.cx + 1 < g.nx)
      acc[lat(cell, 1, 0)] += w.x[c] * inv_h;
    if (cell.up < 0 && cell.cy + 1 < g.ny)
      acc[lat(cell, 0, 1)] += w.y[c] * inv_h;
  }
  GhostMeasure m;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double a = acc[g.lattice_index(i, j)];
      if (a != 0.0) {
        // (div w) at the ghost = -(G^T w); weight by cell area
        double wgt = -a * g.cell_area;
        m.points.push_back({g.origin.x + i * g.h, g.origin.y + j * g.h});
        m.weights.push_back(wgt);
        m.total_mass += wgt;
      }
    }
  }
  return m;
}

inline double inner_nodes(const DomainGrid& g, std::span<const double> a,
                          std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * g.cell_area;
}

inline double inner_cells(const DomainGrid& g, const GradField& a,
                          const GradField& b) {
  double s = 0.0;
  for (size_t c = 0; c < a.x.size(); ++c)
    s += a.x[c] * b.x[c] + a.y[c] * b.y[c];
  return s * g.cell_area;
}

}  // namespace inflap
