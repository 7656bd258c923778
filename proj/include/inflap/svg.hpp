// Static SVG plots: grayscale node heatmaps, transport-ray overlays, and the
// multi-panel study figure. Plots are artifacts, not UI; output is plain
// deterministic markup with no external references.
#pragma once

#include <algorithm>
#include <cstdio>
#include <span>
#include <string>

#include "inflap/asymptotics.hpp"
#include "inflap/io.hpp"

namespace inflap {

namespace detail {

inline std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// One heatmap tile at pixel offset (ox, oy): darker = larger value. Appends
// the node rectangles, optional ray overlay, and a caption.
inline void heatmap_tile(std::string& out, const DomainGrid& g,
                         std::span<const double> values, double ox, double oy,
                         double scale, const std::string& caption,
                         const RaySet* rays) {
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  if (vmax <= 0.0) vmax = 1.0;
  double wx = (g.nx - 1) * g.h, wy = (g.ny - 1) * g.h;
  auto X = [&](double x) { return ox + (x - g.origin.x) * scale; };
  // svg y grows downward
  auto Y = [&](double y) { return oy + (g.origin.y + wy - y) * scale; };

  out += "<g>\n";
  out += "<rect x=\"" + px(ox) + "\" y=\"" + px(oy) + "\" width=\"" +
         px(wx * scale) + "\" height=\"" + px(wy * scale) +
         "\" fill=\"white\" stroke=\"#999\" stroke-width=\"0.5\"/>\n";
  double cell = g.h * scale;
  for (int k = 0; k < g.interior_count(); ++k) {
    Point p = g.node_pos(k);
    int shade = (int)std::lround(255.0 * (1.0 - std::abs(values[k]) / vmax));
    shade = std::clamp(shade, 0, 255);
    char color[10];
    std::snprintf(color, sizeof(color), "#%02x%02x%02x", shade, shade, shade);
    out += "<rect x=\"" + px(X(p.x) - cell / 2) + "\" y=\"" +
           px(Y(p.y) - cell / 2) + "\" width=\"" + px(cell) + "\" height=\"" +
           px(cell) + "\" fill=\"" + color + "\"/>\n";
  }
  if (rays) {
    for (const auto& ray : rays->rays) {
      Point s = g.node_pos(ray.source_node);
      out += "<line x1=\"" + px(X(s.x)) + "\" y1=\"" + px(Y(s.y)) +
             "\" x2=\"" + px(X(ray.target.x)) + "\" y2=\"" +
             px(Y(ray.target.y)) +
             "\" stroke=\"#c02020\" stroke-width=\"0.8\" opacity=\"0.6\"/>\n";
    }
  }
  out += "<text x=\"" + px(ox) + "\" y=\"" + px(oy + wy * scale + 14.0) +
         "\" font-family=\"monospace\" font-size=\"12\">" + caption +
         "</text>\n</g>\n";
}

}  // namespace detail

inline void write_svg_heatmap(const std::string& path, const DomainGrid& g,
                              std::span<const double> values,
                              const std::string& caption,
                              const RaySet* rays = nullptr) {
  double wx = (g.nx - 1) * g.h, wy = (g.ny - 1) * g.h;
  double scale = 420.0 / std::max(wx, wy);
  double W = wx * scale + 20.0, H = wy * scale + 40.0;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    detail::px(W) + "\" height=\"" + detail::px(H) + "\">\n";
  detail::heatmap_tile(out, g, values, 10.0, 10.0, scale, caption, rays);
  out += "</svg>\n";
  write_text(path, out);
}

// Panel: u at the first, middle, and last converged rows, then f at the last
// row with its transport rays overlaid.
inline void write_svg_study_panel(const std::string& path,
                                  const SweepResult& s) {
  std::vector<const SweepRecord*> done;
  for (const auto& r : s.records)
    if (r.converged && !r.u.values.empty()) done.push_back(&r);
  if (done.empty()) throw InvalidArgument("no converged rows to plot");

  std::vector<std::pair<const SweepRecord*, bool>> tiles;  // (row, is_f)
  tiles.push_back({done.front(), false});
  if (done.size() > 2) tiles.push_back({done[done.size() / 2], false});
  if (done.size() > 1) tiles.push_back({done.back(), false});
  tiles.push_back({done.back(), true});

  const DomainGrid& g = s.grid;
  double wx = (g.nx - 1) * g.h, wy = (g.ny - 1) * g.h;
  double scale = 220.0 / std::max(wx, wy);
  double tw = wx * scale + 24.0, th = wy * scale + 40.0;
  double W = tw * tiles.size() + 10.0, H = th + 10.0;

  RaySet rays;
  bool have_rays = false;
  try {
    rays = transport_rays(g, done.back()->f);
    have_rays = true;
  } catch (const Error&) {
  }

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    detail::px(W) + "\" height=\"" + detail::px(H) + "\">\n";
  double ox = 10.0;
  for (auto [row, is_f] : tiles) {
    char cap[64];
    std::snprintf(cap, sizeof(cap), "%s p=%g", is_f ? "f" : "u", row->p);
    if (is_f) {
      std::vector<double> dens(g.interior_count(), 0.0);
      for (size_t i = 0; i < row->f.ids.size(); ++i)
        dens[row->f.ids[i]] = row->f.weights[i];
      detail::heatmap_tile(out, g, dens, ox, 10.0, scale, cap,
                           have_rays ? &rays : nullptr);
    } else {
      detail::heatmap_tile(out, g, row->u.values, ox, 10.0, scale, cap,
                           nullptr);
    }
    ox += tw;
  }
  out += "</svg>\n";
  write_text(path, out);
}

}  // namespace inflap
