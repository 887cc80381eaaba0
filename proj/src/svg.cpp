#include "oud/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace oud {

namespace {

constexpr double kMarginL = 52, kMarginR = 14, kMarginT = 26, kMarginB = 40;

std::string esc(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Range {
  double lo = 0.0, hi = 1.0;
};

void widen(Range& r, double v) {
  if (!std::isfinite(v)) return;
  r.lo = std::min(r.lo, v);
  r.hi = std::max(r.hi, v);
}

Range data_range(const SvgPanel& p, bool x_axis) {
  Range r{std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity()};
  for (const auto& s : p.series) {
    for (double v : (x_axis ? s.x : s.y)) widen(r, v);
  }
  for (const auto& pts : p.points) {
    for (double v : (x_axis ? pts.x : pts.y)) widen(r, v);
  }
  if (!(r.lo <= r.hi)) r = {0.0, 1.0};
  if (x_axis) {
    if (p.x_min) r.lo = *p.x_min;
    if (p.x_max) r.hi = *p.x_max;
  } else {
    if (p.y_min) r.lo = *p.y_min;
    if (p.y_max) r.hi = *p.y_max;
  }
  if (r.lo == r.hi) {
    const double pad = r.lo == 0.0 ? 0.5 : std::abs(r.lo) * 0.1;
    r.lo -= pad;
    r.hi += pad;
  } else {
    const double pad = (r.hi - r.lo) * 0.05;
    const bool lo_fixed = x_axis ? p.x_min.has_value() : p.y_min.has_value();
    const bool hi_fixed = x_axis ? p.x_max.has_value() : p.y_max.has_value();
    if (!lo_fixed) r.lo -= pad;
    if (!hi_fixed) r.hi += pad;
  }
  return r;
}

std::vector<double> nice_ticks(const Range& r) {
  const double raw = (r.hi - r.lo) / 4.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double res = raw / mag;
  double step = 10.0 * mag;
  if (res <= 1.0) step = mag;
  else if (res <= 2.0) step = 2.0 * mag;
  else if (res <= 5.0) step = 5.0 * mag;
  std::vector<double> t;
  for (double v = std::ceil(r.lo / step) * step; v <= r.hi + step * 1e-9; v += step) {
    t.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
  }
  return t;
}

}  // namespace

std::string series_color(std::size_t i) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                   "#bcbd22", "#17becf"};
  return kPalette[i % 10];
}

std::string svg_panel_grid(const std::vector<std::vector<SvgPanel>>& rows,
                           int panel_w, int panel_h) {
  if (rows.empty()) throw std::invalid_argument("svg: no panels");
  std::size_t max_cols = 0;
  for (const auto& r : rows) max_cols = std::max(max_cols, r.size());
  if (max_cols == 0) throw std::invalid_argument("svg: empty panel row");

  const double W = static_cast<double>(max_cols) * panel_w;
  const double H = static_cast<double>(rows.size()) * panel_h;
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" +
         num(H) + "\" viewBox=\"0 0 " + num(W) + " " + num(H) + "\">\n";
  out += "<rect width=\"" + num(W) + "\" height=\"" + num(H) + "\" fill=\"white\"/>\n";

  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    for (std::size_t ci = 0; ci < rows[ri].size(); ++ci) {
      const SvgPanel& p = rows[ri][ci];
      const double ox = static_cast<double>(ci) * panel_w;
      const double oy = static_cast<double>(ri) * panel_h;
      const double px0 = ox + kMarginL, py0 = oy + kMarginT;
      const double pw = panel_w - kMarginL - kMarginR;
      const double ph = panel_h - kMarginT - kMarginB;
      const Range xr = data_range(p, true);
      const Range yr = data_range(p, false);
      auto sx = [&](double v) { return px0 + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
      auto sy = [&](double v) { return py0 + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph; };

      out += "<g class=\"panel\">\n";
      out += "<rect x=\"" + num(px0) + "\" y=\"" + num(py0) + "\" width=\"" + num(pw) +
             "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
      if (!p.title.empty()) {
        out += "<text x=\"" + num(px0 + pw / 2) + "\" y=\"" + num(oy + 17) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
               esc(p.title) + "</text>\n";
      }
      for (double t : nice_ticks(xr)) {
        const double x = sx(t);
        out += "<line x1=\"" + num(x) + "\" y1=\"" + num(py0 + ph) + "\" x2=\"" + num(x) +
               "\" y2=\"" + num(py0 + ph + 4) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + num(x) + "\" y=\"" + num(py0 + ph + 16) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
               esc(num(t)) + "</text>\n";
      }
      for (double t : nice_ticks(yr)) {
        const double y = sy(t);
        out += "<line x1=\"" + num(px0 - 4) + "\" y1=\"" + num(y) + "\" x2=\"" + num(px0) +
               "\" y2=\"" + num(y) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + num(px0 - 7) + "\" y=\"" + num(y + 3) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" +
               esc(num(t)) + "</text>\n";
      }
      if (!p.x_label.empty()) {
        out += "<text x=\"" + num(px0 + pw / 2) + "\" y=\"" + num(py0 + ph + 32) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               esc(p.x_label) + "</text>\n";
      }
      if (!p.y_label.empty()) {
        out += "<text x=\"" + num(ox + 14) + "\" y=\"" + num(py0 + ph / 2) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" transform=\"rotate(-90 " +
               num(ox + 14) + " " + num(py0 + ph / 2) + ")\">" + esc(p.y_label) + "</text>\n";
      }

      // Clip drawing to the axes box.
      const std::string clip_id = "clip" + std::to_string(ri) + "_" + std::to_string(ci);
      out += "<clipPath id=\"" + clip_id + "\"><rect x=\"" + num(px0) + "\" y=\"" + num(py0) +
             "\" width=\"" + num(pw) + "\" height=\"" + num(ph) + "\"/></clipPath>\n";
      out += "<g clip-path=\"url(#" + clip_id + ")\">\n";
      for (const auto& s : p.series) {
        if (s.x.size() != s.y.size()) throw std::invalid_argument("svg series: x/y length mismatch");
        if (s.x.empty()) continue;
        out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"" +
               num(s.width) + "\"";
        if (s.dashed) out += " stroke-dasharray=\"5,3\"";
        out += " points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
          if (i > 0) out += ' ';
          out += num(sx(s.x[i])) + "," + num(sy(s.y[i]));
        }
        out += "\"/>\n";
      }
      for (const auto& pts : p.points) {
        if (pts.x.size() != pts.y.size()) throw std::invalid_argument("svg points: x/y length mismatch");
        for (std::size_t i = 0; i < pts.x.size(); ++i) {
          out += "<circle cx=\"" + num(sx(pts.x[i])) + "\" cy=\"" + num(sy(pts.y[i])) +
                 "\" r=\"" + num(pts.radius) + "\" fill=\"" + pts.color + "\" fill-opacity=\"" +
                 num(pts.opacity) + "\"/>\n";
        }
      }
      out += "</g>\n";

      // Legend for labeled series.
      double ly = py0 + 14;
      for (const auto& s : p.series) {
        if (s.label.empty()) continue;
        out += "<line x1=\"" + num(px0 + pw - 70) + "\" y1=\"" + num(ly - 3) + "\" x2=\"" +
               num(px0 + pw - 54) + "\" y2=\"" + num(ly - 3) + "\" stroke=\"" + s.color +
               "\" stroke-width=\"2\"";
        if (s.dashed) out += " stroke-dasharray=\"5,3\"";
        out += "/>\n";
        out += "<text x=\"" + num(px0 + pw - 50) + "\" y=\"" + num(ly) +
               "\" font-family=\"sans-serif\" font-size=\"10\">" + esc(s.label) + "</text>\n";
        ly += 13;
      }
      out += "</g>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace oud
