#pragma once

#include <optional>
#include <string>
#include <vector>

namespace oud {

struct SvgSeries {
  std::vector<double> x, y;
  std::string color = "#1f77b4";
  double width = 1.0;
  bool dashed = false;
  std::string label;
};

struct SvgPoints {
  std::vector<double> x, y;
  std::string color = "#1f77b4";
  double radius = 1.6;
  double opacity = 0.6;
};

// One axes panel; ranges are padded data bounds unless fixed.
struct SvgPanel {
  std::string title, x_label, y_label;
  std::vector<SvgSeries> series;
  std::vector<SvgPoints> points;
  std::optional<double> x_min, x_max, y_min, y_max;
};

// Grid of panels, one <g class="panel"> element each; returns a complete
// standalone SVG document.
std::string svg_panel_grid(const std::vector<std::vector<SvgPanel>>& rows,
                           int panel_w = 300, int panel_h = 240);

// Color helpers for qualitative series.
std::string series_color(std::size_t i);

}  // namespace oud
