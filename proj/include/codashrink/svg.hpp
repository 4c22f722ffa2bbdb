#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace codashrink {

// Minimal line/point SVG plots so experiment figures need no external
// plotting dependency. CSV remains the canonical output.
struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
  bool draw_line = true;
  bool draw_points = true;
  double point_radius = 2.5;
};

struct SvgPlot {
  std::string title, x_label, y_label;
  double width = 640, height = 440;
  bool x_log = false;
  std::vector<SvgSeries> series;

  void write(const std::filesystem::path& path) const;
};

}  // namespace codashrink
