#include "codashrink/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "codashrink/types.hpp"

namespace codashrink {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void SvgPlot::write(const std::filesystem::path& path) const {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      const double xv = x_log ? std::log10(x) : x;
      xmin = std::min(xmin, xv);
      xmax = std::max(xmax, xv);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!(xmin < xmax)) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (!(ymin < ymax)) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double ml = 60, mr = 20, mt = 36, mb = 48;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto sx = [&](double x) {
    const double xv = x_log ? std::log10(x) : x;
    return ml + (xv - xmin) / (xmax - xmin) * pw;
  };
  auto sy = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path.string());
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << num(width)
      << "' height='" << num(height) << "' viewBox='0 0 " << num(width) << " "
      << num(height) << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << num(width / 2) << "' y='20' text-anchor='middle' "
      << "font-family='sans-serif' font-size='14'>" << title << "</text>\n";

  // axes with 5 ticks each
  out << "<g stroke='#333' stroke-width='1' font-family='sans-serif' "
         "font-size='11' fill='#333'>\n";
  out << "<line x1='" << num(ml) << "' y1='" << num(mt + ph) << "' x2='"
      << num(ml + pw) << "' y2='" << num(mt + ph) << "'/>\n";
  out << "<line x1='" << num(ml) << "' y1='" << num(mt) << "' x2='" << num(ml)
      << "' y2='" << num(mt + ph) << "'/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = xmin + (xmax - xmin) * t / 4.0;
    const double vx = x_log ? std::pow(10.0, fx) : fx;
    const double px = ml + pw * t / 4.0;
    out << "<line x1='" << num(px) << "' y1='" << num(mt + ph) << "' x2='"
        << num(px) << "' y2='" << num(mt + ph + 4) << "'/>\n";
    out << "<text x='" << num(px) << "' y='" << num(mt + ph + 16)
        << "' text-anchor='middle' stroke='none'>" << num(vx) << "</text>\n";
    const double fy = ymin + (ymax - ymin) * t / 4.0;
    const double py = mt + ph - ph * t / 4.0;
    out << "<line x1='" << num(ml - 4) << "' y1='" << num(py) << "' x2='"
        << num(ml) << "' y2='" << num(py) << "'/>\n";
    out << "<text x='" << num(ml - 7) << "' y='" << num(py + 4)
        << "' text-anchor='end' stroke='none'>" << num(fy) << "</text>\n";
  }
  out << "</g>\n";
  out << "<text x='" << num(ml + pw / 2) << "' y='" << num(height - 10)
      << "' text-anchor='middle' font-family='sans-serif' font-size='12'>"
      << x_label << "</text>\n";
  out << "<text x='16' y='" << num(mt + ph / 2)
      << "' text-anchor='middle' font-family='sans-serif' font-size='12' "
      << "transform='rotate(-90 16 " << num(mt + ph / 2) << ")'>" << y_label
      << "</text>\n";

  double legend_y = mt + 6;
  for (const auto& s : series) {
    if (s.draw_line && s.points.size() > 1) {
      out << "<polyline fill='none' stroke='" << s.color
          << "' stroke-width='1.5' points='";
      for (auto [x, y] : s.points) out << num(sx(x)) << "," << num(sy(y)) << " ";
      out << "'/>\n";
    }
    if (s.draw_points) {
      for (auto [x, y] : s.points)
        out << "<circle cx='" << num(sx(x)) << "' cy='" << num(sy(y))
            << "' r='" << num(s.point_radius) << "' fill='" << s.color
            << "' fill-opacity='0.7'/>\n";
    }
    if (!s.label.empty()) {
      out << "<rect x='" << num(ml + pw - 150) << "' y='" << num(legend_y)
          << "' width='12' height='12' fill='" << s.color << "'/>\n";
      out << "<text x='" << num(ml + pw - 134) << "' y='" << num(legend_y + 10)
          << "' font-family='sans-serif' font-size='11'>" << s.label
          << "</text>\n";
      legend_y += 16;
    }
  }
  out << "</svg>\n";
}

}  // namespace codashrink
