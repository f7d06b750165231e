#include "tdcast/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "tdcast/errors.hpp"

namespace tdcast {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
constexpr int kPaletteSize = 6;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round a raw step to 1/2/5 times a power of ten.
double nice_step(double raw) {
  if (raw <= 0.0) return 1.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  if (frac <= 1.0) return mag;
  if (frac <= 2.0) return 2.0 * mag;
  if (frac <= 5.0) return 5.0 * mag;
  return 10.0 * mag;
}

}  // namespace

void write_line_chart_svg(std::ostream& out, const std::string& title,
                          const std::vector<std::string>& x_labels,
                          const std::vector<ChartSeries>& series, int width, int height) {
  if (x_labels.empty()) throw ValidationError("chart needs at least one x label");
  if (series.empty()) throw ValidationError("chart needs at least one series");

  const double margin_left = 70, margin_right = 24, margin_top = 44, margin_bottom = 64;
  const double plot_w = width - margin_left - margin_right;
  const double plot_h = height - margin_top - margin_bottom;

  double y_min = 0.0, y_max = 0.0;
  bool first = true;
  for (const auto& s : series) {
    for (double v : s.values) {
      if (first) {
        y_min = y_max = v;
        first = false;
      } else {
        y_min = std::min(y_min, v);
        y_max = std::max(y_max, v);
      }
    }
  }
  if (first) throw ValidationError("chart series are all empty");
  if (y_max == y_min) {
    y_max += 1.0;
    y_min -= 1.0;
  }
  const double pad = 0.05 * (y_max - y_min);
  y_min -= pad;
  y_max += pad;

  const std::size_t n = x_labels.size();
  auto map_x = [&](std::size_t i) {
    return n == 1 ? margin_left + plot_w / 2
                  : margin_left + plot_w * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  auto map_y = [&](double v) { return margin_top + plot_h * (1.0 - (v - y_min) / (y_max - y_min)); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"16\">" << xml_escape(title) << "</text>\n";

  // horizontal grid + axis labels
  const double step = nice_step((y_max - y_min) / 6.0);
  const double tick0 = std::ceil(y_min / step) * step;
  for (double v = tick0; v <= y_max + 1e-12 * step; v += step) {
    const double y = map_y(v);
    out << "<line x1=\"" << fmt(margin_left) << "\" y1=\"" << fmt(y) << "\" x2=\""
        << fmt(margin_left + plot_w) << "\" y2=\"" << fmt(y)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(margin_left - 8) << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt_tick(v)
        << "</text>\n";
  }

  // axes
  out << "<line x1=\"" << fmt(margin_left) << "\" y1=\"" << fmt(margin_top) << "\" x2=\""
      << fmt(margin_left) << "\" y2=\"" << fmt(margin_top + plot_h)
      << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << fmt(margin_left) << "\" y1=\"" << fmt(margin_top + plot_h) << "\" x2=\""
      << fmt(margin_left + plot_w) << "\" y2=\"" << fmt(margin_top + plot_h)
      << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  // x labels, at most 9 of them
  const std::size_t label_step = std::max<std::size_t>(1, (n + 8) / 9);
  for (std::size_t i = 0; i < n; i += label_step) {
    out << "<text x=\"" << fmt(map_x(i)) << "\" y=\"" << fmt(margin_top + plot_h + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << xml_escape(x_labels[i]) << "</text>\n";
  }

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % kPaletteSize];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    const std::size_t m = std::min(n, s.values.size());
    for (std::size_t i = 0; i < m; ++i) {
      out << fmt(map_x(i)) << ',' << fmt(map_y(s.values[i])) << (i + 1 == m ? "" : " ");
    }
    out << "\"/>\n";
    // legend entry
    const double ly = margin_top + 16.0 * static_cast<double>(si);
    const double lx = margin_left + plot_w - 150;
    out << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 22)
        << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fmt(lx + 28) << "\" y=\"" << fmt(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(s.label) << "</text>\n";
  }

  out << "</svg>\n";
}

}  // namespace tdcast
