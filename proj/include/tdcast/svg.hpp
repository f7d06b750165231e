#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tdcast {

struct ChartSeries {
  std::string label;
  std::vector<double> values;
};

// Minimal multi-series line chart. Points are placed at the label indices;
// series may differ in length (shorter ones just stop early).
void write_line_chart_svg(std::ostream& out, const std::string& title,
                          const std::vector<std::string>& x_labels,
                          const std::vector<ChartSeries>& series, int width = 960,
                          int height = 540);

}  // namespace tdcast
