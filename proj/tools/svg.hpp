#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lrg/chart_grid.hpp"

namespace cli {

/// Heatmap of one component of a 2D field; NaN samples are drawn grey.  `diverging` centres the
/// colour scale on zero.
void write_heatmap(const std::string& path, const lrg::Field<double>& f, int component, const std::string& title,
                   bool diverging = false);

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// Line plot with optional logarithmic y axis.
void write_line_plot(const std::string& path, const std::vector<Series>& series, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel, bool log_y = false);

}  // namespace cli
