#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace cli {

namespace {

std::string colour(double t, bool diverging) {
  t = std::clamp(t, 0.0, 1.0);
  int r, g, b;
  if (diverging) {
    // blue - white - red
    if (t < 0.5) {
      const double s = t / 0.5;
      r = static_cast<int>(40 + 215 * s);
      g = static_cast<int>(80 + 175 * s);
      b = 255;
    } else {
      const double s = (t - 0.5) / 0.5;
      r = 255;
      g = static_cast<int>(255 - 175 * s);
      b = static_cast<int>(255 - 215 * s);
    }
  } else {
    // dark blue - teal - yellow
    r = static_cast<int>(255 * std::pow(t, 1.5));
    g = static_cast<int>(40 + 200 * t);
    b = static_cast<int>(120 + 80 * std::sin(3.14159 * t) - 100 * t);
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", std::clamp(r, 0, 255), std::clamp(g, 0, 255), std::clamp(b, 0, 255));
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

void save(const std::string& path, const std::string& body) {
  std::ofstream os(path);
  if (!os) throw lrg::InputError("cannot write plot " + path);
  os << body;
}

}  // namespace

void write_heatmap(const std::string& path, const lrg::Field<double>& f, int component, const std::string& title,
                   bool diverging) {
  const lrg::ChartGrid& g = f.grid;
  if (g.dim() != 2) throw lrg::InputError("heatmap: two-dimensional fields only");
  const int nx = g.res()[0], ny = g.res()[1];
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t s = 0; s < g.size(); ++s) {
    const double v = f(s, component);
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  if (diverging) {
    const double m = std::max(std::abs(lo), std::abs(hi));
    lo = -m;
    hi = m;
  }
  const double span = hi > lo ? hi - lo : 1.0;
  const int W = 480, H = 480, top = 40, left = 20, max_cells = 128;
  const int sx = (nx + max_cells - 1) / max_cells, sy = (ny + max_cells - 1) / max_cells;
  const int cx = (nx + sx - 1) / sx, cy = (ny + sy - 1) / sy;
  const double cw = double(W) / cx, ch = double(H) / cy;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W + 2 * left + 80 << "\" height=\"" << H + top + 20
     << "\">\n<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << escape(title)
     << "</text>\n";
  for (int i = 0; i < cx; ++i)
    for (int j = 0; j < cy; ++j) {
      const std::size_t s =
          static_cast<std::size_t>(i * sx) * g.stride(0) + static_cast<std::size_t>(j * sy) * g.stride(1);
      const double v = f(s, component);
      const std::string c = std::isfinite(v) ? colour((v - lo) / span, diverging) : "#999999";
      // axis 0 to the right, axis 1 upwards
      os << "<rect x=\"" << left + i * cw << "\" y=\"" << top + (cy - 1 - j) * ch << "\" width=\"" << cw + 0.05
         << "\" height=\"" << ch + 0.05 << "\" fill=\"" << c << "\"/>\n";
    }
  for (int k = 0; k <= 10; ++k) {
    const double t = k / 10.0;
    os << "<rect x=\"" << left + W + 10 << "\" y=\"" << top + (1 - t) * (H - 20) << "\" width=\"16\" height=\""
       << (H - 20) / 10.0 << "\" fill=\"" << colour(t, diverging) << "\"/>\n";
  }
  os << "<text x=\"" << left + W + 30 << "\" y=\"" << top + 10 << "\" font-family=\"sans-serif\" font-size=\"10\">" << hi
     << "</text>\n<text x=\"" << left + W + 30 << "\" y=\"" << top + H - 10
     << "\" font-family=\"sans-serif\" font-size=\"10\">" << lo << "</text>\n</svg>\n";
  save(path, os.str());
}

void write_line_plot(const std::string& path, const std::vector<Series>& series, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel, bool log_y) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto ty = [&](double y) { return log_y ? std::log10(std::max(y, 1e-300)) : y; };
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(y) || (log_y && y <= 0)) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, ty(y));
      y1 = std::max(y1, ty(y));
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const int W = 520, H = 340, L = 70, T = 40;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * W; };
  auto py = [&](double y) { return T + H - (ty(y) - y0) / (y1 - y0) * H; };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W + L + 160 << "\" height=\"" << H + T + 50
     << "\">\n<text x=\"" << L << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << escape(title)
     << "</text>\n<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W << "\" height=\"" << H
     << "\" fill=\"none\" stroke=\"#444\"/>\n";
  os << "<text x=\"" << L + W / 2 << "\" y=\"" << T + H + 36 << "\" font-family=\"sans-serif\" font-size=\"12\">"
     << escape(xlabel) << "</text>\n<text x=\"8\" y=\"" << T + H / 2 << "\" font-family=\"sans-serif\" font-size=\"12\">"
     << escape(ylabel) << (log_y ? " (log10)" : "") << "</text>\n";
  os << "<text x=\"" << L << "\" y=\"" << T + H + 16 << "\" font-family=\"sans-serif\" font-size=\"10\">" << x0
     << "</text><text x=\"" << L + W - 30 << "\" y=\"" << T + H + 16 << "\" font-family=\"sans-serif\" font-size=\"10\">"
     << x1 << "</text>\n<text x=\"" << 4 << "\" y=\"" << T + 10 << "\" font-family=\"sans-serif\" font-size=\"10\">" << y1
     << "</text><text x=\"4\" y=\"" << T + H << "\" font-family=\"sans-serif\" font-size=\"10\">" << y0 << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* c = palette[k % 6];
    std::ostringstream pts;
    for (const auto& [x, y] : series[k].points)
      if (std::isfinite(y) && !(log_y && y <= 0)) pts << px(x) << "," << py(y) << " ";
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
    for (const auto& [x, y] : series[k].points)
      if (std::isfinite(y) && !(log_y && y <= 0))
        os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.5\" fill=\"" << c << "\"/>\n";
    os << "<text x=\"" << L + W + 10 << "\" y=\"" << T + 14 + 16 * k << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
       << c << "\">" << escape(series[k].label) << "</text>\n";
  }
  os << "</svg>\n";
  save(path, os.str());
}

}  // namespace cli
