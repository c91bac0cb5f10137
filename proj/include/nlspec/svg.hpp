// Static SVG figure: eigenvalue histogram with the limit density drawn on
// top, the usual visual check that a simulated spectrum follows its law.
#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "nlspec/metrics.hpp"
#include "nlspec/version.hpp"

namespace nlspec {

struct SvgOptions {
  int width = 720;
  int height = 480;
  std::string title;
};

namespace detail {

// short decimal for coordinates and tick labels; full 17-digit precision
// would only bloat the figure
inline std::string svg_num(double v, int digits = 6) {
  std::array<char, 48> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, digits);
  return std::string(buf.data(), res.ptr);
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out += c;
  }
  return out;
}

}  // namespace detail

// Histogram of the sorted sample (Freedman-Diaconis bins, normalized to a
// probability density) overlaid with the curve (curve_x, curve_rho).  A
// point mass at zero is drawn as a vertical marker with its weight printed
// next to it rather than folded into a bar, since no finite bar height
// represents it honestly.
inline std::string histogram_overlay_svg(const std::vector<double>& sorted,
                                         const std::vector<double>& curve_x,
                                         const std::vector<double>& curve_rho,
                                         double atom = 0.0,
                                         const SvgOptions& opt = {}) {
  using detail::svg_num;
  if (sorted.size() < 2)
    throw ValidationError("histogram_overlay_svg: need >= 2 sample points");
  if (curve_x.size() != curve_rho.size())
    throw ValidationError("histogram_overlay_svg: curve size mismatch");

  // bins over the sample range
  const double bw = fd_bin_width(sorted);
  const double data_lo = sorted.front(), data_hi = sorted.back();
  const int n_bins =
      std::max(1, int(std::ceil((data_hi - data_lo) / bw + 1e-12)));
  std::vector<double> density(std::size_t(n_bins), 0.0);
  for (double x : sorted) {
    int b = int((x - data_lo) / bw);
    b = std::clamp(b, 0, n_bins - 1);
    density[std::size_t(b)] += 1.0;
  }
  for (double& d : density) d /= double(sorted.size()) * bw;

  // plot ranges cover both the histogram and the curve
  double x_lo = data_lo, x_hi = data_lo + bw * n_bins;
  double y_hi = 0.0;
  for (double d : density) y_hi = std::max(y_hi, d);
  for (std::size_t i = 0; i < curve_x.size(); ++i) {
    x_lo = std::min(x_lo, curve_x[i]);
    x_hi = std::max(x_hi, curve_x[i]);
    y_hi = std::max(y_hi, curve_rho[i]);
  }
  const double x_pad = 0.05 * (x_hi - x_lo);
  x_lo -= x_pad;
  x_hi += x_pad;
  y_hi *= 1.10;
  if (y_hi <= 0.0) y_hi = 1.0;

  const double ml = 60, mr = 20, mt = opt.title.empty() ? 20 : 40, mb = 45;
  const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;
  const auto px = [&](double x) { return ml + pw * (x - x_lo) / (x_hi - x_lo); };
  const auto py = [&](double y) { return mt + ph * (1.0 - y / y_hi); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(opt.width) + "\" height=\"" +
         std::to_string(opt.height) + "\" viewBox=\"0 0 " +
         std::to_string(opt.width) + " " + std::to_string(opt.height) +
         "\">\n";
  svg += "<!-- schema_version: " + std::string(schema_version) + " -->\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // histogram bars
  for (int b = 0; b < n_bins; ++b) {
    const double d = density[std::size_t(b)];
    if (d <= 0.0) continue;
    const double x0 = px(data_lo + bw * b), x1 = px(data_lo + bw * (b + 1));
    const double y0 = py(d);
    svg += "<rect x=\"" + svg_num(x0) + "\" y=\"" + svg_num(y0) +
           "\" width=\"" + svg_num(x1 - x0) + "\" height=\"" +
           svg_num(py(0.0) - y0) +
           "\" fill=\"#9ecae1\" stroke=\"#6baed6\" stroke-width=\"0.5\"/>\n";
  }

  // point mass marker at zero
  if (atom > 0.0) {
    svg += "<line x1=\"" + svg_num(px(0.0)) + "\" y1=\"" + svg_num(py(0.0)) +
           "\" x2=\"" + svg_num(px(0.0)) + "\" y2=\"" + svg_num(mt) +
           "\" stroke=\"#d62728\" stroke-width=\"2\" "
           "stroke-dasharray=\"6,4\"/>\n";
    svg += "<text x=\"" + svg_num(px(0.0) + 5) + "\" y=\"" + svg_num(mt + 14) +
           "\" font-family=\"sans-serif\" font-size=\"12\" "
           "fill=\"#d62728\">atom " +
           svg_num(atom, 4) + "</text>\n";
  }

  // limit density curve
  if (!curve_x.empty()) {
    std::string pts;
    for (std::size_t i = 0; i < curve_x.size(); ++i) {
      if (!pts.empty()) pts += ' ';
      pts += svg_num(px(curve_x[i])) + "," +
             svg_num(py(std::min(curve_rho[i], y_hi)));
    }
    svg += "<polyline points=\"" + pts +
           "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  }

  // axes with a few ticks
  svg += "<line x1=\"" + svg_num(ml) + "\" y1=\"" + svg_num(py(0.0)) +
         "\" x2=\"" + svg_num(ml + pw) + "\" y2=\"" + svg_num(py(0.0)) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + svg_num(ml) + "\" y1=\"" + svg_num(mt) + "\" x2=\"" +
         svg_num(ml) + "\" y2=\"" + svg_num(py(0.0)) +
         "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double xv = x_lo + (x_hi - x_lo) * t / 5.0;
    svg += "<text x=\"" + svg_num(px(xv)) + "\" y=\"" +
           svg_num(py(0.0) + 18) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"middle\">" +
           svg_num(xv, 3) + "</text>\n";
    const double yv = y_hi * t / 5.0;
    svg += "<text x=\"" + svg_num(ml - 6) + "\" y=\"" + svg_num(py(yv) + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"end\">" +
           svg_num(yv, 3) + "</text>\n";
  }
  if (!opt.title.empty())
    svg += "<text x=\"" + svg_num(ml + pw / 2) + "\" y=\"24\" "
           "font-family=\"sans-serif\" font-size=\"15\" "
           "text-anchor=\"middle\">" +
           detail::xml_escape(opt.title) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace nlspec
