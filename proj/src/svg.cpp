#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "bvquad/serialize.hpp"

namespace bvquad {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMargin = 56.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string report_to_svg(const ConvergenceReport& report) {
  std::vector<std::pair<double, double>> pts;
  for (const ConvergenceSample& s : report.samples) {
    if (s.n > 0 && s.error > 0.0 && std::isfinite(s.error)) {
      pts.emplace_back(std::log10(s.n), std::log10(s.error));
    }
  }
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
                    "\" height=\"" + fmt(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt(kMargin) + "\" y=\"24\" font-size=\"14\">" + report.family + " / " +
         report.function + "</text>\n";
  if (pts.empty()) return out + "</svg>\n";

  double x0 = pts.front().first, x1 = pts.front().first;
  double y0 = pts.front().second, y1 = pts.front().second;
  for (auto [x, y] : pts) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  auto px = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); };
  auto py = [&](double y) {
    return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin);
  };

  out += "<line x1=\"" + fmt(kMargin) + "\" y1=\"" + fmt(kHeight - kMargin) + "\" x2=\"" +
         fmt(kWidth - kMargin) + "\" y2=\"" + fmt(kHeight - kMargin) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + fmt(kMargin) + "\" y1=\"" + fmt(kMargin) + "\" x2=\"" + fmt(kMargin) +
         "\" y2=\"" + fmt(kHeight - kMargin) + "\" stroke=\"black\"/>\n";
  out += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"" + fmt(kHeight - 16) +
         "\" font-size=\"12\">log10 n</text>\n";
  out += "<text x=\"8\" y=\"" + fmt(kHeight / 2) + "\" font-size=\"12\">log10 error</text>\n";

  std::string path;
  for (auto [x, y] : pts) {
    path += (path.empty() ? "M" : " L") + fmt(px(x)) + " " + fmt(py(y));
    out += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) +
           "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"steelblue\"/>\n";

  // Reference line with slope -(s+1) through the first point, clipped to the box.
  if (report.expected_slope) {
    const double slope = *report.expected_slope;
    const auto [ax, ay] = pts.front();
    double bx = x1;
    double by = ay + slope * (bx - ax);
    if (by < y0 && slope != 0.0) {
      by = y0;
      bx = ax + (by - ay) / slope;
    }
    out += "<line x1=\"" + fmt(px(ax)) + "\" y1=\"" + fmt(py(ay)) + "\" x2=\"" + fmt(px(bx)) +
           "\" y2=\"" + fmt(py(by)) + "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
    char label[48];
    std::snprintf(label, sizeof label, "slope %.0f", slope);
    out += "<text x=\"" + fmt(px(bx) - 60) + "\" y=\"" + fmt(py(by) - 6) +
           "\" font-size=\"12\" fill=\"gray\">" + label + "</text>\n";
  }
  return out + "</svg>\n";
}

}  // namespace bvquad
