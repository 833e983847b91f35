#include "rbslip/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace rbslip {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
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

}  // namespace

std::string nu_ra_svg(const std::map<std::string, std::vector<std::pair<double, double>>>& series) {
  constexpr double w = 640, h = 480, left = 70, right = 20, top = 20, bottom = 60;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& [name, pts] : series)
    for (const auto& [x, y] : pts) {
      if (!(x > 0.0) || !(y > 0.0)) continue;
      x0 = std::min(x0, std::log10(x));
      x1 = std::max(x1, std::log10(x));
      y0 = std::min(y0, std::log10(y));
      y1 = std::max(y1, std::log10(y));
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  x0 = std::floor(x0), x1 = std::max(std::ceil(x1), x0 + 1);
  y0 = std::floor(y0), y1 = std::max(std::ceil(y1), y0 + 1);
  auto px = [&](double lx) { return left + (lx - x0) / (x1 - x0) * (w - left - right); };
  auto py = [&](double ly) { return h - bottom - (ly - y0) / (y1 - y0) * (h - top - bottom); };

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  s += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(w - left - right) + "\" height=\"" +
       num(h - top - bottom) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double d = x0; d <= x1 + 1e-9; d += 1.0)
    s += "<text x=\"" + num(px(d)) + "\" y=\"" + num(h - bottom + 18) + "\" text-anchor=\"middle\">1e" +
         std::to_string(static_cast<int>(d)) + "</text>\n";
  for (double d = y0; d <= y1 + 1e-9; d += 1.0)
    s += "<text x=\"" + num(left - 6) + "\" y=\"" + num(py(d) + 4) + "\" text-anchor=\"end\">1e" +
         std::to_string(static_cast<int>(d)) + "</text>\n";
  s += "<text x=\"" + num((left + w - right) / 2) + "\" y=\"" + num(h - 15) + "\" text-anchor=\"middle\">Ra</text>\n";
  s += "<text x=\"15\" y=\"" + num((top + h - bottom) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " +
       num((top + h - bottom) / 2) + ")\">Nu</text>\n";

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  int k = 0;
  for (const auto& [name, raw] : series) {
    auto pts = raw;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::remove_if(pts.begin(), pts.end(), [](auto& p) { return !(p.first > 0.0) || !(p.second > 0.0); }),
              pts.end());
    if (pts.empty()) continue;
    const char* c = colors[k % 6];
    std::string path;
    for (const auto& [x, y] : pts) {
      path += (path.empty() ? "M" : " L") + num(px(std::log10(x))) + " " + num(py(std::log10(y)));
      s += "<circle cx=\"" + num(px(std::log10(x))) + "\" cy=\"" + num(py(std::log10(y))) + "\" r=\"3\" fill=\"" + c +
           "\"/>\n";
    }
    s += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + c + "\"/>\n";
    // Guide lines through the first point.
    const double gx = std::log10(pts.front().first), gy = std::log10(pts.front().second);
    for (const auto& [slope, dash] : {std::pair{5.0 / 12.0, "6 3"}, std::pair{1.0 / 3.0, "2 3"}}) {
      s += "<line x1=\"" + num(px(gx)) + "\" y1=\"" + num(py(gy)) + "\" x2=\"" + num(px(x1)) + "\" y2=\"" +
           num(py(gy + slope * (x1 - gx))) + "\" stroke=\"" + c + "\" stroke-dasharray=\"" + dash +
           "\" opacity=\"0.6\"/>\n";
    }
    s += "<text x=\"" + num(left + 10) + "\" y=\"" + num(top + 16 + 16 * k) + "\" fill=\"" + c + "\">" + escape(name) +
         "</text>\n";
    ++k;
  }
  s += "<text x=\"" + num(w - right - 10) + "\" y=\"" + num(h - bottom - 10) +
       "\" text-anchor=\"end\">dashed: slope 5/12, dotted: slope 1/3</text>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace rbslip
