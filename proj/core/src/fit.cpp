#include "rbslip/error.hpp"
#include "rbslip/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace rbslip {

FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidInput("fit: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw InvalidInput("fit needs at least 3 points, got " + std::to_string(n));
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw InvalidInput("fit needs positive finite data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidInput("fit needs at least two distinct x values");
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - f.intercept - f.slope * lx[i];
    ssr += r * r;
  }
  f.stderr_slope = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  f.points_used = static_cast<int>(n);
  return f;
}

namespace {

std::string group_value(const CsvTable& t, std::size_t i, const std::string& g) {
  if (g == "ls_alpha" || g == "pr_alpha") {
    const double v = t.number(i, g == "ls_alpha" ? "ls" : "pr");
    const double ra = t.number(i, "ra");
    if (std::isinf(v)) return "inf";
    // Rounded so that rows generated from one rule share a key.
    const double a = std::round(std::log(v) / std::log(ra) * 1e6) / 1e6;
    return format_real(a == 0.0 ? 0.0 : a);
  }
  return t.text(i, g);
}

}  // namespace

std::vector<FitGroup> fit_scaling(const CsvTable& table, const std::vector<std::string>& group_by,
                                  const std::string& y_column) {
  for (const auto& g : group_by)
    if (g != "ls_alpha" && g != "pr_alpha" && table.column(g) < 0)
      throw InvalidInput("fit: unknown group column '" + g + "'");
  if (table.column(y_column) < 0) throw InvalidInput("fit: unknown column '" + y_column + "'");
  const bool has_bound = table.column("bound_value") >= 0;
  struct Acc {
    std::vector<double> x, y, ratio;
  };
  std::map<std::string, Acc> groups;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.column("status") >= 0 && table.text(i, "status") != "ok") continue;
    std::string key;
    for (const auto& g : group_by) key += (key.empty() ? "" : ",") + g + "=" + group_value(table, i, g);
    if (key.empty()) key = "all";
    Acc& a = groups[key];
    a.x.push_back(table.number(i, "ra"));
    a.y.push_back(table.number(i, y_column));
    if (has_bound) a.ratio.push_back(a.y.back() / table.number(i, "bound_value"));
  }
  if (groups.empty()) throw InvalidInput("fit: no rows with status ok");
  std::vector<FitGroup> out;
  for (const auto& [key, a] : groups) {
    FitGroup g;
    g.key = key;
    try {
      g.fit = fit_power_law(a.x, a.y);
    } catch (const InvalidInput& e) {
      throw InvalidInput("group " + key + ": " + e.what());
    }
    if (!a.ratio.empty()) {
      const auto [lo, hi] = std::minmax_element(a.ratio.begin(), a.ratio.end());
      g.fit.bound_ratio_spread = *hi / *lo;
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace rbslip
