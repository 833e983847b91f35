#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

namespace rbslip {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Rayleigh number, Prandtl number, slip length and aspect ratio. pr and ls
/// may be +inf (stationary-vorticity limit and free-slip walls).
struct PhysParams {
  double ra = 1e4;
  double pr = 1.0;
  double ls = 1.0;
  double gamma = 2.0;

  /// Throws InvalidInput unless ra > 0, pr > 0, ls > 0, 0 < gamma < inf.
  void validate() const;

  bool free_slip() const noexcept { return std::isinf(ls); }
  bool infinite_pr() const noexcept { return std::isinf(pr); }
  double inv_ls() const noexcept { return free_slip() ? 0.0 : 1.0 / ls; }
  double inv_pr() const noexcept { return infinite_pr() ? 0.0 : 1.0 / pr; }
};

/// Dimensional inputs.
struct Nondim {
  double g = 1.0;
  double alpha = 1.0;
  double delta_t = 1.0;
  double h = 1.0;
  double kappa = 1.0;
  double nu = 1.0;
};

/// ra = g alpha delta_t h^3 / (kappa nu), pr = nu / kappa.
PhysParams nondimensionalize(const Nondim& d, double ls = kInf, double gamma = 2.0);

/// Parses a decimal or scientific number, or "inf". Throws InvalidInput
/// naming `what` on anything else (including trailing characters).
double parse_real(std::string_view text, std::string_view what = "value");
/// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite values.
std::string format_real(double v);

}  // namespace rbslip
