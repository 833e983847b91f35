#pragma once

#include "rbslip/params.hpp"

#include <array>
#include <string>
#include <string_view>

namespace rbslip {

/// Which upper-bound formula applies: ls = inf, 1 <= ls < inf, 0 < ls < 1.
enum class Region { FreeSlip512, LsGe1Mixed, LsLt1Mixed };

/// The five power laws a bound can reduce to.
enum class Term {
  Ra512,         // Ra^{5/12}
  Ls16Pr16Ra12,  // Ls^{-1/6} Pr^{-1/6} Ra^{1/2}
  Ls13Ra13,      // Ls^{-1/3} Ra^{1/3}
  Ls23Pr16Ra12,  // Ls^{-2/3} Pr^{-1/6} Ra^{1/2}
  Ls213Ra513,    // Ls^{-2/13} Ra^{5/13}
};

std::string_view to_string(Region r) noexcept;
std::string_view to_string(Term t) noexcept;

struct Exponents {
  double ra = 0.0;
  double pr = 0.0;
  double ls = 0.0;
};

Exponents term_exponents(Term t) noexcept;
/// Ra^a Pr^b Ls^c with unit constant; an infinite pr or ls makes a term
/// with a negative exponent in that symbol vanish.
double term_value(Term t, const PhysParams& p);

/// Theorem evaluation with all constants set to 1.
struct BoundReport {
  Region region = Region::FreeSlip512;
  Term dominant = Term::Ra512;
  double value = 0.0;
  Exponents exponents;
  /// Optimal layer thickness at Nu equal to the bound value.
  double delta_star = 1.0;
  std::string table_row;
  std::string caveat;
};

/// Throws InvalidInput for invalid parameters.
BoundReport bound_value(const PhysParams& p);

/// One cell of the (Pr band x Ls band) overview table.
struct TableCell {
  int row = 0;  // 1: Pr >= Ra^{11/7}, 2: Ra^{4/3} <= Pr <= Ra^{11/7}, 3: Ra^{1/2} <= Pr <= Ra^{4/3}, 4: Pr <= Ra^{1/2}
  Term term = Term::Ra512;
  std::string label;
  /// Smallest |x/b - 1| over the band edges that decide the cell (inf if none).
  double boundary_distance = 0.0;
};

/// Cells are closed; a point on an edge goes to the cell with the smaller bound.
TableCell region_classify(const PhysParams& p);

enum class DeltaBranch { FreeSlip, LsGe1, LsLt1Mixed, LsLt1Slip };

struct DeltaOptimum {
  /// Exact minimizer of delta^3 S + 2 / delta, clamped to 1.
  double delta = 1.0;
  /// Leading-order scaling law of the argument, clamped to 1.
  double scaling = 1.0;
  DeltaBranch branch = DeltaBranch::FreeSlip;
};

/// S = Ls^-1 Nu Ra + max(1, Ls^-3/2) Ls^-1/2 Pr^-1/2 Nu Ra^3/2
///     + Ls^-1/2 Nu^3/4 Ra^5/4 + Nu Ra^5/4.
double delta_coefficient(const PhysParams& p, double nu);
/// Throws InvalidInput unless nu >= 1.
DeltaOptimum delta_optimal_detail(const PhysParams& p, double nu);
double delta_optimal(const PhysParams& p, double nu);
/// Minimizer of delta^3 S + 2 / delta over 1e5 log-spaced points in [1e-8, 1].
double delta_bruteforce(const PhysParams& p, double nu);

}  // namespace rbslip
