#pragma once

#include "rbslip/grid.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

namespace rbslip {

/// Spectral x-derivative (the Nyquist mode is dropped).
ScalarField ddx(const ScalarField& f);
/// Chebyshev collocation z-derivative.
ScalarField ddz(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);
/// 2/3-rule truncation in x: zero every mode above (nx - 1) / 3.
ScalarField dealias(const ScalarField& f);

enum class BcKind { dirichlet, neumann };

/// A wall condition. For Neumann the values are d/dz at that wall (not the
/// outward normal derivative). Empty values mean homogeneous data.
struct BoundaryCondition {
  BcKind kind = BcKind::dirichlet;
  std::vector<double> values;

  static BoundaryCondition dirichlet(std::vector<double> v = {}) {
    return {BcKind::dirichlet, std::move(v)};
  }
  static BoundaryCondition neumann(std::vector<double> v = {}) {
    return {BcKind::neumann, std::move(v)};
  }
};

/// (Laplacian - helmholtz_shift) g = rhs with one condition per wall.
struct EllipticProblem {
  double helmholtz_shift = 0.0;
  BoundaryCondition bc_bottom;
  BoundaryCondition bc_top;
};

/// Mode-by-mode collocation solver with cached LU factorizations keyed by
/// (mode, shift, bottom kind, top kind). Safe to share between threads.
///
/// The singular pure-Neumann Poisson mode is solved as a bordered system
/// with the zero-mean constraint and a Lagrange multiplier; the multiplier is
/// the discrete defect of the mean constraint
///   integral(rhs) = integral over x of (dg/dz|top - dg/dz|bottom).
class EllipticSolver {
 public:
  explicit EllipticSolver(DomainPtr domain);

  struct Result {
    ScalarField solution;
    /// Defect of the mean constraint relative to the size of the data
    /// (0 unless the problem is pure Neumann with zero shift).
    double relative_defect = 0.0;
  };

  /// Throws IncompatibleData when the relative defect exceeds
  /// `defect_tolerance`; below it the defect is projected out.
  Result solve(const EllipticProblem& problem, const ScalarField& rhs,
               double defect_tolerance = 1e-10) const;

  const DomainPtr& domain() const noexcept { return domain_; }

 private:
  struct Factor;
  using Key = std::tuple<int, double, int, int>;
  std::shared_ptr<const Factor> factor(int m, double shift, BcKind bottom, BcKind top) const;

  DomainPtr domain_;
  mutable std::mutex mutex_;
  mutable std::map<Key, std::shared_ptr<const Factor>> cache_;
};

/// One-off solve; see EllipticSolver.
ScalarField solve_elliptic(const EllipticProblem& problem, const ScalarField& rhs);

/// u1 = -d psi/dz, u2 = d psi/dx.
VectorField velocity_from_streamfunction(const ScalarField& psi);

struct WallPair {
  std::vector<double> bottom;
  std::vector<double> top;
};

/// Navier-slip vorticity traces: bottom = -u1/ls, top = +u1/ls; zero for
/// ls = infinity.
WallPair vorticity_wall_values(std::span<const double> u1_bottom,
                               std::span<const double> u1_top, double ls);

}  // namespace rbslip
