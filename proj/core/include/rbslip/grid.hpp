#pragma once

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace rbslip {

namespace detail {
class Fourier;
}

/// Periodic-in-x, wall-bounded box [0, gamma] x [0, 1].
///
/// Horizontal: nx uniform points x_i = i * gamma / nx (no duplicated seam).
/// Vertical: Chebyshev-Gauss-Lobatto nodes mapped to [0, 1], ascending, with
/// both walls as nodes, and Clenshaw-Curtis weights normalised to sum to 1.
/// A Domain is immutable once created and is shared by every field on it.
class Domain {
 public:
  static std::shared_ptr<const Domain> create(double gamma, int nx, int nz);

  ~Domain();
  Domain(const Domain&) = delete;
  Domain& operator=(const Domain&) = delete;

  double gamma() const noexcept { return gamma_; }
  int nx() const noexcept { return nx_; }
  int nz() const noexcept { return nz_; }
  /// Number of non-negative Fourier modes, nx/2 + 1.
  int modes() const noexcept { return nx_ / 2 + 1; }
  /// Largest mode index kept by 2/3-rule truncation.
  int dealias_cutoff() const noexcept { return (nx_ - 1) / 3; }
  double wavenumber(int m) const noexcept;

  double x(int i) const noexcept { return gamma_ * i / nx_; }
  double z(int j) const noexcept { return nodes_[j]; }
  double dx() const noexcept { return gamma_ / nx_; }

  std::span<const double> vertical_nodes() const noexcept { return nodes_; }
  std::span<const double> quad_weights() const noexcept { return weights_; }
  /// Half the distance between the neighbours of node j (one-sided at walls).
  std::span<const double> local_spacing() const noexcept { return spacing_; }
  double min_vertical_spacing() const noexcept;

  /// d/dz and d^2/dz^2 collocation matrices on the mapped nodes.
  const Eigen::MatrixXd& dz_matrix() const noexcept { return dz_; }
  const Eigen::MatrixXd& d2z_matrix() const noexcept { return d2z_; }

  const detail::Fourier& fourier() const noexcept { return *fourier_; }

 private:
  Domain(double gamma, int nx, int nz);

  double gamma_;
  int nx_;
  int nz_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> spacing_;
  Eigen::MatrixXd dz_;
  Eigen::MatrixXd d2z_;
  std::unique_ptr<detail::Fourier> fourier_;
};

using DomainPtr = std::shared_ptr<const Domain>;

/// Point values of one scalar unknown. Storage is row-major nx x nz: the
/// value at (x_i, z_j) lives at index i * nz + j, so each vertical column is
/// contiguous.
class ScalarField {
 public:
  explicit ScalarField(DomainPtr domain);
  ScalarField(DomainPtr domain, std::vector<double> values);

  static ScalarField from_function(DomainPtr domain,
                                   const std::function<double(double, double)>& f);

  const Domain& domain() const noexcept { return *domain_; }
  const DomainPtr& domain_ptr() const noexcept { return domain_; }

  double& operator()(int i, int j) noexcept { return values_[index(i, j)]; }
  double operator()(int i, int j) const noexcept { return values_[index(i, j)]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  /// nz x nx column-major view: column i is the vertical profile at x_i.
  Eigen::Map<Eigen::MatrixXd> matrix() noexcept;
  Eigen::Map<const Eigen::MatrixXd> matrix() const noexcept;

  std::vector<double> wall_profile(bool top) const;
  bool all_finite() const noexcept;
  double max_abs() const noexcept;
  double min_value() const noexcept;
  double max_value() const noexcept;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double c) noexcept;

 private:
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * domain_->nz() + j;
  }

  DomainPtr domain_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double c, ScalarField a);
/// Pointwise product.
ScalarField operator*(const ScalarField& a, const ScalarField& b);

struct VectorField {
  ScalarField u1;
  ScalarField u2;
};

enum class Wall { bottom, top };

/// Integral over the whole box.
double integrate(const ScalarField& f);

/// Lebesgue norm; p must be 1, 2, 4 or infinity.
double norm(const ScalarField& f, double p);

/// (integral |f|^p)^(1/p) for any real p >= 1. Used where an exponent other
/// than the canonical ones is needed (e.g. the r in the pressure estimate).
double lp_norm(const ScalarField& f, double p);

enum class SobolevKind { H1, W14 };

using GradientProvider =
    std::function<std::pair<ScalarField, ScalarField>(const ScalarField&)>;

/// (||f||_p^p + ||grad f||_p^p)^(1/p), p = 2 (H1) or 4 (W14), where
/// |grad f|^p is taken as (|d1 f|^2 + |d2 f|^2)^(p/2).
double sobolev_norm(const ScalarField& f, SobolevKind kind,
                    const GradientProvider& gradient);
/// Same, using the spectral derivatives of the operators module.
double sobolev_norm(const ScalarField& f, SobolevKind kind);

/// Mean over x at every vertical node.
std::vector<double> horizontal_average(const ScalarField& f);

/// Periodic trapezoid integral over x of the trace on one wall.
double wall_trace_integral(const ScalarField& f, Wall wall);

/// Clenshaw-Curtis integral over [0, 1] of a profile sampled on the nodes.
double vertical_integral(const Domain& d, std::span<const double> profile);

/// Integral over [0, delta] of the Chebyshev interpolant of a profile.
double integrate_profile_below(const Domain& d, std::span<const double> profile,
                               double delta);

/// Chebyshev interpolant of a profile evaluated at height z.
double evaluate_profile(const Domain& d, std::span<const double> profile, double z);

}  // namespace rbslip
