#include "rbslip/error.hpp"
#include "rbslip/operators.hpp"
#include "spectral.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rbslip {

using detail::Spectral;

struct EllipticSolver::Factor {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  bool bordered = false;
};

EllipticSolver::EllipticSolver(DomainPtr domain) : domain_(std::move(domain)) {}

std::shared_ptr<const EllipticSolver::Factor> EllipticSolver::factor(int m, double shift,
                                                                     BcKind bottom,
                                                                     BcKind top) const {
  const Key key{m, shift, static_cast<int>(bottom), static_cast<int>(top)};
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const Domain& d = *domain_;
  const int nz = d.nz();
  const int n = nz - 1;
  const double k = d.wavenumber(m);
  const bool bordered = m == 0 && shift == 0.0 && bottom == BcKind::neumann && top == BcKind::neumann;
  const int size = bordered ? nz + 1 : nz;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
  a.topLeftCorner(nz, nz) = d.d2z_matrix();
  a.topLeftCorner(nz, nz).diagonal().array() -= k * k + shift;
  auto wall_row = [&](int row, BcKind kind) {
    a.row(row).setZero();
    if (kind == BcKind::dirichlet) {
      a(row, row) = 1.0;
    } else {
      a.row(row).head(nz) = d.dz_matrix().row(row);
    }
  };
  wall_row(0, bottom);
  wall_row(n, top);
  if (bordered) {
    for (int j = 1; j < n; ++j) a(j, nz) = 1.0;
    for (int j = 0; j < nz; ++j) a(nz, j) = d.quad_weights()[j];
  }
  auto f = std::make_shared<Factor>();
  f->lu.compute(a);
  f->bordered = bordered;
  std::lock_guard lock(mutex_);
  return cache_.emplace(key, std::move(f)).first->second;
}

EllipticSolver::Result EllipticSolver::solve(const EllipticProblem& problem, const ScalarField& rhs,
                                             double defect_tolerance) const {
  const Domain& d = *domain_;
  if (!rhs.all_finite()) throw InvalidInput("solve_elliptic: right-hand side has non-finite entries");
  if (!(problem.helmholtz_shift >= 0.0) || !std::isfinite(problem.helmholtz_shift))
    throw InvalidInput("solve_elliptic: helmholtz_shift must be finite and non-negative");
  for (const auto* bc : {&problem.bc_bottom, &problem.bc_top}) {
    if (!bc->values.empty() && bc->values.size() != static_cast<std::size_t>(d.nx()))
      throw InvalidInput("solve_elliptic: boundary profile length must equal nx");
  }
  const int nz = d.nz();
  const int n = nz - 1;
  const Spectral f = detail::to_spectral(rhs);
  const auto gb = detail::profile_spectrum(d, problem.bc_bottom.values);
  const auto gt = detail::profile_spectrum(d, problem.bc_top.values);

  double data_scale = rhs.max_abs();
  for (const auto* bc : {&problem.bc_bottom, &problem.bc_top})
    for (double v : bc->values) data_scale = std::max(data_scale, std::abs(v));

  Spectral g(nz, d.modes());
  double rel_defect = 0.0;
  for (int m = 0; m < d.modes(); ++m) {
    auto fac = factor(m, problem.helmholtz_shift, problem.bc_bottom.kind, problem.bc_top.kind);
    const int size = fac->bordered ? nz + 1 : nz;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(size, 2);
    b.col(0).head(nz) = f.col(m).real();
    b.col(1).head(nz) = f.col(m).imag();
    b(0, 0) = gb[m].real();
    b(0, 1) = gb[m].imag();
    b(n, 0) = gt[m].real();
    b(n, 1) = gt[m].imag();
    const Eigen::MatrixXd x = fac->lu.solve(b);
    g.col(m).real() = x.col(0).head(nz);
    g.col(m).imag() = x.col(1).head(nz);
    if (fac->bordered) {
      const double lambda = x(nz, 0);
      const double scale = data_scale;
      rel_defect = scale > 0.0 ? std::abs(lambda) / scale : 0.0;
      if (rel_defect > defect_tolerance) {
        std::ostringstream msg;
        msg << "incompatible Neumann data: the mean constraint integral(rhs) = "
               "integral(dg/dz|top - dg/dz|bottom) is violated (relative defect "
            << rel_defect << " > " << defect_tolerance << ")";
        throw IncompatibleData(msg.str());
      }
    }
  }
  if (detail::has_nyquist(d)) g.col(d.modes() - 1).imag().setZero();
  return {detail::to_physical(domain_, g), rel_defect};
}

ScalarField solve_elliptic(const EllipticProblem& problem, const ScalarField& rhs) {
  return EllipticSolver(rhs.domain_ptr()).solve(problem, rhs).solution;
}

}  // namespace rbslip
