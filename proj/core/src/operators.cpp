#include "rbslip/operators.hpp"

#include "rbslip/error.hpp"
#include "spectral.hpp"

#include <cmath>
#include <complex>
#include <limits>

namespace rbslip {

using detail::Spectral;

ScalarField ddx(const ScalarField& f) {
  const Domain& d = f.domain();
  Spectral s = detail::to_spectral(f);
  for (int m = 0; m < d.modes(); ++m) s.col(m) *= std::complex<double>(0.0, d.wavenumber(m));
  if (detail::has_nyquist(d)) s.col(d.modes() - 1).setZero();
  return detail::to_physical(f.domain_ptr(), s);
}

ScalarField ddz(const ScalarField& f) {
  ScalarField out(f.domain_ptr());
  out.matrix().noalias() = f.domain().dz_matrix() * f.matrix();
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  const Domain& d = f.domain();
  Spectral s = detail::to_spectral(f);
  for (int m = 0; m < d.modes(); ++m) s.col(m) *= -d.wavenumber(m) * d.wavenumber(m);
  ScalarField out = detail::to_physical(f.domain_ptr(), s);
  out.matrix().noalias() += d.d2z_matrix() * f.matrix();
  return out;
}

ScalarField dealias(const ScalarField& f) {
  const Domain& d = f.domain();
  Spectral s = detail::to_spectral(f);
  for (int m = d.dealias_cutoff() + 1; m < d.modes(); ++m) s.col(m).setZero();
  return detail::to_physical(f.domain_ptr(), s);
}

VectorField velocity_from_streamfunction(const ScalarField& psi) {
  ScalarField u1 = ddz(psi);
  u1 *= -1.0;
  return {std::move(u1), ddx(psi)};
}

WallPair vorticity_wall_values(std::span<const double> u1_bottom,
                               std::span<const double> u1_top, double ls) {
  if (!(ls > 0.0)) throw InvalidInput("slip length must be positive (or inf for free slip)");
  WallPair out{std::vector<double>(u1_bottom.size(), 0.0),
               std::vector<double>(u1_top.size(), 0.0)};
  if (std::isinf(ls)) return out;
  for (std::size_t i = 0; i < u1_bottom.size(); ++i) out.bottom[i] = -u1_bottom[i] / ls;
  for (std::size_t i = 0; i < u1_top.size(); ++i) out.top[i] = u1_top[i] / ls;
  return out;
}

}  // namespace rbslip
