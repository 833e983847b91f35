#pragma once

#include "rbslip/fourier.hpp"
#include "rbslip/grid.hpp"

#include <Eigen/Core>

#include <complex>
#include <span>
#include <vector>

namespace rbslip::detail {

/// nz x modes, column m holds the vertical profile of Fourier mode m.
using Spectral = Eigen::MatrixXcd;

inline Spectral to_spectral(const ScalarField& f) {
  const Domain& d = f.domain();
  Spectral s(d.nz(), d.modes());
  d.fourier().forward(f.values(), {s.data(), static_cast<std::size_t>(s.size())});
  return s;
}

inline ScalarField to_physical(const DomainPtr& d, const Spectral& s) {
  ScalarField f(d);
  d->fourier().inverse({s.data(), static_cast<std::size_t>(s.size())}, f.values());
  return f;
}

/// A * S for a real matrix A applied to every mode.
inline Spectral apply_real(const Eigen::MatrixXd& a, const Spectral& s) {
  Spectral out(a.rows(), s.cols());
  out.real() = a * s.real();
  out.imag() = a * s.imag();
  return out;
}

/// Fourier coefficients of a wall profile sampled on the x grid.
inline std::vector<std::complex<double>> profile_spectrum(const Domain& d,
                                                          std::span<const double> v) {
  std::vector<std::complex<double>> out(d.modes(), {0.0, 0.0});
  if (v.empty()) return out;
  const int nx = d.nx();
  for (int m = 0; m < d.modes(); ++m) {
    std::complex<double> acc{0.0, 0.0};
    for (int i = 0; i < nx; ++i) {
      const double a = -2.0 * 3.14159265358979323846 * m * i / nx;
      acc += v[i] * std::complex<double>(std::cos(a), std::sin(a));
    }
    out[m] = acc / static_cast<double>(nx);
  }
  return out;
}

inline bool has_nyquist(const Domain& d) { return d.nx() % 2 == 0; }

}  // namespace rbslip::detail
