#pragma once

#include <complex>
#include <memory>
#include <span>

namespace rbslip::detail {

/// Real-to-complex transforms along x for every vertical node at once.
///
/// Physical layout: index i * nz + j. Spectral layout: index m * nz + j for
/// m = 0 .. nx/2. The forward transform is scaled by 1/nx so that spectral
/// values are Fourier coefficients; the inverse is the plain synthesis.
/// Execution is thread-safe; planning happens once in the constructor.
class Fourier {
 public:
  Fourier(int nx, int nz);
  ~Fourier();
  Fourier(const Fourier&) = delete;
  Fourier& operator=(const Fourier&) = delete;

  int nx() const noexcept { return nx_; }
  int nz() const noexcept { return nz_; }
  int modes() const noexcept { return nx_ / 2 + 1; }

  void forward(std::span<const double> phys, std::span<std::complex<double>> spec) const;
  void inverse(std::span<const std::complex<double>> spec, std::span<double> phys) const;

 private:
  struct Plans;
  int nx_;
  int nz_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace rbslip::detail
