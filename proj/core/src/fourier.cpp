#include "rbslip/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <new>

namespace rbslip::detail {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <class T>
struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : ptr(static_cast<T*>(fftw_malloc(sizeof(T) * n))) {
    if (ptr == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  T* ptr;
};

}  // namespace

struct Fourier::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

Fourier::Fourier(int nx, int nz) : nx_(nx), nz_(nz), plans_(std::make_unique<Plans>()) {
  const std::size_t nphys = static_cast<std::size_t>(nx) * nz;
  const std::size_t nspec = static_cast<std::size_t>(modes()) * nz;
  FftwBuffer<double> in(nphys);
  FftwBuffer<fftw_complex> out(nspec);
  int n[1] = {nx};
  std::lock_guard lock(planner_mutex());
  plans_->r2c = fftw_plan_many_dft_r2c(1, n, nz, in.ptr, nullptr, nz, 1, out.ptr, nullptr,
                                       nz, 1, FFTW_ESTIMATE);
  plans_->c2r = fftw_plan_many_dft_c2r(1, n, nz, out.ptr, nullptr, nz, 1, in.ptr, nullptr,
                                       nz, 1, FFTW_ESTIMATE);
}

Fourier::~Fourier() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plans_->r2c);
  fftw_destroy_plan(plans_->c2r);
}

void Fourier::forward(std::span<const double> phys,
                      std::span<std::complex<double>> spec) const {
  const std::size_t nphys = static_cast<std::size_t>(nx_) * nz_;
  const std::size_t nspec = static_cast<std::size_t>(modes()) * nz_;
  FftwBuffer<double> in(nphys);
  FftwBuffer<fftw_complex> out(nspec);
  std::memcpy(in.ptr, phys.data(), sizeof(double) * nphys);
  fftw_execute_dft_r2c(plans_->r2c, in.ptr, out.ptr);
  const double scale = 1.0 / nx_;
  for (std::size_t k = 0; k < nspec; ++k) {
    spec[k] = {out.ptr[k][0] * scale, out.ptr[k][1] * scale};
  }
}

void Fourier::inverse(std::span<const std::complex<double>> spec,
                      std::span<double> phys) const {
  const std::size_t nphys = static_cast<std::size_t>(nx_) * nz_;
  const std::size_t nspec = static_cast<std::size_t>(modes()) * nz_;
  FftwBuffer<fftw_complex> in(nspec);
  FftwBuffer<double> out(nphys);
  std::memcpy(in.ptr, spec.data(), sizeof(fftw_complex) * nspec);
  // The imaginary parts of the mean and Nyquist modes are not representable.
  for (int j = 0; j < nz_; ++j) {
    in.ptr[j][1] = 0.0;
    if (nx_ % 2 == 0) in.ptr[static_cast<std::size_t>(nx_ / 2) * nz_ + j][1] = 0.0;
  }
  fftw_execute_dft_c2r(plans_->c2r, in.ptr, out.ptr);
  std::memcpy(phys.data(), out.ptr, sizeof(double) * nphys);
}

}  // namespace rbslip::detail
