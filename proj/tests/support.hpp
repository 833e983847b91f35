#pragma once

#include "rbslip/grid.hpp"
#include "rbslip/operators.hpp"
#include "rbslip/params.hpp"
#include "rbslip/solver.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace rbslip::test_support {

/// Vertical profile vanishing at both walls and obeying the Navier-slip
/// relations a''(0) = a'(0)/ls, a''(1) = -a'(1)/ls (u1 = -a').
/// a = sum_n c_n sin(n pi z) + b1 z(1 - z) + b2 z^2(1 - z), b1 and b2 solved.
struct SlipProfile {
  std::vector<double> c;
  double b1 = 0.0;
  double b2 = 0.0;

  SlipProfile(std::vector<double> coeffs, double ls) : c(std::move(coeffs)) {
    const double il = std::isinf(ls) ? 0.0 : 1.0 / ls;
    const double pi = std::numbers::pi;
    // sin part contributes a'(0) = sum n pi c_n, a'(1) = sum n pi c_n (-1)^n,
    // a''(0) = a''(1) = 0.
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t n = 1; n <= c.size(); ++n) {
      d0 += n * pi * c[n - 1];
      d1 += n * pi * c[n - 1] * (n % 2 ? -1.0 : 1.0);
    }
    // Rows: a''(0) - il a'(0) = 0, a''(1) + il a'(1) = 0.
    const double m00 = -2.0 - il, m01 = 2.0;
    const double m10 = -2.0 - il, m11 = -4.0 - il;
    const double r0 = il * d0, r1 = -il * d1;
    const double det = m00 * m11 - m01 * m10;
    b1 = (r0 * m11 - m01 * r1) / det;
    b2 = (m00 * r1 - m10 * r0) / det;
  }

  double operator()(double z) const {
    double v = b1 * z * (1.0 - z) + b2 * z * z * (1.0 - z);
    for (std::size_t n = 1; n <= c.size(); ++n) v += c[n - 1] * std::sin(n * std::numbers::pi * z);
    return v;
  }
};

/// Random streamfunction, temperature and pressure built from a few
/// horizontal and vertical modes, resolved exactly on grids of 32 x 33 or
/// finer. psi satisfies the slip walls for `ls`, T = 1 at z = 0 and 0 at z = 1.
struct RandomFields {
  FlowState state;
  ScalarField pressure;
};

inline RandomFields random_admissible(const DomainPtr& d, double ls, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> logscale(-2.0, 1.0);
  const double pi = std::numbers::pi;
  const double g = d->gamma();
  constexpr int kx = 3, kz = 4;
  std::vector<SlipProfile> cos_p, sin_p;
  for (int k = 0; k <= kx; ++k) {
    const double amp = std::pow(10.0, logscale(rng));
    auto coeffs = [&] {
      std::vector<double> c(kz);
      for (double& x : c) x = amp * u(rng);
      return c;
    };
    cos_p.emplace_back(coeffs(), ls);
    sin_p.emplace_back(coeffs(), ls);
  }
  std::vector<double> tc(kx * kz * 2), pc((kx + 1) * 3 * 2);
  for (double& x : tc) x = 0.3 * u(rng);
  for (double& x : pc) x = std::pow(10.0, logscale(rng)) * u(rng);

  auto psi = ScalarField::from_function(d, [&](double x, double z) {
    double v = cos_p[0](z);
    for (int k = 1; k <= kx; ++k) {
      const double a = 2.0 * pi * k * x / g;
      v += cos_p[k](z) * std::cos(a) + sin_p[k](z) * std::sin(a);
    }
    return v;
  });
  auto t = ScalarField::from_function(d, [&](double x, double z) {
    double v = 1.0 - z;
    for (int k = 0; k < kx; ++k)
      for (int n = 1; n <= kz; ++n) {
        const double a = 2.0 * pi * k * x / g;
        const double s = std::sin(n * pi * z) / (n * n);
        v += s * (tc[2 * (k * kz + n - 1)] * std::cos(a) + tc[2 * (k * kz + n - 1) + 1] * std::sin(a));
      }
    return v;
  });
  auto p = ScalarField::from_function(d, [&](double x, double z) {
    double v = 0.0;
    for (int k = 0; k <= kx; ++k)
      for (int n = 0; n < 3; ++n) {
        const double a = 2.0 * pi * k * x / g;
        const double s = std::cos(n * pi * z);
        v += s * (pc[2 * (k * 3 + n)] * std::cos(a) + pc[2 * (k * 3 + n) + 1] * std::sin(a));
      }
    return v;
  });
  const ScalarField w = laplacian(psi);
  return {FlowState::from_fields(std::move(t), w, std::move(psi), 0.0), std::move(p)};
}

}  // namespace rbslip::test_support
