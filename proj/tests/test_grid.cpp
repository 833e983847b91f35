#include "rbslip/error.hpp"
#include "rbslip/grid.hpp"
#include "rbslip/params.hpp"
#include "rbslip/operators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

using namespace rbslip;

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

TEST(Domain, RejectsBadShapes) {
  EXPECT_THROW(Domain::create(2.0, 7, 33), InvalidInput);
  EXPECT_THROW(Domain::create(2.0, 6, 33), InvalidInput);
  EXPECT_THROW(Domain::create(2.0, 16, 8), InvalidInput);
  EXPECT_THROW(Domain::create(0.0, 16, 33), InvalidInput);
  EXPECT_THROW(Domain::create(-1.0, 16, 33), InvalidInput);
}

TEST(Domain, NodesAndWeights) {
  for (int nz : {9, 17, 33, 65, 129}) {
    const auto d = Domain::create(2.0, 16, nz);
    const auto z = d->vertical_nodes();
    ASSERT_EQ(static_cast<int>(z.size()), nz);
    EXPECT_EQ(z.front(), 0.0);
    EXPECT_EQ(z.back(), 1.0);
    for (int j = 1; j < nz; ++j) EXPECT_GT(z[j], z[j - 1]);
    const auto w = d->quad_weights();
    for (double x : w) EXPECT_GT(x, 0.0);
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(Integrate, ConstantField) {
  const auto d = Domain::create(2.0, 16, 17);
  EXPECT_NEAR(integrate(ScalarField::from_function(d, [](double, double) { return 1.0; })), 2.0, 1e-14);
}

TEST(Integrate, ZeroMeanHarmonic) {
  const auto d = Domain::create(2.0, 16, 17);
  const auto f = ScalarField::from_function(d, [](double x, double) { return std::sin(2.0 * pi * x / 2.0); });
  EXPECT_NEAR(integrate(f), 0.0, 1e-12);
}

TEST(Integrate, QuadraticProfileOracle) {
  const auto d = Domain::create(1.0, 8, 17);
  const auto f = ScalarField::from_function(d, [](double, double z) { return z * z; });
  EXPECT_NEAR(integrate(f), 1.0 / 3.0, 1e-14);
}

TEST(Integrate, RejectsNonFinite) {
  const auto d = Domain::create(1.0, 8, 9);
  ScalarField f(d);
  f(3, 4) = std::nan("");
  EXPECT_THROW(integrate(f), InvalidInput);
  EXPECT_THROW(norm(f, 2.0), InvalidInput);
}

TEST(Norm, ZeroAndConstant) {
  const auto d = Domain::create(1.0, 8, 17);
  const ScalarField zero(d);
  for (double p : {1.0, 2.0, 4.0, kInf}) EXPECT_EQ(norm(zero, p), 0.0);
  const auto c = ScalarField::from_function(d, [](double, double) { return -3.0; });
  EXPECT_NEAR(norm(c, 2.0), 3.0, 1e-14);
  EXPECT_NEAR(norm(c, 1.0), 3.0, 1e-14);
  EXPECT_NEAR(norm(c, kInf), 3.0, 0.0);
}

TEST(Norm, SineOracle) {
  const auto d = Domain::create(1.0, 8, 33);
  const auto f = ScalarField::from_function(d, [](double, double z) { return std::sin(pi * z); });
  EXPECT_NEAR(norm(f, 2.0), std::sqrt(0.5), 1e-12);
  // int sin^4 = 3/8
  EXPECT_NEAR(norm(f, 4.0), std::pow(3.0 / 8.0, 0.25), 1e-12);
}

TEST(Norm, UnsupportedExponent) {
  const auto d = Domain::create(1.0, 8, 9);
  EXPECT_THROW(norm(ScalarField(d), 3.0), InvalidInput);
  EXPECT_THROW(norm(ScalarField(d), 0.5), InvalidInput);
}

TEST(SobolevNorm, ZeroAndOracle) {
  const auto d = Domain::create(1.0, 16, 33);
  EXPECT_EQ(sobolev_norm(ScalarField(d), SobolevKind::H1), 0.0);
  EXPECT_EQ(sobolev_norm(ScalarField(d), SobolevKind::W14), 0.0);
  // f = sin(2 pi x): |f|^2 = 1/2, |grad f|^2 = 2 pi^2.
  const auto f = ScalarField::from_function(d, [](double x, double) { return std::sin(2.0 * pi * x); });
  EXPECT_NEAR(sobolev_norm(f, SobolevKind::H1), std::sqrt(0.5 + 2.0 * pi * pi), 1e-11);
}

TEST(SobolevNorm, CustomGradientProvider) {
  const auto d = Domain::create(1.0, 16, 17);
  const auto f = ScalarField::from_function(d, [](double, double z) { return z; });
  int calls = 0;
  const double v = sobolev_norm(f, SobolevKind::H1, [&](const ScalarField& g) {
    ++calls;
    return std::pair{ddx(g), ddz(g)};
  });
  EXPECT_EQ(calls, 1);
  EXPECT_NEAR(v, std::sqrt(1.0 / 3.0 + 1.0), 1e-12);
}

TEST(Profiles, AverageTraceAndPartialIntegral) {
  const auto d = Domain::create(2.0, 16, 33);
  const auto f = ScalarField::from_function(d, [](double x, double z) { return z * z + std::cos(pi * x); });
  const auto avg = horizontal_average(f);
  for (int j = 0; j < d->nz(); ++j) EXPECT_NEAR(avg[j], d->z(j) * d->z(j), 1e-14);
  EXPECT_NEAR(wall_trace_integral(f, Wall::top), 2.0, 1e-13);
  EXPECT_NEAR(wall_trace_integral(f, Wall::bottom), 0.0, 1e-13);
  EXPECT_NEAR(integrate_profile_below(*d, avg, 0.3), 0.009, 1e-13);
  EXPECT_NEAR(evaluate_profile(*d, avg, 0.37), 0.37 * 0.37, 1e-13);
}

TEST(ScalarField, ArithmeticAndLayout) {
  const auto d = Domain::create(2.0, 8, 9);
  auto a = ScalarField::from_function(d, [](double x, double z) { return x + 10.0 * z; });
  EXPECT_DOUBLE_EQ(a(2, 8), d->x(2) + 10.0);
  EXPECT_DOUBLE_EQ(a.values()[2 * 9 + 8], a(2, 8));
  EXPECT_DOUBLE_EQ(a.matrix()(8, 2), a(2, 8));
  const auto b = 2.0 * a - a;
  for (std::size_t k = 0; k < a.values().size(); ++k) EXPECT_DOUBLE_EQ(b.values()[k], a.values()[k]);
  const auto top = a.wall_profile(true);
  EXPECT_DOUBLE_EQ(top[3], d->x(3) + 10.0);
}
