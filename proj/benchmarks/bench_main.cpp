#include "rbslip/diagnostics.hpp"
#include "rbslip/operators.hpp"
#include "rbslip/solver.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

using namespace rbslip;

namespace {

constexpr double pi = std::numbers::pi;

ScalarField smooth(const DomainPtr& d) {
  return ScalarField::from_function(d, [](double x, double z) { return std::sin(pi * x) * std::sin(pi * z) + z * z; });
}

FlowState convecting(const DomainPtr& d, const PhysParams& p) {
  InitialCondition ic;
  ic.amplitude = 0.2;
  Integrator it(p, make_initial_state(ic, d, p));
  for (int k = 0; k < 50; ++k) it.step(1e-5);
  return it.state();
}

void BM_Step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto d = Domain::create(2.0, n, n + 1);
  PhysParams p;
  p.ra = 1e5;
  Integrator it(p, convecting(d, p));
  for (auto _ : state) it.step(1e-6);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Step)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SolveElliptic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto d = Domain::create(2.0, n, n + 1);
  const EllipticSolver solver(d);
  const auto rhs = smooth(d);
  EllipticProblem prob;
  prob.helmholtz_shift = 10.0;
  solver.solve(prob, rhs);
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(prob, rhs));
}
BENCHMARK(BM_SolveElliptic)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_Derivatives(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto d = Domain::create(2.0, n, n + 1);
  const auto f = smooth(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ddx(f));
    benchmark::DoNotOptimize(ddz(f));
  }
}
BENCHMARK(BM_Derivatives)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_Evaluate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto d = Domain::create(2.0, n, n + 1);
  PhysParams p;
  p.ra = 1e5;
  const auto s = convecting(d, p);
  const EllipticSolver solver(d);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(s, p, {}, &solver));
}
BENCHMARK(BM_Evaluate)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
