#include "rbslip/error.hpp"
#include "rbslip/solver.hpp"

namespace rbslip {

ScalarField recover_pressure(const FlowState& state, const PhysParams& params,
                             const EllipticSolver& solver) {
  params.validate();
  const auto& dom = state.domain();
  const ScalarField& u1 = state.velocity.u1;
  const ScalarField& u2 = state.velocity.u2;
  const ScalarField u1x = ddx(u1);
  const ScalarField u1z = ddz(u1);
  const ScalarField u2x = ddx(u2);
  const ScalarField u2z = ddz(u2);
  const ScalarField tz = ddz(state.temperature);

  ScalarField rhs(dom);
  auto r = rhs.values();
  const double inv_pr = params.inv_pr();
  for (std::size_t q = 0; q < r.size(); ++q) {
    const double a = u1x.values()[q], b = u1z.values()[q], c = u2x.values()[q], d = u2z.values()[q];
    r[q] = -inv_pr * (a * a + 2.0 * c * b + d * d) + params.ra * tz.values()[q];
  }
  const double inv_ls = params.inv_ls();
  const auto t0 = state.temperature.wall_profile(false);
  const auto t1 = state.temperature.wall_profile(true);
  const auto s0 = u1x.wall_profile(false);
  const auto s1 = u1x.wall_profile(true);
  std::vector<double> g0(dom->nx()), g1(dom->nx());
  for (int i = 0; i < dom->nx(); ++i) {
    g0[i] = params.ra * t0[i] - inv_ls * s0[i];
    g1[i] = params.ra * t1[i] + inv_ls * s1[i];
  }
  EllipticProblem prob{0.0, BoundaryCondition::neumann(std::move(g0)),
                       BoundaryCondition::neumann(std::move(g1))};
  return solver.solve(prob, rhs, 1e-4).solution;
}

ScalarField recover_pressure(const FlowState& state, const PhysParams& params) {
  return recover_pressure(state, params, EllipticSolver(state.domain()));
}

}  // namespace rbslip
