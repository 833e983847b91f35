#include "rbslip/run.hpp"

#include "rbslip/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rbslip {

RunResult run(const FlowState& initial, const PhysParams& params, const RunSchedule& schedule,
              const RunObserver& observer) {
  params.validate();
  if (!(schedule.t_end >= 0.0) || !std::isfinite(schedule.t_end)) throw InvalidInput("t_end must be finite and >= 0");
  if (!(schedule.sample_interval > 0.0)) throw InvalidInput("sample interval must be positive");
  if (!(schedule.spinup_fraction >= 0.0 && schedule.spinup_fraction < 1.0))
    throw InvalidInput("spin-up fraction must lie in [0, 1)");
  if (schedule.dt <= 0.0 && !(schedule.cfl > 0.0 && schedule.dt_max > 0.0))
    throw InvalidInput("adaptive stepping needs cfl > 0 and dt_max > 0");

  const EllipticSolver solver(initial.domain());
  Integrator it(params, initial);
  RunResult res{it.state(), {}, TimeAverager(initial.time + schedule.spinup_fraction * schedule.t_end)};
  {
    const VectorField& u = initial.velocity;
    const double a = sobolev_norm(u.u1, SobolevKind::W14);
    const double b = sobolev_norm(u.u2, SobolevKind::W14);
    res.u0_w14 = std::pow(std::pow(a, 4) + std::pow(b, 4), 0.25);
  }

  auto sample = [&] {
    const FlowState& s = it.state();
    DiagRecord r = evaluate(s, params, schedule.diag, &solver);
    res.records.push_back(r);
    res.average.add(r);
    if (observer) observer(s, r);
  };
  sample();

  const double t0 = initial.time;
  const double t_final = t0 + schedule.t_end;
  const double eps = 1e-12 * std::max(1.0, std::abs(t_final));
  std::int64_t next_sample = 1;
  double dt = schedule.dt > 0.0 ? schedule.dt : 0.0;
  while (it.time() < t_final - eps) {
    if (schedule.dt <= 0.0) {
      const double target = std::min(schedule.dt_max, it.advective_limit(schedule.cfl));
      if (dt == 0.0 || dt > target || dt < 0.7 * target) dt = 0.85 * target;
    }
    double h = dt;
    // Land exactly on the final time.
    if (it.time() + h > t_final - eps) h = t_final - it.time();
    it.step(h);
    if (it.time() >= t0 + next_sample * schedule.sample_interval - eps || it.time() >= t_final - eps) {
      sample();
      while (t0 + next_sample * schedule.sample_interval <= it.time() + eps) ++next_sample;
    }
  }
  res.final_state = it.state();
  res.steps = it.steps();
  res.last_dt = dt;
  res.cfl_warnings = it.cfl_warnings();
  return res;
}

RunResult run(const InitialCondition& init, const DomainPtr& domain, const PhysParams& params,
              const RunSchedule& schedule, const RunObserver& observer) {
  return run(make_initial_state(init, domain, params), params, schedule, observer);
}

RunSummary summarize(const RunResult& result, const PhysParams& params) {
  RunSummary s;
  TimeAverager fallback;
  const TimeAverager* a = &result.average;
  if (a->empty()) {
    // Horizon shorter than the spin-up: average the last sample only.
    fallback.add(result.records.back());
    a = &fallback;
  }
  s.nu_flux = nusselt_flux(*a);
  s.nu_grad = nusselt_grad(*a);
  const Domain& d = *a->domain();
  for (double delta : {0.05, 0.1, 0.2}) {
    s.deltas.push_back(delta);
    s.nu_local.push_back(delta >= min_localization_delta(d) ? nusselt_localized(*a, delta).exact
                                                             : std::numeric_limits<double>::quiet_NaN());
  }
  const auto prof = a->mean_profile([](const DiagRecord& r) -> const std::vector<double>& { return r.nusselt_profile; });
  double flat = 0.0;
  for (double v : prof) flat = std::max(flat, std::abs(v - prof.front()));
  s.nu_profile_flat = prof.front() != 0.0 ? flat / std::abs(prof.front()) : 0.0;
  s.energy_resid = energy_balance(*a, params).residual;
  bool have_p = std::all_of(a->samples().begin(), a->samples().end(),
                            [](const DiagRecord& r) { return r.enstrophy.has_pressure; });
  if (have_p) {
    const auto e = enstrophy_balance(*a, params);
    const double rhs = e.wall_pressure_term + e.nu_ra32;
    s.enstrophy_margin = rhs > 0.0 ? e.margin / rhs : 0.0;
  } else {
    s.enstrophy_margin = std::numeric_limits<double>::quiet_NaN();
  }
  s.trace_margin_min = std::numeric_limits<double>::infinity();
  s.interp_margin_min = std::numeric_limits<double>::infinity();
  s.hessian_margin_min = std::numeric_limits<double>::infinity();
  s.t_min = std::numeric_limits<double>::infinity();
  s.t_max = -std::numeric_limits<double>::infinity();
  for (const auto& r : result.records) {
    if (r.enstrophy.has_pressure) s.trace_margin_min = std::min(s.trace_margin_min, r.trace_margin);
    s.interp_margin_min = std::min(s.interp_margin_min, r.interp_margin);
    s.hessian_margin_min = std::min(s.hessian_margin_min, r.hessian_margin_rel);
    s.grad_iden_max_err = std::max(s.grad_iden_max_err, r.grad_iden_rel_err);
    s.omega_l4_max = std::max(s.omega_l4_max, r.omega_l4);
    s.t_min = std::min(s.t_min, r.t_min);
    s.t_max = std::max(s.t_max, r.t_max);
  }
  if (a->count() >= 2) {
    const double half = nusselt_flux(*a);
    const double quarter = nusselt_flux(a->tail(0.5));
    s.tail_discrepancy = half != 0.0 ? std::abs(half - quarter) / std::abs(half) : 0.0;
  }
  s.hessian_bound_ratio = hessian_bound_ratio(*a, params, result.u0_w14);
  s.converged = s.nu_flux != 0.0 && std::abs(s.nu_flux - s.nu_grad) / std::abs(s.nu_flux) <= 0.03;
  return s;
}

}  // namespace rbslip
