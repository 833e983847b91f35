#pragma once

#include "rbslip/diagnostics.hpp"
#include "rbslip/solver.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rbslip {

/// Time step policy and sampling for run().
struct RunSchedule {
  double t_end = 1.0;
  /// Fixed step when > 0, otherwise adaptive: dt <= cfl * advective limit
  /// and dt <= dt_max, adjusted only when the limit moves by more than 30%.
  double dt = 0.0;
  double cfl = 0.25;
  double dt_max = 1e-3;
  /// Samples are taken at the first step reaching each multiple of this.
  double sample_interval = 0.01;
  /// Fraction of the horizon discarded before averaging.
  double spinup_fraction = 0.5;
  DiagOptions diag;
};

/// Called after every sample, including the initial one.
using RunObserver = std::function<void(const FlowState&, const DiagRecord&)>;

struct RunResult {
  FlowState final_state;
  std::vector<DiagRecord> records;
  TimeAverager average;
  std::int64_t steps = 0;
  double last_dt = 0.0;
  double u0_w14 = 0.0;
  std::int64_t cfl_warnings = 0;
};

/// Integrates from the initial condition, sampling diagnostics. t_end = 0
/// yields the initial sample only. Step failures propagate (BlowUp).
RunResult run(const FlowState& initial, const PhysParams& params, const RunSchedule& schedule,
              const RunObserver& observer = {});
RunResult run(const InitialCondition& init, const DomainPtr& domain, const PhysParams& params,
              const RunSchedule& schedule, const RunObserver& observer = {});

/// Time-averaged results of a run, as stored in sweep rows.
struct RunSummary {
  double nu_flux = 0.0;
  double nu_grad = 0.0;
  std::vector<double> deltas;
  std::vector<double> nu_local;
  double nu_profile_flat = 0.0;
  double energy_resid = 0.0;
  double enstrophy_margin = 0.0;  // relative to its right-hand side
  double trace_margin_min = 0.0;
  double interp_margin_min = 0.0;
  double grad_iden_max_err = 0.0;
  double hessian_margin_min = 0.0;  // relative
  double omega_l4_max = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  /// |Nu over the last half - Nu over the last quarter| / Nu, window-convergence indicator.
  double tail_discrepancy = 0.0;
  double hessian_bound_ratio = 0.0;
  bool converged = true;  // flux and gradient routes within 3%
};

RunSummary summarize(const RunResult& result, const PhysParams& params);

}  // namespace rbslip
