#pragma once

#include "rbslip/grid.hpp"
#include "rbslip/operators.hpp"
#include "rbslip/params.hpp"
#include "rbslip/solver.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace rbslip {

/// Constant in the near-wall interpolation estimate
///   (1/d) <int_0^d u2 T> <= 1/2 <int |dT/dz|^2> + C d^3 <|grad u|^2>^1/2 <|grad^2 u|^2>^1/2.
/// Tracking constants: |theta| <= z^1/2 |dtheta/dz|_2, |u2| <= z sqrt(2) a^1/2 b^1/2
/// (a, b the L2 norms of du2/dz and d2u2/dz2 on the column), int_0^d z^3/2 = (2/5) d^5/2,
/// then Cauchy-Schwarz and Young with equal halves give C = (2 sqrt(2)/5)^2 / 2 = 4/25.
/// Dropping the sqrt(2) from the mean-value step gives 2/25.
inline constexpr double kInterpolationConstant = 4.0 / 25.0;
inline constexpr double kInterpolationConstantNoRoot2 = 2.0 / 25.0;
/// Constant of the wall pressure-trace estimate.
inline constexpr double kTraceConstant = 3.0;

/// Volume and wall integrals below are divided by gamma, i.e. they are
/// horizontal averages integrated over the height.
struct EnergyTerms {
  double kinetic = 0.0;      // |u|^2
  double dissipation = 0.0;  // |grad u|^2
  double wall_u1sq = 0.0;    // u1^2 at z = 0 plus u1^2 at z = 1
  double buoyancy = 0.0;     // Ra T u2
};

struct EnstrophyTerms {
  double enstrophy = 0.0;      // |omega|^2
  double grad_omega_sq = 0.0;  // |grad omega|^2
  double pressure_wall = 0.0;  // p du1/dx at z = 0 plus at z = 1
  double buoyancy = 0.0;       // Ra omega dT/dx
  bool has_pressure = false;
};

/// All functionals of one sampled state.
struct DiagRecord {
  double time = 0.0;
  DomainPtr domain;
  std::vector<double> nusselt_profile;     // N(z) = mean_x(u2 T - dT/dz)
  std::vector<double> convective_profile;  // mean_x(u2 T)
  double nu_flux = 0.0;                    // vertical integral of N
  double nu_grad = 0.0;                    // |grad T|^2
  double nu_profile_flat = 0.0;            // max_z |N(z) - N(0)| / |N(0)|
  double dzt_sq = 0.0;                     // |dT/dz|^2
  EnergyTerms energy;
  EnstrophyTerms enstrophy;
  double hess_sq = 0.0;  // |grad^2 u|^2
  double pressure_h1 = 0.0;
  double trace_margin = 0.0;
  double pressure_bound_ratio = 0.0;  // NaN when undefined (0/0)
  double interp_margin = 0.0;         // min over the configured deltas
  double grad_iden_rel_err = 0.0;
  double hessian_margin_rel = 0.0;  // (|grad omega| - |grad^2 u|) / |grad omega|
  double omega_l4 = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  double u2_mean_max = 0.0;     // max_z |mean_x u2|
  double divergence_rel = 0.0;  // |div u|_2 / |grad u|_2
  double closure_defect = 0.0;  // wall mismatch of omega against -+u1/ls, relative
};

struct DiagOptions {
  std::vector<double> deltas{0.05, 0.1, 0.2};
  double interp_constant = kInterpolationConstant;
  double pressure_r = 4.0;
  bool with_pressure = true;
};

/// Evaluates every functional of one state. The pressure is recovered
/// internally (with `solver` when given) unless disabled in the options.
DiagRecord evaluate(const FlowState& state, const PhysParams& params,
                    const DiagOptions& options = {}, const EllipticSolver* solver = nullptr);

/// Time-weighted (trapezoid) averages over the samples with time >= t_start.
/// A single sample counts as its own average.
class TimeAverager {
 public:
  explicit TimeAverager(double t_start = 0.0) : t_start_(t_start) {}

  void add(const DiagRecord& r);
  bool empty() const noexcept { return samples_.empty(); }
  std::size_t count() const noexcept { return samples_.size(); }
  double t_start() const noexcept { return t_start_; }
  double duration() const noexcept;
  const std::vector<DiagRecord>& samples() const noexcept { return samples_; }
  const DomainPtr& domain() const;

  /// Throws InvalidInput on an empty window.
  double mean(const std::function<double(const DiagRecord&)>& f) const;
  std::vector<double> mean_profile(
      const std::function<const std::vector<double>&(const DiagRecord&)>& f) const;

  /// Average over the last `fraction` of the window.
  TimeAverager tail(double fraction) const;

 private:
  double t_start_;
  std::vector<DiagRecord> samples_;
};

std::vector<double> nusselt_profile(const FlowState& state);
double nusselt_flux(const TimeAverager& avg);
double nusselt_grad(const TimeAverager& avg);

struct LocalizedNusselt {
  double exact = 0.0;  // (1/d) <int_0^d (u2 T - dT/dz)>
  double bound = 0.0;  // (1/d) <int_0^d u2 T> + 1/d
};
/// Throws InvalidInput when fewer than two nodes lie in [0, delta].
LocalizedNusselt nusselt_localized(const TimeAverager& avg, double delta);
/// Smallest delta accepted by nusselt_localized on this domain.
double min_localization_delta(const Domain& d);

struct EnergyBalance {
  double lhs_dissipation = 0.0;
  double wall_term = 0.0;
  double rhs_buoyancy = 0.0;
  double residual = 0.0;  // relative
  double nu_ra = 0.0;     // Nu Ra, upper bound of the dissipation
};
EnergyBalance energy_balance(const TimeAverager& avg, const PhysParams& params);

struct EnstrophyBalance {
  double grad_omega_sq = 0.0;
  double wall_pressure_term = 0.0;  // (1/ls) |<p du1/dx|_1> + <p du1/dx|_0>|
  double nu_ra32 = 0.0;
  double margin = 0.0;  // wall + nu_ra32 - grad_omega_sq
};
/// Throws InvalidInput if any sample lacks the pressure terms.
EnstrophyBalance enstrophy_balance(const TimeAverager& avg, const PhysParams& params);

struct PressureIdentity {
  double lhs = 0.0;        // |grad p|^2
  double wall_term = 0.0;  // (1/ls) int (p du1/dx|_1 + p du1/dx|_0)
  double nonlinear_term = 0.0;  // (1/Pr) int p grad u^T : grad u
  double buoyancy_term = 0.0;   // Ra int T dp/dz
  double rel_residual = 0.0;
};
PressureIdentity pressure_identity(const FlowState& state, const ScalarField& p,
                                   const PhysParams& params);

struct TraceCheck {
  double lhs = 0.0;  // |int (p du1/dx|_1 + p du1/dx|_0)|
  double rhs = 0.0;  // 3 |p|_H1 |du/dz|_2
  double margin = 0.0;
};
TraceCheck trace_inequality(const FlowState& state, const ScalarField& p);

struct PressureBound {
  double p_h1 = 0.0;
  double bracket = 0.0;  // (1/ls)|du/dz| + (1/Pr)|omega|_2 |omega|_r + Ra |T|_2
  std::optional<double> ratio;  // empty for 0/0
};
PressureBound pressure_bound_check(const FlowState& state, const ScalarField& p,
                                   const PhysParams& params, double r = 4.0);

struct InterpolationCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
};
InterpolationCheck interpolation_check(const TimeAverager& avg, double delta,
                                       double constant = kInterpolationConstant);

struct HessianCheck {
  double hess_l2 = 0.0;
  double grad_omega_l2 = 0.0;
  double margin = 0.0;
};
/// Uses omega = du2/dx - du1/dz of the state's velocity.
HessianCheck hessian_check(const FlowState& state);

/// | |grad u|_2 - |omega|_2 | / |omega|_2 with omega the curl of the
/// velocity; 0 for a fluid at rest.
double grad_identity_check(const FlowState& state);

/// Ratio <|grad^2 u|^2> / rhs of the time-averaged Hessian estimate with
/// unit constant; u0_w14 is the W^{1,4} norm of the initial velocity.
double hessian_bound_ratio(const TimeAverager& avg, const PhysParams& params, double u0_w14);

/// Instantaneous balance residuals at interior samples, time derivatives by
/// centred differences of neighbouring samples:
///   energy:    (1/2Pr) d|u|^2/dt + |grad u|^2 + (1/ls) wall u1^2 - Ra int T u2
///   enstrophy: (1/2Pr) d/dt(|omega|^2 + (1/ls) wall u1^2) + |grad omega|^2
///              - (1/ls) int p du1/dx (both walls) - Ra int omega dT/dx
struct BalanceSample {
  double time = 0.0;
  double residual = 0.0;
  double scale = 0.0;  // largest term magnitude
};
std::vector<BalanceSample> energy_residuals(const std::vector<DiagRecord>& records,
                                            const PhysParams& params);
std::vector<BalanceSample> enstrophy_residuals(const std::vector<DiagRecord>& records,
                                               const PhysParams& params);

}  // namespace rbslip
