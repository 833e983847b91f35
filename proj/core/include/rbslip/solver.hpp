#pragma once

#include "rbslip/grid.hpp"
#include "rbslip/operators.hpp"
#include "rbslip/params.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace rbslip {

/// Prognostic fields (T, omega) with the derived streamfunction and velocity.
/// The horizontal mean flow U = integral of u1 over the height is carried by
/// the streamfunction through psi = 0 at the bottom and psi = -U at the top.
struct FlowState {
  ScalarField temperature;
  ScalarField vorticity;
  ScalarField streamfunction;
  VectorField velocity;
  double time = 0.0;

  /// Builds the velocity from psi.
  static FlowState from_fields(ScalarField t, ScalarField omega, ScalarField psi, double time);
  /// u = 0, T = 1 - z.
  static FlowState conduction(const DomainPtr& domain);

  const DomainPtr& domain() const noexcept { return temperature.domain_ptr(); }
  double mean_flow() const noexcept;
};

/// Either explicit fields or a seeded perturbation of the conduction state.
///
/// With no explicit temperature, T0 = 1 - z + amplitude * sin(pi z) * h(x),
/// where h = cos(2 pi x / gamma) for seed 0 and a seeded random combination
/// of the first four horizontal modes (max |h| <= 1) otherwise. A missing
/// streamfunction means u0 = 0.
struct InitialCondition {
  std::optional<ScalarField> temperature;
  std::optional<ScalarField> streamfunction;
  std::uint64_t seed = 0;
  double amplitude = 0.01;

  static InitialCondition conduction() {
    InitialCondition ic;
    ic.amplitude = 0.0;
    return ic;
  }
};

/// Checks 0 <= T0 <= 1 and builds omega from psi0 (which must satisfy the
/// wall conditions for the given slip length).
FlowState make_initial_state(const InitialCondition& ic, const DomainPtr& domain,
                             const PhysParams& params);

/// Semi-implicit integrator. Diffusion and buoyancy are Crank-Nicolson,
/// advection is second-order Adams-Bashforth (variable step, Euler on the
/// first step) with 2/3-rule dealiasing. The Navier-slip vorticity traces,
/// the Dirichlet streamfunction walls and the mean-flow equation are imposed
/// implicitly at the time level of the implicit terms via an influence-matrix
/// closure, so the walls obey omega = -+u1/ls exactly after every step.
/// For pr = inf the vorticity solves Laplacian(omega) = -Ra dT/dx each step.
///
/// Modes above the dealiasing cutoff are removed from the state.
class Integrator {
 public:
  Integrator(const PhysParams& params, const FlowState& initial);
  ~Integrator();
  Integrator(Integrator&&) noexcept;
  Integrator& operator=(Integrator&&) noexcept;

  /// Advances by dt. Throws BlowUp on non-finite values or coefficients
  /// above 1e30. A step longer than
  /// the advective CFL limit (cfl = 1) is reported on the warning channel.
  void step(double dt);

  const FlowState& state() const;
  const PhysParams& params() const noexcept;
  const DomainPtr& domain() const noexcept;
  double time() const noexcept;
  std::int64_t steps() const noexcept;

  /// Advective step limit cfl * min(dx / max|u1|, min_j h_j / max_i |u2|),
  /// h_j the local vertical spacing. Infinity for a fluid at rest.
  double advective_limit(double cfl) const;

  using WarningSink = std::function<void(const std::string&)>;
  void set_warning_sink(WarningSink sink);
  std::int64_t cfl_warnings() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One step from a state with no history (Euler bootstrap for advection).
FlowState step(const FlowState& state, const PhysParams& params, double dt);

/// Pressure of a state: zero-mean solution of
///   Laplacian p = -(1/Pr) grad u^T : grad u + Ra dT/dz,
///   dp/dz = Ra T - (1/ls) du1/dx at z = 0,  dp/dz = Ra T + (1/ls) du1/dx at z = 1.
/// The mean-constraint defect of the discrete data is projected out; above
/// 1e-4 (relative) IncompatibleData is thrown.
ScalarField recover_pressure(const FlowState& state, const PhysParams& params);
ScalarField recover_pressure(const FlowState& state, const PhysParams& params,
                             const EllipticSolver& solver);

}  // namespace rbslip
