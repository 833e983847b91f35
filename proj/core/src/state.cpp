#include "rbslip/error.hpp"
#include "rbslip/solver.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace rbslip {

FlowState FlowState::from_fields(ScalarField t, ScalarField omega, ScalarField psi, double time) {
  VectorField u = velocity_from_streamfunction(psi);
  return FlowState{std::move(t), std::move(omega), std::move(psi), std::move(u), time};
}

FlowState FlowState::conduction(const DomainPtr& domain) {
  ScalarField t = ScalarField::from_function(domain, [](double, double z) { return 1.0 - z; });
  return from_fields(std::move(t), ScalarField(domain), ScalarField(domain), 0.0);
}

double FlowState::mean_flow() const noexcept {
  const Domain& d = streamfunction.domain();
  double s = 0.0;
  for (int i = 0; i < d.nx(); ++i) s += streamfunction(i, d.nz() - 1);
  return -s / d.nx();
}

FlowState make_initial_state(const InitialCondition& ic, const DomainPtr& domain,
                             const PhysParams& params) {
  params.validate();
  if (std::abs(params.gamma - domain->gamma()) > 1e-12 * params.gamma)
    throw InvalidInput("params.gamma does not match the domain aspect ratio");
  const double pi = std::numbers::pi;

  ScalarField t(domain);
  if (ic.temperature) {
    if (ic.temperature->domain_ptr() != domain) throw InvalidInput("initial temperature lives on another domain");
    t = *ic.temperature;
  } else {
    std::vector<double> a(4, 0.0), b(4, 0.0);
    if (ic.seed == 0) {
      a[0] = 1.0;
    } else {
      std::mt19937_64 rng(ic.seed);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      double total = 0.0;
      for (int m = 0; m < 4; ++m) {
        a[m] = u(rng);
        b[m] = u(rng);
        total += std::abs(a[m]) + std::abs(b[m]);
      }
      for (int m = 0; m < 4; ++m) {
        a[m] /= total;
        b[m] /= total;
      }
    }
    const double amp = ic.amplitude;
    t = ScalarField::from_function(domain, [&](double x, double z) {
      double h = 0.0;
      for (int m = 0; m < 4; ++m) {
        const double k = 2.0 * pi * (m + 1) / domain->gamma();
        h += a[m] * std::cos(k * x) + b[m] * std::sin(k * x);
      }
      return 1.0 - z + amp * std::sin(pi * z) * h;
    });
  }
  if (!t.all_finite()) throw InvalidInput("initial temperature has non-finite entries");
  if (t.min_value() < -1e-12 || t.max_value() > 1.0 + 1e-12)
    throw InvalidInput("initial temperature must satisfy 0 <= T0 <= 1");

  ScalarField psi(domain);
  if (ic.streamfunction) {
    if (ic.streamfunction->domain_ptr() != domain)
      throw InvalidInput("initial streamfunction lives on another domain");
    psi = *ic.streamfunction;
    if (!psi.all_finite()) throw InvalidInput("initial streamfunction has non-finite entries");
    const auto bottom = psi.wall_profile(false);
    const auto top = psi.wall_profile(true);
    const double scale = std::max(1.0, psi.max_abs());
    for (int i = 0; i < domain->nx(); ++i) {
      if (std::abs(bottom[i]) > 1e-9 * scale || std::abs(top[i] - top[0]) > 1e-9 * scale)
        throw InvalidInput(
            "initial streamfunction must vanish on the bottom wall and be constant on the top wall");
    }
  }
  ScalarField omega = laplacian(psi);
  return FlowState::from_fields(std::move(t), std::move(omega), std::move(psi), 0.0);
}

}  // namespace rbslip
