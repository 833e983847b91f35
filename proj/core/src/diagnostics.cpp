#include "rbslip/diagnostics.hpp"

#include "rbslip/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rbslip {

namespace {

double sq_integral(std::initializer_list<const ScalarField*> fs) {
  double s = 0.0;
  for (const ScalarField* f : fs) s += integrate(*f * *f);
  return s;
}

double wall_sum(const ScalarField& f) {
  return wall_trace_integral(f, Wall::bottom) + wall_trace_integral(f, Wall::top);
}

struct Derivatives {
  ScalarField u1x, u1z, u2x, u2z;
  explicit Derivatives(const VectorField& u)
      : u1x(ddx(u.u1)), u1z(ddz(u.u1)), u2x(ddx(u.u2)), u2z(ddz(u.u2)) {}
  ScalarField curl() const { return u2x - u1z; }
  double grad_sq() const { return sq_integral({&u1x, &u1z, &u2x, &u2z}); }
};

double hess_sq_integral(const Derivatives& g) {
  double s = 0.0;
  for (const ScalarField* dx : {&g.u1x, &g.u2x}) {
    const ScalarField xx = ddx(*dx);
    const ScalarField xz = ddz(*dx);
    s += integrate(xx * xx) + 2.0 * integrate(xz * xz);
  }
  for (const ScalarField* dz : {&g.u1z, &g.u2z}) {
    const ScalarField zz = ddz(*dz);
    s += integrate(zz * zz);
  }
  return s;
}

double interp_margin(const Domain& d, const std::vector<double>& conv, double dzt_sq,
                     double dissipation, double hess_sq, double delta, double c) {
  const double lhs = integrate_profile_below(d, conv, delta) / delta;
  const double rhs = 0.5 * dzt_sq + c * delta * delta * delta * std::sqrt(dissipation * hess_sq);
  return rhs - lhs;
}

}  // namespace

std::vector<double> nusselt_profile(const FlowState& state) {
  const ScalarField tz = ddz(state.temperature);
  return horizontal_average(state.velocity.u2 * state.temperature - tz);
}

double min_localization_delta(const Domain& d) { return d.z(1); }

DiagRecord evaluate(const FlowState& state, const PhysParams& params, const DiagOptions& options,
                    const EllipticSolver* solver) {
  params.validate();
  const DomainPtr& dom = state.domain();
  const Domain& d = *dom;
  const double g = d.gamma();
  const ScalarField& t = state.temperature;
  const ScalarField& w = state.vorticity;
  const VectorField& u = state.velocity;
  for (const ScalarField* f : {&t, &w, &state.streamfunction})
    if (!f->all_finite()) throw InvalidInput("evaluate: state has non-finite entries");

  DiagRecord r;
  r.time = state.time;
  r.domain = dom;
  const ScalarField tx = ddx(t);
  const ScalarField tz = ddz(t);
  const ScalarField u2t = u.u2 * t;
  r.convective_profile = horizontal_average(u2t);
  r.nusselt_profile = horizontal_average(u2t - tz);
  r.nu_flux = vertical_integral(d, r.nusselt_profile);
  r.dzt_sq = integrate(tz * tz) / g;
  r.nu_grad = integrate(tx * tx) / g + r.dzt_sq;
  const double n0 = r.nusselt_profile.front();
  double flat = 0.0;
  for (double v : r.nusselt_profile) flat = std::max(flat, std::abs(v - n0));
  r.nu_profile_flat = n0 != 0.0 ? flat / std::abs(n0) : 0.0;

  const Derivatives gu(u);
  const double grad_u_sq = gu.grad_sq();
  const ScalarField u1sq = u.u1 * u.u1;
  r.energy.kinetic = sq_integral({&u.u1, &u.u2}) / g;
  r.energy.dissipation = grad_u_sq / g;
  r.energy.wall_u1sq = wall_sum(u1sq) / g;
  r.energy.buoyancy = params.ra * integrate(u2t) / g;

  const ScalarField wx = ddx(w);
  const ScalarField wz = ddz(w);
  r.enstrophy.enstrophy = integrate(w * w) / g;
  r.enstrophy.grad_omega_sq = sq_integral({&wx, &wz}) / g;
  r.enstrophy.buoyancy = params.ra * integrate(w * tx) / g;

  const double hess = hess_sq_integral(gu);
  r.hess_sq = hess / g;

  // Checks that use the curl of the velocity.
  const ScalarField wc = gu.curl();
  const double wc_sq = integrate(wc * wc);
  r.grad_iden_rel_err = wc_sq > 0.0 ? std::abs(std::sqrt(grad_u_sq) - std::sqrt(wc_sq)) / std::sqrt(wc_sq) : 0.0;
  {
    const ScalarField cx = ddx(wc);
    const ScalarField cz = ddz(wc);
    const double gw = std::sqrt(sq_integral({&cx, &cz}));
    r.hessian_margin_rel = gw > 0.0 ? (gw - std::sqrt(hess)) / gw : 0.0;
  }

  r.omega_l4 = norm(w, 4.0);
  r.t_min = t.min_value();
  r.t_max = t.max_value();
  {
    const auto m = horizontal_average(u.u2);
    double mx = 0.0;
    for (double v : m) mx = std::max(mx, std::abs(v));
    r.u2_mean_max = mx;
    const ScalarField div = gu.u1x + gu.u2z;
    r.divergence_rel = grad_u_sq > 0.0 ? std::sqrt(integrate(div * div) / grad_u_sq) : 0.0;
  }
  {
    const auto expected = vorticity_wall_values(u.u1.wall_profile(false), u.u1.wall_profile(true), params.ls);
    const auto wb = w.wall_profile(false);
    const auto wt = w.wall_profile(true);
    double err = 0.0;
    for (int i = 0; i < d.nx(); ++i)
      err = std::max({err, std::abs(wb[i] - expected.bottom[i]), std::abs(wt[i] - expected.top[i])});
    const double scale = w.max_abs();
    r.closure_defect = scale > 0.0 ? err / scale : err;
  }

  r.interp_margin = std::numeric_limits<double>::infinity();
  for (double delta : options.deltas) {
    if (delta < min_localization_delta(d)) continue;
    r.interp_margin = std::min(r.interp_margin, interp_margin(d, r.convective_profile, r.dzt_sq,
                                                              r.energy.dissipation, r.hess_sq, delta,
                                                              options.interp_constant));
  }

  if (options.with_pressure) {
    const ScalarField p = solver ? recover_pressure(state, params, *solver) : recover_pressure(state, params);
    r.enstrophy.pressure_wall = wall_sum(p * gu.u1x) / g;
    r.enstrophy.has_pressure = true;
    r.pressure_h1 = sobolev_norm(p, SobolevKind::H1);
    r.trace_margin = trace_inequality(state, p).margin;
    const auto pb = pressure_bound_check(state, p, params, options.pressure_r);
    r.pressure_bound_ratio = pb.ratio.value_or(std::numeric_limits<double>::quiet_NaN());
  } else {
    r.pressure_bound_ratio = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

void TimeAverager::add(const DiagRecord& r) {
  if (r.time < t_start_) return;
  if (!samples_.empty() && r.time <= samples_.back().time)
    throw InvalidInput("TimeAverager: samples must be added in increasing time order");
  samples_.push_back(r);
}

double TimeAverager::duration() const noexcept {
  return samples_.empty() ? 0.0 : samples_.back().time - samples_.front().time;
}

const DomainPtr& TimeAverager::domain() const {
  if (samples_.empty()) throw InvalidInput("averaging window is empty");
  return samples_.front().domain;
}

double TimeAverager::mean(const std::function<double(const DiagRecord&)>& f) const {
  if (samples_.empty()) throw InvalidInput("averaging window is empty");
  if (samples_.size() == 1) return f(samples_.front());
  double acc = 0.0;
  double prev = f(samples_.front());
  for (std::size_t k = 1; k < samples_.size(); ++k) {
    const double cur = f(samples_[k]);
    acc += 0.5 * (prev + cur) * (samples_[k].time - samples_[k - 1].time);
    prev = cur;
  }
  return acc / duration();
}

std::vector<double> TimeAverager::mean_profile(
    const std::function<const std::vector<double>&(const DiagRecord&)>& f) const {
  if (samples_.empty()) throw InvalidInput("averaging window is empty");
  const std::size_t n = f(samples_.front()).size();
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = mean([&](const DiagRecord& r) { return f(r)[j]; });
  return out;
}

TimeAverager TimeAverager::tail(double fraction) const {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw InvalidInput("tail fraction must lie in (0, 1]");
  if (samples_.empty()) return TimeAverager(t_start_);
  const double start = samples_.back().time - fraction * duration();
  TimeAverager out(start);
  for (const auto& r : samples_)
    if (r.time >= start - 1e-12 * std::max(1.0, std::abs(start))) out.samples_.push_back(r);
  return out;
}

double nusselt_flux(const TimeAverager& avg) {
  return avg.mean([](const DiagRecord& r) { return r.nu_flux; });
}

double nusselt_grad(const TimeAverager& avg) {
  return avg.mean([](const DiagRecord& r) { return r.nu_grad; });
}

LocalizedNusselt nusselt_localized(const TimeAverager& avg, double delta) {
  const Domain& d = *avg.domain();
  if (!(delta <= 1.0) || delta < min_localization_delta(d))
    throw InvalidInput("delta = " + std::to_string(delta) +
                       " is not representable on this grid; the minimum representable delta is " +
                       std::to_string(min_localization_delta(d)));
  const auto n = avg.mean_profile([](const DiagRecord& r) -> const std::vector<double>& { return r.nusselt_profile; });
  const auto c = avg.mean_profile([](const DiagRecord& r) -> const std::vector<double>& { return r.convective_profile; });
  return {integrate_profile_below(d, n, delta) / delta,
          integrate_profile_below(d, c, delta) / delta + 1.0 / delta};
}

EnergyBalance energy_balance(const TimeAverager& avg, const PhysParams& params) {
  EnergyBalance e;
  e.lhs_dissipation = avg.mean([](const DiagRecord& r) { return r.energy.dissipation; });
  e.wall_term = params.inv_ls() * avg.mean([](const DiagRecord& r) { return r.energy.wall_u1sq; });
  e.rhs_buoyancy = avg.mean([](const DiagRecord& r) { return r.energy.buoyancy; });
  const double scale = std::max({std::abs(e.rhs_buoyancy), e.lhs_dissipation + e.wall_term});
  e.residual = scale > 0.0 ? std::abs(e.lhs_dissipation + e.wall_term - e.rhs_buoyancy) / scale : 0.0;
  e.nu_ra = nusselt_flux(avg) * params.ra;
  return e;
}

EnstrophyBalance enstrophy_balance(const TimeAverager& avg, const PhysParams& params) {
  if (avg.empty()) throw InvalidInput("averaging window is empty");
  for (const auto& r : avg.samples())
    if (!r.enstrophy.has_pressure)
      throw InvalidInput("enstrophy balance needs the pressure at every sample (missing at t = " +
                         std::to_string(r.time) + ")");
  EnstrophyBalance b;
  b.grad_omega_sq = avg.mean([](const DiagRecord& r) { return r.enstrophy.grad_omega_sq; });
  b.wall_pressure_term =
      params.inv_ls() * std::abs(avg.mean([](const DiagRecord& r) { return r.enstrophy.pressure_wall; }));
  b.nu_ra32 = nusselt_flux(avg) * std::pow(params.ra, 1.5);
  b.margin = b.wall_pressure_term + b.nu_ra32 - b.grad_omega_sq;
  return b;
}

PressureIdentity pressure_identity(const FlowState& state, const ScalarField& p,
                                   const PhysParams& params) {
  const Derivatives gu(state.velocity);
  const ScalarField px = ddx(p);
  const ScalarField pz = ddz(p);
  PressureIdentity out;
  out.lhs = sq_integral({&px, &pz});
  out.wall_term = params.inv_ls() * wall_sum(p * gu.u1x);
  ScalarField q = gu.u1x * gu.u1x + gu.u2z * gu.u2z;
  q += 2.0 * (gu.u2x * gu.u1z);
  out.nonlinear_term = params.inv_pr() * integrate(p * q);
  out.buoyancy_term = params.ra * integrate(state.temperature * pz);
  const double rhs = out.wall_term + out.nonlinear_term + out.buoyancy_term;
  const double scale = std::max({std::abs(out.lhs), std::abs(out.wall_term) + std::abs(out.nonlinear_term) +
                                                        std::abs(out.buoyancy_term)});
  out.rel_residual = scale > 0.0 ? std::abs(out.lhs - rhs) / scale : 0.0;
  return out;
}

TraceCheck trace_inequality(const FlowState& state, const ScalarField& p) {
  const Derivatives gu(state.velocity);
  TraceCheck c;
  c.lhs = std::abs(wall_sum(p * gu.u1x));
  c.rhs = kTraceConstant * sobolev_norm(p, SobolevKind::H1) * std::sqrt(sq_integral({&gu.u1z, &gu.u2z}));
  c.margin = c.rhs - c.lhs;
  return c;
}

PressureBound pressure_bound_check(const FlowState& state, const ScalarField& p,
                                   const PhysParams& params, double r) {
  if (!(r > 2.0)) throw InvalidInput("pressure bound exponent r must exceed 2");
  const Derivatives gu(state.velocity);
  PressureBound b;
  b.p_h1 = sobolev_norm(p, SobolevKind::H1);
  const double dzu = std::sqrt(sq_integral({&gu.u1z, &gu.u2z}));
  const ScalarField& w = state.vorticity;
  b.bracket = params.inv_ls() * dzu + params.inv_pr() * lp_norm(w, 2.0) * lp_norm(w, r) +
              params.ra * lp_norm(state.temperature, 2.0);
  if (b.bracket > 0.0) b.ratio = b.p_h1 / b.bracket;
  else if (b.p_h1 > 0.0) b.ratio = std::numeric_limits<double>::infinity();
  return b;
}

InterpolationCheck interpolation_check(const TimeAverager& avg, double delta, double constant) {
  const Domain& d = *avg.domain();
  if (!(delta <= 1.0) || delta < min_localization_delta(d))
    throw InvalidInput("delta = " + std::to_string(delta) + " is not representable on this grid");
  const auto c = avg.mean_profile([](const DiagRecord& r) -> const std::vector<double>& { return r.convective_profile; });
  InterpolationCheck out;
  out.lhs = integrate_profile_below(d, c, delta) / delta;
  const double dzt = avg.mean([](const DiagRecord& r) { return r.dzt_sq; });
  const double gu = avg.mean([](const DiagRecord& r) { return r.energy.dissipation; });
  const double hu = avg.mean([](const DiagRecord& r) { return r.hess_sq; });
  out.rhs = 0.5 * dzt + constant * delta * delta * delta * std::sqrt(gu) * std::sqrt(hu);
  out.margin = out.rhs - out.lhs;
  return out;
}

HessianCheck hessian_check(const FlowState& state) {
  const Derivatives gu(state.velocity);
  const ScalarField wc = gu.curl();
  const ScalarField cx = ddx(wc);
  const ScalarField cz = ddz(wc);
  HessianCheck h;
  h.hess_l2 = std::sqrt(hess_sq_integral(gu));
  h.grad_omega_l2 = std::sqrt(sq_integral({&cx, &cz}));
  h.margin = h.grad_omega_l2 - h.hess_l2;
  return h;
}

double grad_identity_check(const FlowState& state) {
  const Derivatives gu(state.velocity);
  const ScalarField wc = gu.curl();
  const double w = std::sqrt(integrate(wc * wc));
  if (w == 0.0) return 0.0;
  return std::abs(std::sqrt(gu.grad_sq()) - w) / w;
}

double hessian_bound_ratio(const TimeAverager& avg, const PhysParams& params, double u0_w14) {
  const double lhs = avg.mean([](const DiagRecord& r) { return r.hess_sq; });
  const double nu = nusselt_flux(avg);
  const double il = params.inv_ls();
  const double ra = params.ra;
  const double rhs = (il * il + std::max(1.0, il * il * il) * (u0_w14 + ra) * params.inv_pr() * il +
                      il * std::sqrt(ra / nu) + std::sqrt(ra)) *
                     nu * ra;
  return lhs / rhs;
}

namespace {

template <class Energy, class Rest>
std::vector<BalanceSample> centred(const std::vector<DiagRecord>& rec, double inv_pr, Energy energy,
                                   Rest rest) {
  std::vector<BalanceSample> out;
  for (std::size_t i = 1; i + 1 < rec.size(); ++i) {
    const double dt = rec[i + 1].time - rec[i - 1].time;
    const double de = 0.5 * inv_pr * (energy(rec[i + 1]) - energy(rec[i - 1])) / dt;
    double scale = std::abs(de);
    const double r = de + rest(rec[i], scale);
    out.push_back({rec[i].time, r, scale});
  }
  return out;
}

}  // namespace

std::vector<BalanceSample> energy_residuals(const std::vector<DiagRecord>& records,
                                            const PhysParams& params) {
  const double il = params.inv_ls();
  return centred(
      records, params.inv_pr(), [](const DiagRecord& r) { return r.energy.kinetic; },
      [il](const DiagRecord& r, double& scale) {
        scale = std::max({scale, r.energy.dissipation, il * r.energy.wall_u1sq, std::abs(r.energy.buoyancy)});
        return r.energy.dissipation + il * r.energy.wall_u1sq - r.energy.buoyancy;
      });
}

std::vector<BalanceSample> enstrophy_residuals(const std::vector<DiagRecord>& records,
                                               const PhysParams& params) {
  const double il = params.inv_ls();
  for (const auto& r : records)
    if (!r.enstrophy.has_pressure)
      throw InvalidInput("enstrophy residuals need the pressure at every sample");
  return centred(
      records, params.inv_pr(),
      [il](const DiagRecord& r) { return r.enstrophy.enstrophy + il * r.energy.wall_u1sq; },
      [il](const DiagRecord& r, double& scale) {
        const double pw = il * r.enstrophy.pressure_wall;
        scale = std::max({scale, r.enstrophy.grad_omega_sq, std::abs(pw), std::abs(r.enstrophy.buoyancy)});
        return r.enstrophy.grad_omega_sq - pw - r.enstrophy.buoyancy;
      });
}

}  // namespace rbslip
