#include "rbslip/error.hpp"
#include "rbslip/solver.hpp"
#include "spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rbslip {

namespace {
constexpr double kBlowUpMagnitude = 1e30;
}  // namespace

using detail::Spectral;
using cplx = std::complex<double>;

namespace {

// Dirichlet problems (d^2/dz^2 - c_m) g = f on the interior nodes, solved by
// diagonalising the interior block of the second-derivative matrix once.
class DirichletDiag {
 public:
  explicit DirichletDiag(const Domain& d) {
    const int n = d.nz() - 1;
    ni_ = n - 1;
    const Eigen::MatrixXd& d2 = d.d2z_matrix();
    const Eigen::MatrixXd inner = d2.block(1, 1, ni_, ni_);
    Eigen::EigenSolver<Eigen::MatrixXd> es(inner);
    if (es.info() != Eigen::Success) throw Error("eigendecomposition of the z-Laplacian failed");
    lam_ = es.eigenvalues().real();
    v_ = es.eigenvectors().real();
    vinv_ = v_.inverse();
    edge0_ = d2.block(1, 0, ni_, 1);
    edgen_ = d2.block(1, n, ni_, 1);
  }

  int interior() const noexcept { return ni_; }

  // f_interior: ni x nk; bottom/top: one value per mode.
  Spectral solve(const Spectral& f_interior, const Eigen::VectorXcd& bottom,
                 const Eigen::VectorXcd& top, const Eigen::VectorXd& c) const {
    const Eigen::Index nk = f_interior.cols();
    Spectral g = f_interior;
    g.noalias() -= edge0_.cast<cplx>() * bottom.transpose();
    g.noalias() -= edgen_.cast<cplx>() * top.transpose();
    Spectral h = detail::apply_real(vinv_, g);
    for (Eigen::Index m = 0; m < nk; ++m)
      h.col(m).array() /= (lam_.array() - c(m)).cast<cplx>();
    Spectral out(ni_ + 2, nk);
    out.row(0) = bottom.transpose();
    out.row(ni_ + 1) = top.transpose();
    out.middleRows(1, ni_) = detail::apply_real(v_, h);
    return out;
  }

  Spectral solve_homogeneous_walls(const Spectral& f_interior, const Eigen::VectorXd& c) const {
    const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(f_interior.cols());
    return solve(f_interior, zero, zero, c);
  }

 private:
  int ni_;
  Eigen::VectorXd lam_;
  Eigen::MatrixXd v_;
  Eigen::MatrixXd vinv_;
  Eigen::VectorXd edge0_;
  Eigen::VectorXd edgen_;
};

}  // namespace

struct Integrator::Impl {
  PhysParams params;
  DomainPtr domain;
  int nz;
  int n;
  int nk;  // retained modes 0..cutoff
  DirichletDiag diag;
  Eigen::VectorXd k;
  Eigen::VectorXd k2;
  Eigen::RowVectorXd drow0;
  Eigen::RowVectorXd drown;

  Spectral t_hat, w_hat, psi_hat;
  double mean_flow = 0.0;
  double time = 0.0;
  std::int64_t steps = 0;

  bool have_prev = false;
  Spectral adv_t_cur, adv_w_cur;
  double limit_cur = 0.0;  // advective limit at cfl = 1 for the current state
  Spectral adv_t_prev, adv_w_prev;
  double dt_prev = 0.0;

  // Homogeneous responses used by the wall closure; depend on dt only.
  struct Influence {
    double dt = -1.0;
    Eigen::VectorXd c_t, c_w;
    Eigen::MatrixXd wa, wb, pa, pb;  // nz x nk, real
    std::vector<Eigen::MatrixXd> closure_inv;
    Eigen::VectorXd a0, an, b0, bn;
  } infl;

  mutable std::optional<FlowState> cache;
  WarningSink warn;
  std::int64_t cfl_warnings = 0;

  Impl(const PhysParams& p, const FlowState& s)
      : params(p),
        domain(s.domain()),
        nz(domain->nz()),
        n(domain->nz() - 1),
        nk(domain->dealias_cutoff() + 1),
        diag(*domain) {
    k.resize(nk);
    for (int m = 0; m < nk; ++m) k(m) = domain->wavenumber(m);
    k2 = k.array().square();
    drow0 = domain->dz_matrix().row(0);
    drown = domain->dz_matrix().row(n);
    t_hat = truncate(detail::to_spectral(s.temperature));
    w_hat = truncate(detail::to_spectral(s.vorticity));
    mean_flow = s.mean_flow();
    time = s.time;
    // Streamfunction from the vorticity so that both are discretely consistent.
    Eigen::VectorXcd top = Eigen::VectorXcd::Zero(nk);
    top(0) = -mean_flow;
    psi_hat = diag.solve(w_hat.middleRows(1, n - 1), Eigen::VectorXcd::Zero(nk), top, k2);
    nonlinear(adv_t_cur, adv_w_cur, limit_cur);
  }

  Spectral truncate(const Spectral& full) const { return full.leftCols(nk); }

  ScalarField physical(const Spectral& s) const {
    Spectral full = Spectral::Zero(nz, domain->modes());
    full.leftCols(nk) = s;
    return detail::to_physical(domain, full);
  }

  Spectral spectral(const ScalarField& f) const { return truncate(detail::to_spectral(f)); }

  Spectral ddx_hat(const Spectral& s) const {
    Spectral out = s;
    for (int m = 0; m < nk; ++m) out.col(m) *= cplx(0.0, k(m));
    return out;
  }

  Spectral lap_hat(const Spectral& s) const {
    Spectral out = detail::apply_real(domain->d2z_matrix(), s);
    for (int m = 0; m < nk; ++m) out.col(m) -= k2(m) * s.col(m);
    return out;
  }

  void build_influence(double dt) {
    if (infl.dt == dt) return;
    const double inv_ls = params.inv_ls();
    const double s = params.infinite_pr() ? 0.0 : 2.0 / (dt * params.pr);
    infl.dt = dt;
    infl.c_t = k2.array() + 2.0 / dt;
    infl.c_w = k2.array() + s;
    const Spectral zero_int = Spectral::Zero(n - 1, nk);
    const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(nk);
    const Eigen::VectorXcd zeros = Eigen::VectorXcd::Zero(nk);
    const Spectral wa = diag.solve(zero_int, ones, zeros, infl.c_w);
    const Spectral wb = diag.solve(zero_int, zeros, ones, infl.c_w);
    const Spectral pa = diag.solve_homogeneous_walls(wa.middleRows(1, n - 1), k2);
    const Spectral pb = diag.solve_homogeneous_walls(wb.middleRows(1, n - 1), k2);
    infl.wa = wa.real();
    infl.wb = wb.real();
    infl.pa = pa.real();
    infl.pb = pb.real();
    infl.a0 = (drow0 * infl.pa).transpose();
    infl.an = (drown * infl.pa).transpose();
    infl.b0 = (drow0 * infl.pb).transpose();
    infl.bn = (drown * infl.pb).transpose();
    infl.closure_inv.assign(nk, Eigen::MatrixXd());
    const bool with_mean = inv_ls > 0.0;
    const double cu = params.infinite_pr() ? 0.0 : 0.5 * dt * params.pr * inv_ls;
    for (int m = 0; m < nk; ++m) {
      const double a0 = infl.a0(m), an = infl.an(m), b0 = infl.b0(m), bn = infl.bn(m);
      Eigen::Matrix3d mat = Eigen::Matrix3d::Zero();
      // Unknowns (gamma0, gamma1, mu); the streamfunction response to mu is -z.
      mat(0, 0) = 1.0 - inv_ls * a0;
      mat(0, 1) = -inv_ls * b0;
      mat(0, 2) = inv_ls;
      mat(1, 0) = inv_ls * an;
      mat(1, 1) = 1.0 + inv_ls * bn;
      mat(1, 2) = -inv_ls;
      if (m == 0 && with_mean) {
        if (params.infinite_pr()) {
          mat(2, 0) = -(a0 + an);
          mat(2, 1) = -(b0 + bn);
          mat(2, 2) = 2.0;
        } else {
          mat(2, 0) = -cu * (a0 + an);
          mat(2, 1) = -cu * (b0 + bn);
          mat(2, 2) = 1.0 + 2.0 * cu;
        }
      } else {
        mat(0, 2) = mat(1, 2) = 0.0;
        mat(2, 2) = 1.0;
      }
      infl.closure_inv[m] = mat.inverse();
    }
  }

  void nonlinear(Spectral& adv_t, Spectral& adv_w, double& limit1) {
    const Domain& d = *domain;
    const ScalarField u1 = [&] {
      ScalarField f = physical(detail::apply_real(d.dz_matrix(), psi_hat));
      f *= -1.0;
      return f;
    }();
    const ScalarField u2 = physical(ddx_hat(psi_hat));
    const ScalarField tx = physical(ddx_hat(t_hat));
    const ScalarField tz = physical(detail::apply_real(d.dz_matrix(), t_hat));
    const ScalarField wx = physical(ddx_hat(w_hat));
    const ScalarField wz = physical(detail::apply_real(d.dz_matrix(), w_hat));
    ScalarField at(domain), aw(domain);
    auto pu1 = u1.values(), pu2 = u2.values();
    auto ptx = tx.values(), ptz = tz.values(), pwx = wx.values(), pwz = wz.values();
    auto pat = at.values(), paw = aw.values();
    for (std::size_t q = 0; q < pat.size(); ++q) {
      pat[q] = pu1[q] * ptx[q] + pu2[q] * ptz[q];
      paw[q] = pu1[q] * pwx[q] + pu2[q] * pwz[q];
    }
    adv_t = spectral(at);
    adv_w = spectral(aw);
    limit1 = advective_limit(u1, u2, 1.0);
  }

  double advective_limit(const ScalarField& u1, const ScalarField& u2, double cfl) const {
    const Domain& d = *domain;
    double lim = std::numeric_limits<double>::infinity();
    const double u1max = u1.max_abs();
    if (u1max > 0.0) lim = std::min(lim, d.dx() / u1max);
    const auto h = d.local_spacing();
    for (int j = 0; j < nz; ++j) {
      double m = 0.0;
      for (int i = 0; i < d.nx(); ++i) m = std::max(m, std::abs(u2(i, j)));
      if (m > 0.0) lim = std::min(lim, h[j] / m);
    }
    return cfl * lim;
  }

  void step(double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("time step must be positive and finite");
    build_influence(dt);
    Spectral adv_t = std::move(adv_t_cur), adv_w = std::move(adv_w_cur);
    const double limit1 = limit_cur;
    if (dt > limit1) {
      ++cfl_warnings;
      if (warn) {
        std::ostringstream msg;
        msg << "CFL violation at t = " << time << ": dt = " << dt << " exceeds advective limit "
            << limit1;
        warn(msg.str());
      }
    }
    Spectral at_star = adv_t, aw_star = adv_w;
    if (have_prev) {
      const double r = dt / dt_prev;
      at_star = (1.0 + 0.5 * r) * adv_t - (0.5 * r) * adv_t_prev;
      aw_star = (1.0 + 0.5 * r) * adv_w - (0.5 * r) * adv_w_prev;
    }

    // Temperature increment to the midpoint level.
    Eigen::VectorXcd tb = -t_hat.row(0).transpose();
    tb(0) += 1.0;
    const Eigen::VectorXcd tt = -t_hat.row(n).transpose();
    const Spectral ft = (at_star - lap_hat(t_hat)).middleRows(1, n - 1);
    const Spectral dT = diag.solve(ft, tb, tt, infl.c_t);
    const bool inf_pr = params.infinite_pr();
    // Buoyancy source: midpoint level, or the new level for pr = inf.
    const Spectral t_src = inf_pr ? Spectral(t_hat + 2.0 * dT) : Spectral(t_hat + dT);

    Spectral fw = -lap_hat(w_hat);
    if (!inf_pr) fw += (1.0 / params.pr) * aw_star;
    fw -= params.ra * ddx_hat(t_src);
    const Spectral dw_p = diag.solve_homogeneous_walls(fw.middleRows(1, n - 1), infl.c_w);
    const Spectral dpsi_p = diag.solve_homogeneous_walls(dw_p.middleRows(1, n - 1), k2);

    const double inv_ls = params.inv_ls();
    const Eigen::RowVectorXcd p0 = drow0.cast<cplx>() * (psi_hat + dpsi_p);
    const Eigen::RowVectorXcd pn = drown.cast<cplx>() * (psi_hat + dpsi_p);
    const double cu = inf_pr ? 0.0 : 0.5 * dt * params.pr * inv_ls;
    Spectral dw = dw_p, dpsi = dpsi_p;
    cplx mu = 0.0;
    for (int m = 0; m < nk; ++m) {
      Eigen::Vector3cd rhs;
      rhs(0) = inv_ls * p0(m) - w_hat(0, m);
      rhs(1) = -inv_ls * pn(m) - w_hat(n, m);
      rhs(2) = 0.0;
      if (m == 0 && inv_ls > 0.0) rhs(2) = inf_pr ? p0(0) + pn(0) : cu * (p0(0) + pn(0));
      const Eigen::Vector3cd sol = infl.closure_inv[m].cast<cplx>() * rhs;
      dw.col(m) += sol(0) * infl.wa.col(m).cast<cplx>() + sol(1) * infl.wb.col(m).cast<cplx>();
      dpsi.col(m) += sol(0) * infl.pa.col(m).cast<cplx>() + sol(1) * infl.pb.col(m).cast<cplx>();
      if (m == 0) mu = sol(2);
    }
    if (inv_ls > 0.0) {
      for (int j = 0; j <= n; ++j) dpsi(j, 0) -= mu * domain->z(j);
    }

    const double f = inf_pr ? 1.0 : 2.0;
    t_hat += 2.0 * dT;
    w_hat += f * dw;
    psi_hat += f * dpsi;
    mean_flow += f * mu.real();
    for (Spectral* s : {&t_hat, &w_hat, &psi_hat}) s->col(0).imag().setZero();

    adv_t_prev = std::move(adv_t);
    adv_w_prev = std::move(adv_w);
    dt_prev = dt;
    have_prev = true;
    time += dt;
    ++steps;
    cache.reset();
    // Finite but huge fields overflow in products (diagnostics, advection), so
    // magnitudes far beyond any physical state count as blow-up too.
    auto runaway = [](const Spectral& s) { return !s.allFinite() || s.cwiseAbs().maxCoeff() > kBlowUpMagnitude; };
    if (runaway(t_hat) || runaway(w_hat) || runaway(psi_hat) || !(std::abs(mean_flow) <= kBlowUpMagnitude))
      throw BlowUp(steps, time);
    nonlinear(adv_t_cur, adv_w_cur, limit_cur);
  }

  const FlowState& state() const {
    if (!cache) {
      ScalarField psi = physical(psi_hat);
      cache = FlowState::from_fields(physical(t_hat), physical(w_hat), std::move(psi), time);
    }
    return *cache;
  }
};

Integrator::Integrator(const PhysParams& params, const FlowState& initial) {
  params.validate();
  if (std::abs(params.gamma - initial.domain()->gamma()) > 1e-12 * params.gamma)
    throw InvalidInput("params.gamma does not match the domain aspect ratio");
  impl_ = std::make_unique<Impl>(params, initial);
}

Integrator::~Integrator() = default;
Integrator::Integrator(Integrator&&) noexcept = default;
Integrator& Integrator::operator=(Integrator&&) noexcept = default;

void Integrator::step(double dt) { impl_->step(dt); }
const FlowState& Integrator::state() const { return impl_->state(); }
const PhysParams& Integrator::params() const noexcept { return impl_->params; }
const DomainPtr& Integrator::domain() const noexcept { return impl_->domain; }
double Integrator::time() const noexcept { return impl_->time; }
std::int64_t Integrator::steps() const noexcept { return impl_->steps; }

double Integrator::advective_limit(double cfl) const { return cfl * impl_->limit_cur; }

void Integrator::set_warning_sink(WarningSink sink) { impl_->warn = std::move(sink); }
std::int64_t Integrator::cfl_warnings() const noexcept { return impl_->cfl_warnings; }

FlowState step(const FlowState& state, const PhysParams& params, double dt) {
  Integrator it(params, state);
  it.step(dt);
  return it.state();
}

}  // namespace rbslip
