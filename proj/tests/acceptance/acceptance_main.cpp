#include "rbslip/bounds.hpp"
#include "rbslip/diagnostics.hpp"
#include "rbslip/error.hpp"
#include "rbslip/run.hpp"
#include "rbslip/snapshot.hpp"
#include "rbslip/sweep.hpp"
#include "../support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace rbslip;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> check;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

bool full_mode() {
  const char* v = std::getenv("RBSLIP_ACCEPTANCE_FULL");
  return v && std::string(v) == "1";
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

PhysParams params(double ra, double pr, double ls, double gamma = 2.0) {
  PhysParams p;
  p.ra = ra;
  p.pr = pr;
  p.ls = ls;
  p.gamma = gamma;
  return p;
}

double max_diff(const ScalarField& a, const ScalarField& b) { return (a - b).max_abs(); }

// 1. Conduction is a fixed point of the integrator for every wall and Prandtl variant.
Outcome conduction_fixed_point() {
  Stopwatch clock;
  const auto d = Domain::create(2.0, 64, 65);
  const auto c = FlowState::conduction(d);
  double field_err = 0.0, nu_err = 0.0;
  for (double ls : {0.1, 1.0, kInf})
    for (double pr : {1.0, kInf}) {
      const auto p = params(1e5, pr, ls);
      Integrator it(p, c);
      for (int k = 0; k < 1000; ++k) it.step(1e-3);
      const auto& s = it.state();
      field_err = std::max({field_err, max_diff(s.temperature, c.temperature), s.vorticity.max_abs(),
                            s.streamfunction.max_abs()});
      TimeAverager avg;
      avg.add(evaluate(s, p));
      for (double nu : {nusselt_flux(avg), nusselt_grad(avg), nusselt_localized(avg, 0.1).exact})
        nu_err = std::max(nu_err, std::abs(nu - 1.0));
    }
  const double t = clock.seconds();
  return {field_err <= 1e-10 && nu_err <= 1e-6 && t < 10.0,
          "6 variants x 1000 steps at 64x65: max field drift " + fmt("%.2e", field_err) + ", max |Nu - 1| " +
              fmt("%.2e", nu_err) + ", " + fmt("%.1f", t) + " s"};
}

// 2. Spectral convergence of the elliptic solver on a single Fourier-Chebyshev mode.
Outcome elliptic_convergence() {
  const std::vector<int> sizes{9, 11, 13, 15, 17, 21, 25, 33};
  std::vector<double> errs;
  for (int nz : sizes) {
    const auto d = Domain::create(2.0, 16, nz);
    const auto exact = ScalarField::from_function(
        d, [](double x, double z) { return std::sin(pi * x) * std::sin(3.0 * pi * z) * std::exp(z); });
    // Laplacian of sin(pi x) e^z sin(3 pi z).
    const auto rhs = ScalarField::from_function(d, [](double x, double z) {
      const double s = std::sin(3.0 * pi * z), c = std::cos(3.0 * pi * z);
      return std::sin(pi * x) * std::exp(z) * ((1.0 - 9.0 * pi * pi - pi * pi) * s + 6.0 * pi * c);
    });
    errs.push_back(max_diff(solve_elliptic({}, rhs), exact));
  }
  // Local algebraic orders keep growing until round-off.
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    if (errs[i + 1] < 1e-12) break;
    orders.push_back(std::log(errs[i] / errs[i + 1]) / std::log(double(sizes[i + 1]) / sizes[i]));
  }
  bool growing = orders.size() >= 3;
  for (std::size_t i = 0; i + 1 < orders.size(); ++i) growing = growing && orders[i + 1] > orders[i];
  std::string detail = "max error by nz:";
  for (std::size_t i = 0; i < sizes.size(); ++i) detail += " " + std::to_string(sizes[i]) + ":" + fmt("%.1e", errs[i]);
  detail += "; local orders";
  for (double o : orders) detail += " " + fmt("%.1f", o);
  return {growing && errs.back() <= 1e-8, detail};
}

// 3. The exact inequalities on random admissible fields.
Outcome inequality_suite() {
  Stopwatch clock;
  const auto d = Domain::create(2.0, 32, 33);
  std::mt19937_64 rng(20240601);
  int trace_v = 0, interp_v = 0, hess_v = 0, grad_v = 0;
  double trace_min = kInf, interp_min = kInf, hess_min = kInf, grad_max = 0.0;
  const std::vector<double> slips{0.05, 0.3, 1.0, 3.0, kInf};
  const std::vector<double> deltas{0.05, 0.1, 0.2, 0.4};
  for (int k = 0; k < 1000; ++k) {
    const double ls = slips[k % slips.size()];
    const auto f = test_support::random_admissible(d, ls, rng);
    const auto tr = trace_inequality(f.state, f.pressure);
    trace_min = std::min(trace_min, tr.margin / std::max(tr.rhs, 1e-300));
    trace_v += tr.margin < 0.0;
    const auto h = hessian_check(f.state);
    const double rel = h.margin / h.grad_omega_l2;
    hess_min = std::min(hess_min, rel);
    hess_v += rel < -1e-8;
    const double g = grad_identity_check(f.state);
    grad_max = std::max(grad_max, g);
    grad_v += g > 1e-7;
    DiagOptions opt;
    opt.with_pressure = false;
    opt.deltas = deltas;
    TimeAverager avg;
    avg.add(evaluate(f.state, params(1e5, 1.0, ls), opt));
    for (double delta : deltas) {
      const auto ic = interpolation_check(avg, delta, kInterpolationConstantNoRoot2);
      interp_min = std::min(interp_min, ic.margin / std::max(ic.rhs, 1e-300));
      interp_v += ic.margin < 0.0;
    }
  }
  const double t = clock.seconds();
  const int violations = trace_v + interp_v + hess_v + grad_v;
  return {violations == 0 && t < 120.0,
          "1000 fields: violations trace " + std::to_string(trace_v) + ", interpolation(C=2/25) " +
              std::to_string(interp_v) + ", hessian " + std::to_string(hess_v) + ", grad identity " +
              std::to_string(grad_v) + "; min rel margins trace " + fmt("%.2e", trace_min) + ", interp " +
              fmt("%.2e", interp_min) + ", hessian " + fmt("%.2e", hess_min) + "; max grad err " +
              fmt("%.1e", grad_max) + "; " + fmt("%.1f", t) + " s"};
}

// 4. Pressure identity on manufactured states and on simulated snapshots.
Outcome pressure_identity_check() {
  const auto d = Domain::create(2.0, 32, 33);
  std::mt19937_64 rng(77);
  double manufactured = 0.0;
  for (int k = 0; k < 60; ++k) {
    const double ls = std::array{0.1, 1.0, kInf}[k % 3];
    const double pr = k % 2 ? 1.0 : kInf;
    const auto f = test_support::random_admissible(d, ls, rng);
    const auto p = params(1e5, pr, ls);
    manufactured = std::max(manufactured, pressure_identity(f.state, recover_pressure(f.state, p), p).rel_residual);
  }
  const auto big = Domain::create(2.0, 128, 129);
  double dns = 0.0;
  std::string cases;
  for (const auto& p : {params(1e5, 1.0, 1.0), params(1e5, kInf, 0.1)}) {
    RunSchedule s;
    s.t_end = 0.03;
    s.sample_interval = s.t_end;
    s.diag.with_pressure = false;
    InitialCondition ic;
    ic.amplitude = 0.1;
    const auto r = run(ic, big, p, s);
    const double res = pressure_identity(r.final_state, recover_pressure(r.final_state, p), p).rel_residual;
    dns = std::max(dns, res);
    cases += " Pr=" + format_real(p.pr) + ",Ls=" + format_real(p.ls) + ":" + fmt("%.1e", res);
  }
  return {manufactured <= 1e-6 && dns <= 1e-4, "manufactured max residual " + fmt("%.1e", manufactured) +
                                                    " (60 states); 128x129 snapshots at t=0.03, Ra=1e5:" + cases};
}

// 5. Balance residuals are second order in dt.
Outcome dt_refinement() {
  const auto d = Domain::create(2.0, 48, 49);
  const auto p = params(1e4, 1.0, 1.0);
  InitialCondition ic;
  ic.amplitude = 0.1;
  const auto init = make_initial_state(ic, d, p);
  const double t_end = 0.04, w0 = 0.01;
  auto rms = [&](const std::vector<BalanceSample>& v) {
    double s = 0.0, scale = 0.0;
    int n = 0;
    for (const auto& b : v) {
      if (b.time < w0) continue;
      s += b.residual * b.residual;
      scale = std::max(scale, b.scale);
      ++n;
    }
    return std::sqrt(s / n) / scale;
  };
  std::vector<double> e, w;
  for (double dt : {1e-4, 5e-5, 2.5e-5}) {
    RunSchedule s;
    s.t_end = t_end;
    s.dt = dt;
    s.sample_interval = dt;
    const auto r = run(init, p, s);
    e.push_back(rms(energy_residuals(r.records, p)));
    w.push_back(rms(enstrophy_residuals(r.records, p)));
  }
  const double re1 = e[0] / e[1], re2 = e[1] / e[2], rw1 = w[0] / w[1], rw2 = w[1] / w[2];
  auto ok = [](double r) { return r >= 4.0 * 0.7 && r <= 4.0 * 1.3; };
  return {ok(re1) && ok(re2) && ok(rw1) && ok(rw2),
          "Ra=1e4 48x49, dt 1e-4/5e-5/2.5e-5, rms relative residual over t in [0.01,0.04]: energy " +
              fmt("%.2e", e[0]) + " " + fmt("%.2e", e[1]) + " " + fmt("%.2e", e[2]) + " (ratios " +
              fmt("%.2f", re1) + ", " + fmt("%.2f", re2) + "), enstrophy " + fmt("%.2e", w[0]) + " " +
              fmt("%.2e", w[1]) + " " + fmt("%.2e", w[2]) + " (ratios " + fmt("%.2f", rw1) + ", " +
              fmt("%.2f", rw2) + ")"};
}

// 6. Flux, gradient, profile and localized Nusselt routes agree at Ra = 1e5.
Outcome route_consistency() {
  Stopwatch clock;
  const bool full = full_mode();
  const auto p = params(1e5, 1.0, 1.0);
  RunSchedule s;
  s.t_end = full ? 200.0 : 0.4;
  s.sample_interval = full ? 0.1 : 0.005;
  s.spinup_fraction = 0.5;
  const auto r = run(InitialCondition{}, Domain::create(2.0, 128, 129), p, s);
  const auto& avg = r.average;
  const double flux = nusselt_flux(avg), grad = nusselt_grad(avg);
  const auto prof = avg.mean_profile([](const DiagRecord& x) -> const std::vector<double>& { return x.nusselt_profile; });
  double flat = 0.0;
  for (double n : prof) flat = std::max(flat, std::abs(n - prof.front()) / std::abs(prof.front()));
  double local = 0.0;
  std::string locs;
  for (double delta : {0.05, 0.1, 0.2}) {
    const double v = nusselt_localized(avg, delta).exact;
    local = std::max(local, std::abs(v - flux) / flux);
    locs += " " + fmt("%.5f", v);
  }
  const double route = std::abs(flux - grad) / flux;
  const double t = clock.seconds();
  std::string horizon = full ? "literal horizon t_end=200" :
      "REDUCED horizon t_end=0.4 (averaged over [0.2,0.4]; the literal t_end=200 needs ~11.5 h here, "
      "beyond the 30 min budget; set RBSLIP_ACCEPTANCE_FULL=1 to run it)";
  return {route <= 0.03 && flat <= 0.05 && local <= 0.05 && t <= 1800.0,
          horizon + ": nu_flux " + fmt("%.5f", flux) + ", nu_grad " + fmt("%.5f", grad) + " (rel diff " +
              fmt("%.1e", route) + "), profile flatness " + fmt("%.1e", flat) + ", nu_local(0.05,0.1,0.2)" + locs +
              " (max rel diff " + fmt("%.1e", local) + "), " + std::to_string(r.steps) + " steps, " +
              fmt("%.0f", t) + " s"};
}

// 7. Fitted Nu-Ra slope stays below the free-slip exponent plus 0.05.
Outcome scaling_slope() {
  Stopwatch clock;
  const bool full = full_mode();
  struct Case {
    double ra;
    int n;
    double t_end;
  };
  // Horizons cover the transient and a statistically steady window of the second half.
  const std::vector<Case> cases = full ? std::vector<Case>{{1e4, 64, 4.0}, {3e4, 64, 3.0}, {1e5, 128, 2.0},
                                                           {3e5, 128, 1.0}, {1e6, 128, 0.6}}
                                       : std::vector<Case>{{1e4, 64, 1.0}, {3e4, 64, 0.6}, {1e5, 128, 0.3},
                                                           {3e5, 128, 0.16}, {1e6, 128, 0.1}};
  std::vector<double> ra, nu;
  std::string detail = full ? "literal configuration (long horizons):" : "desk horizons (RBSLIP_ACCEPTANCE_FULL=1 runs 4-10x longer):";
  bool ok_rows = true;
  for (const auto& c : cases) {
    SweepPoint pt;
    pt.params = params(c.ra, 1.0, 1.0);
    pt.nx = c.n;
    pt.nz = c.n + 1;
    pt.schedule.t_end = c.t_end;
    pt.schedule.sample_interval = c.t_end / 100.0;
    const auto row = run_point(pt, {});
    ok_rows = ok_rows && row.status != RunStatus::BlowUp && std::isfinite(row.summary.nu_flux);
    ra.push_back(c.ra);
    nu.push_back(row.summary.nu_flux);
    detail += " Ra=" + format_real(c.ra) + "(" + std::to_string(c.n) + "x" + std::to_string(c.n + 1) +
              ",t=" + format_real(c.t_end) + "):Nu=" + fmt("%.3f", row.summary.nu_flux) + "[" +
              std::string(to_string(row.status)) + "]";
  }
  if (!ok_rows) return {false, detail + "; a run failed"};
  const auto fit = fit_power_law(ra, nu);
  const double t = clock.seconds();
  return {fit.slope <= 5.0 / 12.0 + 0.05 && t <= 4 * 3600.0,
          detail + "; slope " + fmt("%.4f", fit.slope) + " +- " + fmt("%.4f", fit.stderr_slope) + " (limit " +
              fmt("%.4f", 5.0 / 12.0 + 0.05) + "), " + fmt("%.0f", t) + " s"};
}

// 8. Closed-form layer thickness against brute-force minimization.
Outcome delta_oracle() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int bad = 0;
  for (int k = 0; k < 1000; ++k) {
    const double ls = k % 10 == 0 ? kInf : std::pow(10.0, -3.0 + 6.0 * u(rng));
    const double pr = k % 7 == 0 ? kInf : std::pow(10.0, -3.0 + 8.0 * u(rng));
    const auto p = params(std::pow(10.0, 2.0 + 10.0 * u(rng)), pr, ls);
    const double nu = std::pow(10.0, 4.0 * u(rng));
    const double a = delta_optimal(p, nu), b = delta_bruteforce(p, nu);
    const double err = std::abs(std::log(a) - std::log(b)) / std::max(std::abs(std::log(a)), 1e-12);
    if (a == 1.0 && b == 1.0) continue;
    worst = std::max(worst, err);
    bad += err > 0.01;
  }
  return {bad == 0, "1000 tuples: max relative log-delta gap " + fmt("%.2e", worst) + ", over 1%: " + std::to_string(bad)};
}

// 9. Overview-table cells agree with the dominant term of the bound.
Outcome table_classification() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int compared = 0, agree = 0, boundary = 0, boundary_disagree = 0;
  std::string first_boundary;
  for (int k = 0; k < 10000; ++k) {
    const double lr = 2.0 + 10.0 * u(rng);
    const double ra = std::pow(10.0, lr);
    const double pr = k % 20 == 0 ? kInf : std::pow(10.0, -lr + 3.5 * lr * u(rng));
    const double ls = k % 25 == 0 ? kInf : std::pow(10.0, -lr + 1.5 * lr * u(rng));
    const auto p = params(ra, pr, ls);
    const auto cell = region_classify(p);
    const auto dom = bound_value(p).dominant;
    if (cell.boundary_distance <= 0.01) {
      ++boundary;
      if (cell.term != dom) {
        ++boundary_disagree;
        if (first_boundary.empty())
          first_boundary = " (e.g. Ra=" + fmt("%.3g", ra) + " Pr=" + fmt("%.3g", pr) + " Ls=" + fmt("%.3g", ls) +
                           ": cell " + std::string(to_string(cell.term)) + ", sum " + std::string(to_string(dom)) + ")";
      }
      continue;
    }
    ++compared;
    agree += cell.term == dom;
  }
  return {compared > 0 && agree == compared,
          std::to_string(agree) + "/" + std::to_string(compared) + " interior samples agree; " +
              std::to_string(boundary) + " within 1% of a band edge, " + std::to_string(boundary_disagree) +
              " of them disagree (logged only)" + first_boundary};
}

// 10. Snapshot round trip and sweep resume.
Outcome persistence() {
  const auto d = Domain::create(2.0, 32, 33);
  const auto p = params(2e4, 1.0, 0.5);
  Integrator it(p, make_initial_state({.amplitude = 0.2}, d, p));
  for (int k = 0; k < 200; ++k) it.step(1e-4);
  const fs::path dir = fs::temp_directory_path() / "rbslip_acceptance_persistence";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_snapshot(dir / "s.rbns", it.state(), p);
  const auto back = read_snapshot(dir / "s.rbns");
  bool bitwise = back.state.time == it.state().time && back.params.ls == p.ls;
  for (auto [a, b] : {std::pair{&back.state.temperature, &it.state().temperature},
                      std::pair{&back.state.vorticity, &it.state().vorticity},
                      std::pair{&back.state.streamfunction, &it.state().streamfunction}})
    bitwise = bitwise && std::memcmp(a->values().data(), b->values().data(), a->values().size_bytes()) == 0;
  bitwise = bitwise && encode_snapshot(back.state, back.params) == encode_snapshot(it.state(), p);

  std::istringstream cfg_text(
      "output = o\nnx = 16\nnz = 17\nt_end = 0.05\ndt = 1e-3\nsample_interval = 0.01\n"
      "ra_list = 100, 1e3, 3e3, 1e4\nls_list = 1, inf\n");
  auto cfg = parse_sweep_config(cfg_text);
  auto slurp = [](const fs::path& f) {
    std::ifstream in(f, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };
  cfg.output_dir = dir / "full";
  const std::string reference = slurp(run_matrix(cfg, {.threads = 2}).csv);
  cfg.output_dir = dir / "resumed";
  run_matrix(cfg, {.threads = 1, .max_new_points = 3});
  { std::ofstream(dir / "resumed" / "results.csv", std::ios::app) << "ra1e+04_pr1_ls1_g2_16x17_s0_t0.05,1e4,1,"; }
  const auto resumed = run_matrix(cfg, {.threads = 2});
  const bool same = slurp(resumed.csv) == reference;
  cfg.output_dir = dir / "full";
  const auto again = run_matrix(cfg, {.threads = 2});
  const bool idem = again.completed == 0 && slurp(again.csv) == reference;
  fs::remove_all(dir);
  return {bitwise && same && idem, std::string("snapshot round trip ") + (bitwise ? "bitwise exact" : "MISMATCH") +
                                       "; interrupted+resumed sweep (8 points) " + (same ? "byte-identical" : "DIFFERS") +
                                       "; rerun of completed sweep " + (idem ? "byte-identical, 0 new runs" : "CHANGED")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "conduction fixed point", conduction_fixed_point},
      {2, "elliptic spectral convergence", elliptic_convergence},
      {3, "exact inequalities on random fields", inequality_suite},
      {4, "pressure identity", pressure_identity_check},
      {5, "dt refinement of balance residuals", dt_refinement},
      {6, "Nusselt route consistency at Ra=1e5", route_consistency},
      {7, "one-sided Nu-Ra scaling", scaling_slope},
      {8, "delta optimizer vs brute force", delta_oracle},
      {9, "table classification", table_classification},
      {10, "persistence", persistence},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: rbslip_acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (selected.empty())
    for (const auto& c : all) selected.push_back(c.id);

  bool all_pass = true;
  for (int id : selected) {
    const auto it = std::find_if(all.begin(), all.end(), [&](const Criterion& c) { return c.id == id; });
    if (it == all.end()) {
      std::cerr << "unknown criterion " << id << "\n";
      return 2;
    }
    Outcome o;
    try {
      o = it->check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << it->name << "): " << o.detail
              << std::endl;
  }
  return all_pass ? 0 : 1;
}
