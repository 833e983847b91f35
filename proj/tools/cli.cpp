#include "cli.hpp"

#include "CLI11.hpp"
#include "rbslip/bounds.hpp"
#include "rbslip/diagnostics.hpp"
#include "rbslip/error.hpp"
#include "rbslip/run.hpp"
#include "rbslip/snapshot.hpp"
#include "rbslip/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>

namespace rbslip::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numbers are taken as text so that "inf" is accepted and a malformed value
/// names its flag.
class RealFlags {
 public:
  void add(CLI::App* app, const std::string& flag, double* target, const std::string& help) {
    auto& e = entries_.emplace_back(Entry{flag, target, format_real(*target)});
    app->add_option(flag, e.text, help)->capture_default_str()->type_name("NUM");
  }
  void resolve() {
    for (auto& e : entries_) {
      if (e.text == "nan") {
        *e.target = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      try {
        *e.target = parse_real(e.text, e.flag);
      } catch (const InvalidInput&) {
        throw UsageError(e.flag + ": invalid number '" + e.text + "'");
      }
    }
  }

 private:
  struct Entry {
    std::string flag;
    double* target;
    std::string text;
  };
  std::deque<Entry> entries_;
};

std::string fixed(double v, int prec = 6) {
  if (!std::isfinite(v)) return format_real(v);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  f << text;
  if (!f) throw Error("cannot write " + path.string());
}

// run

struct RunArgs {
  PhysParams params;
  double nx = 64, nz = 65;
  double seed = 0;
  double amplitude = 0.01;
  RunSchedule schedule;
  std::string out = "rbslip_out";
};

int do_run(RunArgs& a, std::ostream& out) {
  const auto int_arg = [](double v, const char* flag) {
    if (v != std::floor(v) || v < 0 || v > 1e6) throw UsageError(std::string(flag) + ": expected an integer");
    return static_cast<int>(v);
  };
  SweepPoint pt;
  pt.params = a.params;
  pt.nx = int_arg(a.nx, "--nx");
  pt.nz = int_arg(a.nz, "--nz");
  pt.seed = static_cast<std::uint64_t>(int_arg(a.seed, "--seed"));
  pt.amplitude = a.amplitude;
  pt.schedule = a.schedule;
  a.params.validate();
  if (!(a.schedule.t_end >= 0.0) || !std::isfinite(a.schedule.t_end))
    throw InvalidInput("t_end must be finite and >= 0");

  const std::filesystem::path dir(a.out);
  std::filesystem::create_directories(dir);
  const DomainPtr domain = Domain::create(a.params.gamma, pt.nx, pt.nz);
  InitialCondition ic;
  ic.seed = pt.seed;
  ic.amplitude = pt.amplitude;

  std::ofstream series(dir / "diagnostics.csv", std::ios::trunc);
  if (!series) throw Error("cannot write " + (dir / "diagnostics.csv").string());
  series << diag_header() << '\n';
  const RunResult result = run(ic, domain, a.params, a.schedule, [&](const FlowState&, const DiagRecord& r) {
    series << format_diag_row(r) << '\n';
  });
  series.flush();
  write_snapshot(dir / "final.rbns", result.final_state, a.params);

  ResultRow row;
  row.run_id = pt.run_id();
  row.params = a.params;
  row.nx = pt.nx;
  row.nz = pt.nz;
  row.dt = a.schedule.dt > 0.0 ? a.schedule.dt : result.last_dt;
  row.t_end = a.schedule.t_end;
  row.t_avg_start = a.schedule.spinup_fraction * a.schedule.t_end;
  row.summary = summarize(result, a.params);
  row.bound = bound_value(a.params);
  row.status = row.summary.converged ? RunStatus::Ok : RunStatus::NonConverged;
  write_text(dir / "summary.csv", results_header() + "\n" + format_row(row) + "\n");

  out << "run " << row.run_id << ": " << result.steps << " steps, " << result.records.size() << " samples\n"
      << "  nu_flux = " << fixed(row.summary.nu_flux) << ", nu_grad = " << fixed(row.summary.nu_grad)
      << ", status = " << to_string(row.status) << "\n"
      << "  wrote " << (dir / "diagnostics.csv").string() << ", " << (dir / "summary.csv").string() << ", "
      << (dir / "final.rbns").string() << "\n";
  return kOk;
}

// sweep

int do_sweep(const std::string& config, const std::string& out_override, int threads, std::ostream& out) {
  SweepConfig cfg = load_sweep_config(config);
  if (!out_override.empty()) cfg.output_dir = out_override;
  SweepOptions opt;
  opt.threads = threads;
  opt.log = &out;
  const SweepOutcome r = run_matrix(cfg, opt);
  out << "sweep: " << r.completed << " run, " << r.skipped << " already present, results in " << r.csv.string()
      << "\n";
  return kOk;
}

// audit

struct AuditLine {
  std::string check;
  double value;
  double margin;  // NaN for informational rows
  bool asserted;
};

int do_audit(const std::string& path, std::vector<double> deltas, double interp_constant, std::ostream& out) {
  const Snapshot snap = read_snapshot(path);
  const FlowState& s = snap.state;
  const PhysParams& p = snap.params;
  const Domain& d = *s.domain();
  if (deltas.empty()) deltas = {0.05, 0.1, 0.2};
  const double nan = std::numeric_limits<double>::quiet_NaN();

  DiagOptions opt;
  opt.deltas = deltas;
  opt.interp_constant = interp_constant;
  const DiagRecord r = evaluate(s, p, opt);
  TimeAverager avg;
  avg.add(r);
  const ScalarField pres = recover_pressure(s, p);

  std::vector<AuditLine> lines;
  lines.push_back({"nu_flux", r.nu_flux, nan, false});
  lines.push_back({"nu_grad", r.nu_grad, nan, false});
  lines.push_back({"nu_profile_flat", r.nu_profile_flat, nan, false});
  for (double delta : deltas) {
    if (delta < min_localization_delta(d)) {
      out << "note: delta " << delta << " is below the smallest resolvable delta " << fixed(min_localization_delta(d))
          << "\n";
      continue;
    }
    const auto loc = nusselt_localized(avg, delta);
    lines.push_back({"nu_local(" + fixed(delta, 3) + ")", loc.exact, nan, false});
    lines.push_back({"nu_local_bound(" + fixed(delta, 3) + ")", loc.bound, loc.bound - loc.exact, false});
    const auto ic = interpolation_check(avg, delta, interp_constant);
    lines.push_back({"interpolation(" + fixed(delta, 3) + ")", ic.lhs, ic.margin, true});
  }
  const auto pid = pressure_identity(s, pres, p);
  lines.push_back({"pressure_identity_rel_residual", pid.rel_residual, 1e-4 - pid.rel_residual, true});
  const auto tr = trace_inequality(s, pres);
  lines.push_back({"trace_inequality", tr.lhs, tr.margin, true});
  const auto pb = pressure_bound_check(s, pres, p);
  lines.push_back({"pressure_bound_ratio", pb.ratio.value_or(nan), nan, false});
  const auto hc = hessian_check(s);
  const double hrel = hc.grad_omega_l2 > 0.0 ? hc.margin / hc.grad_omega_l2 : hc.margin;
  lines.push_back({"hessian_margin_rel", hrel, hrel + 1e-8, true});
  const double gi = grad_identity_check(s);
  lines.push_back({"grad_identity_rel_err", gi, 1e-6 - gi, true});
  lines.push_back({"t_min", r.t_min, r.t_min + 1e-8, true});
  lines.push_back({"t_max", r.t_max, 1.0 + 1e-8 - r.t_max, true});
  lines.push_back({"energy_dissipation", r.energy.dissipation, nan, false});
  lines.push_back({"energy_buoyancy", r.energy.buoyancy, nan, false});
  lines.push_back({"grad_omega_sq", r.enstrophy.grad_omega_sq, nan, false});
  lines.push_back({"omega_l4", r.omega_l4, nan, false});
  lines.push_back({"u2_mean_max", r.u2_mean_max, nan, false});
  lines.push_back({"divergence_rel", r.divergence_rel, nan, false});
  lines.push_back({"wall_closure_defect", r.closure_defect, nan, false});

  out << "snapshot " << path << ": Ra=" << format_real(p.ra) << " Pr=" << format_real(p.pr)
      << " Ls=" << format_real(p.ls) << " gamma=" << format_real(p.gamma) << " " << d.nx() << "x" << d.nz()
      << " t=" << format_real(s.time) << "\n";
  out << std::left << std::setw(34) << "check" << std::setw(16) << "value" << std::setw(16) << "margin"
      << "status\n";
  int violations = 0;
  for (const auto& l : lines) {
    std::string status = "info";
    if (l.asserted) {
      status = l.margin >= 0.0 ? "ok" : "VIOLATED";
      if (l.margin < 0.0) ++violations;
    }
    out << std::left << std::setw(34) << l.check << std::setw(16) << fixed(l.value) << std::setw(16)
        << (std::isnan(l.margin) ? std::string("-") : fixed(l.margin)) << status << "\n";
  }
  out << (violations ? std::to_string(violations) + " violated check(s)\n" : std::string("all checks hold\n"));
  return kOk;
}

// bound

int do_bound(const PhysParams& p, double nu, bool csv, std::ostream& out) {
  const BoundReport b = bound_value(p);
  const double nu_h = std::isnan(nu) ? std::max(1.0, b.value) : nu;
  const DeltaOptimum dopt = delta_optimal_detail(p, nu_h);
  if (csv) {
    out << "ra,pr,ls,region,dominant,value,ra_exp,pr_exp,ls_exp,nu_hypothesis,delta_star,delta_scaling\n"
        << format_real(p.ra) << ',' << format_real(p.pr) << ',' << format_real(p.ls) << ',' << to_string(b.region)
        << ',' << to_string(b.dominant) << ',' << format_real(b.value) << ',' << format_real(b.exponents.ra) << ','
        << format_real(b.exponents.pr) << ',' << format_real(b.exponents.ls) << ',' << format_real(nu_h) << ','
        << format_real(dopt.delta) << ',' << format_real(dopt.scaling) << "\n";
    return kOk;
  }
  out << "Ra = " << format_real(p.ra) << ", Pr = " << format_real(p.pr) << ", Ls = " << format_real(p.ls) << "\n"
      << "region:      " << to_string(b.region) << "\n"
      << "dominant:    " << to_string(b.dominant) << " (Ra^" << fixed(b.exponents.ra, 4) << " Pr^"
      << fixed(b.exponents.pr, 4) << " Ls^" << fixed(b.exponents.ls, 4) << ")\n"
      << "value:       " << fixed(b.value, 8) << " (log10 " << fixed(std::log10(b.value), 6) << ")\n"
      << "table cell:  " << b.table_row << "\n"
      << "delta_star:  " << fixed(dopt.delta, 8) << " at Nu = " << fixed(nu_h, 8) << " (scaling law "
      << fixed(dopt.scaling, 8) << ")\n"
      << "caveat:      " << b.caveat << "\n";
  return kOk;
}

// fit

int do_fit(const std::string& csv, const std::vector<std::string>& group, const std::string& y, std::ostream& out) {
  const CsvTable t = read_csv(std::filesystem::path(csv));
  if (t.header.empty()) throw FormatError("empty CSV " + csv);
  const auto groups = fit_scaling(t, group, y);
  out << "group,slope,intercept,stderr,points_used,bound_ratio_spread\n";
  for (const auto& g : groups)
    out << g.key << ',' << format_real(g.fit.slope) << ',' << format_real(g.fit.intercept) << ','
        << format_real(g.fit.stderr_slope) << ',' << g.fit.points_used << ',' << format_real(g.fit.bound_ratio_spread)
        << "\n";
  return kOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rayleigh-Benard convection with Navier-slip walls: simulation, diagnostics and bounds", "rbslip"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  RealFlags reals;
  std::function<int()> action;

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Run one simulation; writes diagnostics.csv, summary.csv and final.rbns");
  reals.add(run_cmd, "--ra", &ra.params.ra, "Rayleigh number");
  reals.add(run_cmd, "--pr", &ra.params.pr, "Prandtl number (inf allowed)");
  reals.add(run_cmd, "--ls", &ra.params.ls, "slip length (inf for free slip)");
  reals.add(run_cmd, "--gamma", &ra.params.gamma, "aspect ratio");
  reals.add(run_cmd, "--nx", &ra.nx, "horizontal points (even, >= 8)");
  reals.add(run_cmd, "--nz", &ra.nz, "vertical points (>= 9)");
  reals.add(run_cmd, "--t-end", &ra.schedule.t_end, "final time (0: initial diagnostics only)");
  reals.add(run_cmd, "--dt", &ra.schedule.dt, "fixed time step (0: adaptive)");
  reals.add(run_cmd, "--cfl", &ra.schedule.cfl, "CFL number for adaptive steps");
  reals.add(run_cmd, "--dt-max", &ra.schedule.dt_max, "largest adaptive step");
  reals.add(run_cmd, "--sample-interval", &ra.schedule.sample_interval, "time between diagnostic samples");
  reals.add(run_cmd, "--spinup", &ra.schedule.spinup_fraction, "fraction of the horizon excluded from averages");
  reals.add(run_cmd, "--seed", &ra.seed, "initial perturbation seed");
  reals.add(run_cmd, "--amplitude", &ra.amplitude, "initial perturbation amplitude");
  run_cmd->add_option("--out", ra.out, "output directory");
  run_cmd->callback([&] { action = [&] { return do_run(ra, out); }; });

  std::string config, sweep_out;
  int threads = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep from a config file (resumable)");
  sweep_cmd->add_option("--config", config, "sweep config file")->required();
  sweep_cmd->add_option("--out", sweep_out, "output directory (overrides the config)");
  sweep_cmd->add_option("--threads", threads, "worker count (0: RBC_THREADS or all cores)")->check(CLI::NonNegativeNumber);
  sweep_cmd->callback([&] { action = [&] { return do_sweep(config, sweep_out, threads, out); }; });

  std::string snapshot;
  std::vector<std::string> delta_text;
  double interp_constant = kInterpolationConstant;
  auto* audit_cmd = app.add_subcommand("audit", "Evaluate every diagnostic check on a snapshot file");
  audit_cmd->add_option("--snapshot", snapshot, "snapshot file")->required();
  audit_cmd->add_option("--delta", delta_text, "layer thicknesses (default 0.05 0.1 0.2)");
  reals.add(audit_cmd, "--interp-constant", &interp_constant, "constant of the interpolation estimate");
  audit_cmd->callback([&] {
    action = [&] {
      std::vector<double> deltas;
      for (const auto& t : delta_text) {
        double v = 0.0;
        try {
          v = parse_real(t, "--delta");
        } catch (const InvalidInput&) {
          throw UsageError("--delta: invalid number '" + t + "'");
        }
        if (!(v > 0.0 && v <= 1.0)) throw UsageError("--delta: must lie in (0, 1], got '" + t + "'");
        deltas.push_back(v);
      }
      return do_audit(snapshot, deltas, interp_constant, out);
    };
  });

  PhysParams bp;
  bp.ra = 1e6;
  double nu = std::numeric_limits<double>::quiet_NaN();
  bool bound_csv = false;
  auto* bound_cmd = app.add_subcommand("bound", "Evaluate the Nusselt upper bound and the optimal layer thickness");
  reals.add(bound_cmd, "--ra", &bp.ra, "Rayleigh number");
  reals.add(bound_cmd, "--pr", &bp.pr, "Prandtl number (inf allowed)");
  reals.add(bound_cmd, "--ls", &bp.ls, "slip length (inf for free slip)");
  reals.add(bound_cmd, "--nu", &nu, "Nusselt hypothesis for delta_star (nan: the bound value)");
  bound_cmd->add_flag("--csv", bound_csv, "print one CSV row");
  bound_cmd->callback([&] { action = [&] { return do_bound(bp, nu, bound_csv, out); }; });

  std::string fit_csv, fit_y = "nu_flux";
  std::vector<std::string> fit_group;
  auto* fit_cmd = app.add_subcommand("fit", "Fit log Nu against log Ra from a results CSV");
  fit_cmd->add_option("--csv", fit_csv, "results CSV")->required();
  fit_cmd->add_option("--group", fit_group, "group columns (e.g. pr ls, or ls_alpha pr_alpha)")->delimiter(',');
  fit_cmd->add_option("--y", fit_y, "column fitted against ra");
  fit_cmd->callback([&] { action = [&] { return do_fit(fit_csv, fit_group, fit_y, out); }; });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
    reals.resolve();
    if (!std::isnan(nu) && !(nu >= 1.0)) throw UsageError("--nu: must be >= 1");
    return action();
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kUsageError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }
}

}  // namespace rbslip::cli
