#include "rbslip/error.hpp"
#include "rbslip/snapshot.hpp"
#include "rbslip/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>
#include <tuple>

namespace rbslip {

ResultRow run_point(const SweepPoint& point, const std::vector<double>& deltas,
                    const std::filesystem::path& snapshot_path) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  ResultRow row;
  row.run_id = point.run_id();
  row.params = point.params;
  row.nx = point.nx;
  row.nz = point.nz;
  row.t_end = point.schedule.t_end;
  row.t_avg_start = point.schedule.spinup_fraction * point.schedule.t_end;
  row.dt = point.schedule.dt;
  row.bound = bound_value(point.params);

  RunSchedule schedule = point.schedule;
  schedule.diag.deltas = {0.05, 0.1, 0.2};
  for (double d : deltas)
    if (std::find(schedule.diag.deltas.begin(), schedule.diag.deltas.end(), d) == schedule.diag.deltas.end())
      schedule.diag.deltas.push_back(d);

  auto failed = [&](RunStatus status) {
    row.status = status;
    RunSummary& s = row.summary;
    s.nu_flux = s.nu_grad = s.nu_profile_flat = s.energy_resid = s.enstrophy_margin = nan;
    s.trace_margin_min = s.interp_margin_min = s.grad_iden_max_err = s.hessian_margin_min = nan;
    s.omega_l4_max = s.t_min = s.t_max = nan;
    s.deltas = {0.05, 0.1, 0.2};
    s.nu_local.assign(3, nan);
    return row;
  };

  try {
    const DomainPtr domain = Domain::create(point.params.gamma, point.nx, point.nz);
    InitialCondition ic;
    ic.seed = point.seed;
    ic.amplitude = point.amplitude;
    const RunResult result = run(ic, domain, point.params, schedule);
    if (schedule.dt <= 0.0) row.dt = result.last_dt;
    row.summary = summarize(result, point.params);
    row.status = row.summary.converged ? RunStatus::Ok : RunStatus::NonConverged;
    if (!snapshot_path.empty()) write_snapshot(snapshot_path, result.final_state, point.params);
  } catch (const BlowUp&) {
    return failed(RunStatus::BlowUp);
  } catch (const Error&) {
    return failed(RunStatus::NonConverged);
  }
  return row;
}

namespace {

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RBC_THREADS")) {
    try {
      const double v = parse_real(env, "RBC_THREADS");
      if (v >= 1.0 && v == std::floor(v) && v <= 4096.0) return static_cast<int>(v);
    } catch (const InvalidInput&) {
    }
    throw InvalidInput(std::string("RBC_THREADS must be a positive integer, got '") + env + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

using SortKey = std::tuple<double, double, double, double, double, double, std::string>;

SortKey sort_key(const CsvTable& t, std::size_t i) {
  return {t.number(i, "ra"), t.number(i, "pr"), t.number(i, "ls"), t.number(i, "gamma"),
          t.number(i, "nx"), t.number(i, "nz"), t.text(i, "run_id")};
}

void rewrite_sorted(const std::filesystem::path& csv) {
  const CsvTable t = read_csv(csv);
  std::vector<std::size_t> order(t.rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<SortKey> keys;
  keys.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) keys.push_back(sort_key(t, i));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  const auto tmp = std::filesystem::path(csv.string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::trunc);
    f << results_header() << '\n';
    for (std::size_t i : order) f << t.lines[i] << '\n';
    if (!f) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, csv);
}

void write_plot(const std::filesystem::path& csv, const std::filesystem::path& svg) {
  const CsvTable t = read_csv(csv);
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.text(i, "status") != "ok") continue;
    const std::string key = "Pr=" + t.text(i, "pr") + " Ls=" + t.text(i, "ls");
    series[key].emplace_back(t.number(i, "ra"), t.number(i, "nu_flux"));
  }
  if (series.empty()) return;
  std::ofstream f(svg, std::ios::trunc);
  f << nu_ra_svg(series);
}

}  // namespace

SweepOutcome run_matrix(const SweepConfig& cfg, const SweepOptions& options) {
  SweepOutcome out;
  std::filesystem::create_directories(cfg.output_dir);
  const auto snap_dir = cfg.output_dir / "snapshots";
  if (cfg.snapshots) std::filesystem::create_directories(snap_dir);
  out.csv = cfg.output_dir / "results.csv";

  std::set<std::string> done;
  if (std::filesystem::exists(out.csv)) {
    const CsvTable existing = read_csv(out.csv);
    if (!existing.header.empty()) {
      std::string h;
      for (std::size_t i = 0; i < existing.header.size(); ++i) h += (i ? "," : "") + existing.header[i];
      if (h != results_header()) throw IncompatibleData("existing " + out.csv.string() + " has a different header");
    }
    for (std::size_t i = 0; i < existing.rows.size(); ++i) done.insert(existing.text(i, "run_id"));
    // Drop a partially written trailing line before appending.
    std::ofstream f(out.csv, std::ios::trunc);
    f << results_header() << '\n';
    for (const auto& line : existing.lines) f << line << '\n';
  } else {
    std::ofstream f(out.csv, std::ios::trunc);
    f << results_header() << '\n';
    if (!f) throw Error("cannot write " + out.csv.string());
  }

  std::vector<const SweepPoint*> todo;
  for (const auto& p : cfg.points) {
    if (done.count(p.run_id())) {
      ++out.skipped;
    } else if (todo.size() < options.max_new_points) {
      todo.push_back(&p);
    } else {
      out.finished = false;
    }
  }

  std::mutex mu;
  std::condition_variable cv;
  std::deque<ResultRow> ready;
  std::size_t next = 0;
  std::size_t workers_left = 0;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const SweepPoint* p = nullptr;
      {
        std::lock_guard lock(mu);
        if (next >= todo.size() || failure) break;
        p = todo[next++];
      }
      try {
        const auto snap = cfg.snapshots ? snap_dir / (p->run_id() + ".rbns") : std::filesystem::path{};
        ResultRow row = run_point(*p, cfg.deltas, snap);
        std::lock_guard lock(mu);
        ready.push_back(std::move(row));
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
      cv.notify_one();
    }
    std::lock_guard lock(mu);
    --workers_left;
    cv.notify_one();
  };

  const int n_workers = std::min<int>(worker_count(options.threads), static_cast<int>(std::max<std::size_t>(todo.size(), 1)));
  std::vector<std::thread> pool;
  workers_left = static_cast<std::size_t>(n_workers);
  for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);

  // Single writer: this thread appends finished rows as they arrive.
  {
    std::ofstream f(out.csv, std::ios::app);
    std::unique_lock lock(mu);
    for (;;) {
      cv.wait(lock, [&] { return !ready.empty() || workers_left == 0; });
      while (!ready.empty()) {
        ResultRow row = std::move(ready.front());
        ready.pop_front();
        lock.unlock();
        f << format_row(row) << '\n';
        f.flush();
        ++out.completed;
        if (options.log)
          *options.log << "[" << out.completed << "/" << todo.size() << "] " << row.run_id << " "
                       << to_string(row.status) << " nu=" << format_real(row.summary.nu_flux) << '\n';
        lock.lock();
      }
      if (workers_left == 0 && ready.empty()) break;
    }
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  if (out.finished) {
    rewrite_sorted(out.csv);
    if (cfg.plot) write_plot(out.csv, cfg.output_dir / "nu_vs_ra.svg");
  }
  return out;
}

}  // namespace rbslip
