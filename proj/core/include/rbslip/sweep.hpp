#pragma once

#include "rbslip/bounds.hpp"
#include "rbslip/diagnostics.hpp"
#include "rbslip/params.hpp"
#include "rbslip/run.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rbslip {

/// One simulation of a sweep.
struct SweepPoint {
  PhysParams params;
  int nx = 64;
  int nz = 65;
  std::uint64_t seed = 0;
  double amplitude = 0.01;
  RunSchedule schedule;

  /// Deterministic identifier built from the parameters, e.g.
  /// "ra1e+04_pr1_ls1_g2_64x65_s0_t1".
  std::string run_id() const;
};

/// Parsed sweep configuration.
///
/// Format: one `key = value` per line, `#` starts a comment. Keys before the
/// first `[point]` set defaults; keys inside a `[point]` section apply to that
/// point only. Each section yields one point. Top-level generators
/// `ra_list = a, b, ...` or `ra_grid = lo:hi:n` (log-spaced, likewise for pr
/// and ls) add the cartesian product of their values. `ls_alpha = a` sets
/// ls = ra^a for every point that does not set ls explicitly.
///
/// Keys: output, ra, pr, ls, gamma, nx, nz, seed, amplitude, t_end, dt, cfl,
/// dt_max, sample_interval, spinup_fraction, deltas, ls_alpha, snapshots,
/// plot, and the generators.
struct SweepConfig {
  std::vector<SweepPoint> points;
  std::filesystem::path output_dir;
  std::vector<double> deltas{0.05, 0.1, 0.2};
  std::optional<double> ls_alpha;
  bool snapshots = true;
  bool plot = true;
};

/// Relative output paths are resolved against `base_dir`. Throws
/// FormatError (with line number) or InvalidInput.
SweepConfig parse_sweep_config(std::istream& in, const std::filesystem::path& base_dir = {});
SweepConfig load_sweep_config(const std::filesystem::path& path);

enum class RunStatus { Ok, BlowUp, NonConverged };
std::string_view to_string(RunStatus s) noexcept;

/// One results row.
struct ResultRow {
  std::string run_id;
  PhysParams params;
  int nx = 0;
  int nz = 0;
  double dt = 0.0;
  double t_end = 0.0;
  double t_avg_start = 0.0;
  RunSummary summary;
  BoundReport bound;
  RunStatus status = RunStatus::Ok;
};

/// Exact results header, comma separated, without newline.
const std::string& results_header();
/// Shortest round-trip number formatting; NaN for metrics of failed runs.
std::string format_row(const ResultRow& row);

/// Header-keyed view of a CSV file. Lines whose field count differs from
/// the header are dropped (a partially written last line).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> lines;  // raw text of each kept row

  int column(std::string_view name) const;  // -1 if absent
  double number(std::size_t row, std::string_view name) const;
  const std::string& text(std::size_t row, std::string_view name) const;
};
CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// Time series of sampled diagnostics, one row per DiagRecord.
const std::string& diag_header();
std::string format_diag_row(const DiagRecord& r);

/// Runs one point; BlowUp and other library errors become failed rows.
ResultRow run_point(const SweepPoint& point, const std::vector<double>& deltas,
                    const std::filesystem::path& snapshot_path = {});

struct SweepOptions {
  /// Worker count; 0 means RBC_THREADS or the hardware concurrency.
  int threads = 0;
  /// Stop after this many new points (the CSV is left unsorted, as after an
  /// interruption).
  std::size_t max_new_points = std::numeric_limits<std::size_t>::max();
  std::ostream* log = nullptr;
};

struct SweepOutcome {
  std::filesystem::path csv;
  std::size_t completed = 0;  // newly run points
  std::size_t skipped = 0;    // rows already present
  bool finished = true;
};

/// Runs every point without a row in <output>/results.csv, appending rows
/// through a single writer, then rewrites the file sorted by
/// (ra, pr, ls, gamma, nx, nz, run_id). Snapshots go to
/// <output>/snapshots/<run_id>.rbns, the plot to <output>/nu_vs_ra.svg.
SweepOutcome run_matrix(const SweepConfig& cfg, const SweepOptions& options = {});

/// Least-squares fit of log y = intercept + slope log x.
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  int points_used = 0;
  /// max / min of y over the bound value in the group (NaN if unavailable).
  double bound_ratio_spread = std::numeric_limits<double>::quiet_NaN();
};

/// Throws InvalidInput with fewer than 3 points or non-positive data.
FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

struct FitGroup {
  std::string key;  // "col=value,..." or "all"
  FitResult fit;
};

/// Fits y (default nu_flux) against ra over rows with status ok, grouped by
/// the listed columns. Besides CSV columns, "ls_alpha" and "pr_alpha" group
/// by log(ls)/log(ra) and log(pr)/log(ra). Groups with fewer than 3 rows
/// are rejected.
std::vector<FitGroup> fit_scaling(const CsvTable& table, const std::vector<std::string>& group_by,
                                  const std::string& y_column = "nu_flux");

/// Log-log chart of Nu against Ra per group with guide lines of slope 5/12
/// and 1/3 through the first point.
std::string nu_ra_svg(const std::map<std::string, std::vector<std::pair<double, double>>>& series);

}  // namespace rbslip
