#include "rbslip/error.hpp"
#include "rbslip/sweep.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <set>
#include <sstream>

namespace rbslip {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct LineError {
  int line;
  FormatError make(const std::string& msg) const {
    return FormatError("config line " + std::to_string(line) + ": " + msg);
  }
};

double real(std::string_view v, std::string_view key, const LineError& at) {
  try {
    return parse_real(v, key);
  } catch (const InvalidInput& e) {
    throw at.make(e.what());
  }
}

long long integer(std::string_view v, std::string_view key, const LineError& at) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw at.make("invalid integer for " + std::string(key) + ": '" + std::string(v) + "'");
  return x;
}

bool boolean(std::string_view v, std::string_view key, const LineError& at) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw at.make("invalid boolean for " + std::string(key) + ": '" + std::string(v) + "'");
}

std::vector<double> real_list(std::string_view v, std::string_view key, const LineError& at) {
  std::vector<double> out;
  for (auto item : split(v, ',')) out.push_back(real(item, key, at));
  return out;
}

std::vector<double> log_grid(std::string_view v, std::string_view key, const LineError& at) {
  const auto parts = split(v, ':');
  if (parts.size() != 3) throw at.make(std::string(key) + " expects lo:hi:n");
  const double lo = real(parts[0], key, at), hi = real(parts[1], key, at);
  const long long n = integer(parts[2], key, at);
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi) || n < 1)
    throw at.make(std::string(key) + " needs 0 < lo <= hi < inf and n >= 1");
  std::vector<double> out;
  for (long long i = 0; i < n; ++i) {
    if (n == 1) {
      out.push_back(lo);
      break;
    }
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    out.push_back(i == 0 ? lo : i == n - 1 ? hi : std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))));
  }
  return out;
}

// Settings of one point before ls_alpha is resolved.
struct Draft {
  SweepPoint point;
  bool ls_set = false;
};

bool apply_point_key(Draft& d, std::string_view key, std::string_view v, const LineError& at) {
  SweepPoint& p = d.point;
  if (key == "ra") p.params.ra = real(v, key, at);
  else if (key == "pr") p.params.pr = real(v, key, at);
  else if (key == "ls") {
    p.params.ls = real(v, key, at);
    d.ls_set = true;
  } else if (key == "gamma") p.params.gamma = real(v, key, at);
  else if (key == "nx") p.nx = static_cast<int>(integer(v, key, at));
  else if (key == "nz") p.nz = static_cast<int>(integer(v, key, at));
  else if (key == "seed") {
    const long long s = integer(v, key, at);
    if (s < 0) throw at.make("seed must be non-negative");
    p.seed = static_cast<std::uint64_t>(s);
  } else if (key == "amplitude") p.amplitude = real(v, key, at);
  else if (key == "t_end") p.schedule.t_end = real(v, key, at);
  else if (key == "dt") p.schedule.dt = real(v, key, at);
  else if (key == "cfl") p.schedule.cfl = real(v, key, at);
  else if (key == "dt_max") p.schedule.dt_max = real(v, key, at);
  else if (key == "sample_interval") p.schedule.sample_interval = real(v, key, at);
  else if (key == "spinup_fraction") p.schedule.spinup_fraction = real(v, key, at);
  else return false;
  return true;
}

void check_point(const SweepPoint& p, int line) {
  const LineError at{line};
  try {
    p.params.validate();
  } catch (const InvalidInput& e) {
    throw at.make(e.what());
  }
  if (p.nx < 8 || p.nx % 2 != 0) throw at.make("nx must be even and >= 8");
  if (p.nz < 9) throw at.make("nz must be >= 9");
  const auto& s = p.schedule;
  if (!(s.t_end >= 0.0) || !std::isfinite(s.t_end)) throw at.make("t_end must be finite and >= 0");
  if (!(s.dt >= 0.0)) throw at.make("dt must be >= 0 (0 selects adaptive steps)");
  if (!(s.cfl > 0.0) || !(s.dt_max > 0.0) || !(s.sample_interval > 0.0))
    throw at.make("cfl, dt_max and sample_interval must be positive");
  if (!(s.spinup_fraction >= 0.0 && s.spinup_fraction < 1.0)) throw at.make("spinup_fraction must be in [0, 1)");
  // Larger amplitudes push T0 = 1 - z + a sin(pi z) h(x) outside [0, 1] near the walls.
  if (!(p.amplitude >= 0.0 && p.amplitude <= 1.0 / std::numbers::pi))
    throw at.make("amplitude must be in [0, 1/pi]");
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& in, const std::filesystem::path& base_dir) {
  SweepConfig cfg;
  Draft defaults;
  std::vector<std::pair<Draft, int>> sections;
  std::vector<double> ra_gen, pr_gen, ls_gen;
  bool in_section = false;
  std::string output;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const LineError at{line_no};
    std::string_view line(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line != "[point]") throw at.make("unknown section " + std::string(line));
      in_section = true;
      sections.emplace_back(defaults, line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw at.make("expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) throw at.make("empty value for " + std::string(key));
    if (in_section) {
      if (!apply_point_key(sections.back().first, key, value, at))
        throw at.make("key '" + std::string(key) + "' is not allowed in a [point] section");
      continue;
    }
    if (apply_point_key(defaults, key, value, at)) continue;
    if (key == "output") output = std::string(value);
    else if (key == "deltas") cfg.deltas = real_list(value, key, at);
    else if (key == "ls_alpha") {
      const double a = real(value, key, at);
      if (!(a >= 0.0) || !std::isfinite(a)) throw at.make("ls_alpha must be finite and >= 0");
      cfg.ls_alpha = a;
    } else if (key == "snapshots") cfg.snapshots = boolean(value, key, at);
    else if (key == "plot") cfg.plot = boolean(value, key, at);
    else if (key == "ra_list") ra_gen = real_list(value, key, at);
    else if (key == "pr_list") pr_gen = real_list(value, key, at);
    else if (key == "ls_list") ls_gen = real_list(value, key, at);
    else if (key == "ra_grid") ra_gen = log_grid(value, key, at);
    else if (key == "pr_grid") pr_gen = log_grid(value, key, at);
    else if (key == "ls_grid") ls_gen = log_grid(value, key, at);
    else throw at.make("unknown key '" + std::string(key) + "'");
  }
  if (cfg.ls_alpha && !ls_gen.empty()) throw FormatError("config: ls_alpha conflicts with ls_list/ls_grid");
  for (double d : cfg.deltas)
    if (!(d > 0.0 && d <= 1.0)) throw FormatError("config: deltas must lie in (0, 1]");
  if (output.empty()) throw FormatError("config: missing 'output' directory");
  cfg.output_dir = std::filesystem::path(output);
  if (cfg.output_dir.is_relative() && !base_dir.empty()) cfg.output_dir = base_dir / cfg.output_dir;

  std::vector<std::pair<Draft, int>> drafts;
  if (!ra_gen.empty() || !pr_gen.empty() || !ls_gen.empty()) {
    const std::vector<double> ras = ra_gen.empty() ? std::vector<double>{defaults.point.params.ra} : ra_gen;
    const std::vector<double> prs = pr_gen.empty() ? std::vector<double>{defaults.point.params.pr} : pr_gen;
    const std::vector<double> lss = ls_gen.empty() ? std::vector<double>{defaults.point.params.ls} : ls_gen;
    for (double ra : ras)
      for (double pr : prs)
        for (double ls : lss) {
          Draft d = defaults;
          d.point.params.ra = ra;
          d.point.params.pr = pr;
          d.point.params.ls = ls;
          d.ls_set = d.ls_set || !ls_gen.empty();
          drafts.emplace_back(d, 0);
        }
  }
  drafts.insert(drafts.end(), sections.begin(), sections.end());
  std::set<std::string> ids;
  for (auto& [d, line] : drafts) {
    if (cfg.ls_alpha && !d.ls_set) d.point.params.ls = std::pow(d.point.params.ra, *cfg.ls_alpha);
    check_point(d.point, line);
    if (!ids.insert(d.point.run_id()).second)
      throw FormatError("config: duplicate point " + d.point.run_id());
    cfg.points.push_back(d.point);
  }
  return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open config " + path.string());
  return parse_sweep_config(f, path.parent_path());
}

std::string SweepPoint::run_id() const {
  return "ra" + format_real(params.ra) + "_pr" + format_real(params.pr) + "_ls" + format_real(params.ls) + "_g" +
         format_real(params.gamma) + "_" + std::to_string(nx) + "x" + std::to_string(nz) + "_s" +
         std::to_string(seed) + "_t" + format_real(schedule.t_end);
}

}  // namespace rbslip
