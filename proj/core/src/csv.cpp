#include "rbslip/error.hpp"
#include "rbslip/sweep.hpp"

#include <fstream>
#include <istream>

namespace rbslip {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += v[i];
  }
  return out;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string_view to_string(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::BlowUp: return "blowup";
    case RunStatus::NonConverged: return "nonconverged";
  }
  return "";
}

const std::string& results_header() {
  static const std::string h =
      "run_id,ra,pr,ls,gamma,nx,nz,dt,t_end,t_avg_start,nu_flux,nu_grad,nu_local_d05,nu_local_d10,"
      "nu_local_d20,nu_profile_flat,energy_resid,enstrophy_margin,trace_margin_min,interp_margin_min,"
      "grad_iden_max_err,hessian_margin_min,omega_l4_max,t_min,t_max,bound_value,bound_region,delta_star,"
      "status";
  return h;
}

std::string format_row(const ResultRow& r) {
  const RunSummary& s = r.summary;
  auto local = [&](double delta) {
    for (std::size_t i = 0; i < s.deltas.size(); ++i)
      if (s.deltas[i] == delta && i < s.nu_local.size()) return format_real(s.nu_local[i]);
    return std::string("nan");
  };
  return join({r.run_id,
               format_real(r.params.ra),
               format_real(r.params.pr),
               format_real(r.params.ls),
               format_real(r.params.gamma),
               std::to_string(r.nx),
               std::to_string(r.nz),
               format_real(r.dt),
               format_real(r.t_end),
               format_real(r.t_avg_start),
               format_real(s.nu_flux),
               format_real(s.nu_grad),
               local(0.05),
               local(0.1),
               local(0.2),
               format_real(s.nu_profile_flat),
               format_real(s.energy_resid),
               format_real(s.enstrophy_margin),
               format_real(s.trace_margin_min),
               format_real(s.interp_margin_min),
               format_real(s.grad_iden_max_err),
               format_real(s.hessian_margin_min),
               format_real(s.omega_l4_max),
               format_real(s.t_min),
               format_real(s.t_max),
               format_real(r.bound.value),
               std::string(to_string(r.bound.region)),
               format_real(r.bound.delta_star),
               std::string(to_string(r.status))});
}

int CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

const std::string& CsvTable::text(std::size_t row, std::string_view name) const {
  const int c = column(name);
  if (c < 0) throw InvalidInput("CSV has no column '" + std::string(name) + "'");
  return rows.at(row)[static_cast<std::size_t>(c)];
}

double CsvTable::number(std::size_t row, std::string_view name) const {
  const std::string& t = text(row, name);
  if (t == "nan") return std::numeric_limits<double>::quiet_NaN();
  try {
    return parse_real(t, name);
  } catch (const InvalidInput& e) {
    throw FormatError(std::string("CSV row ") + std::to_string(row + 1) + ": " + e.what());
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) return t;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.header = split_line(line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != t.header.size()) continue;
    t.rows.push_back(std::move(fields));
    t.lines.push_back(line);
  }
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open CSV " + path.string());
  return read_csv(f);
}

const std::string& diag_header() {
  static const std::string h =
      "time,nu_flux,nu_grad,nu_profile_flat,kinetic,dissipation,wall_u1sq,buoyancy,enstrophy,grad_omega_sq,"
      "pressure_wall,hess_sq,pressure_h1,trace_margin,pressure_bound_ratio,interp_margin,grad_iden_rel_err,"
      "hessian_margin_rel,omega_l4,t_min,t_max,u2_mean_max,divergence_rel,closure_defect";
  return h;
}

std::string format_diag_row(const DiagRecord& r) {
  return join({format_real(r.time), format_real(r.nu_flux), format_real(r.nu_grad),
               format_real(r.nu_profile_flat), format_real(r.energy.kinetic), format_real(r.energy.dissipation),
               format_real(r.energy.wall_u1sq), format_real(r.energy.buoyancy), format_real(r.enstrophy.enstrophy),
               format_real(r.enstrophy.grad_omega_sq),
               r.enstrophy.has_pressure ? format_real(r.enstrophy.pressure_wall) : std::string("nan"),
               format_real(r.hess_sq), format_real(r.pressure_h1), format_real(r.trace_margin),
               format_real(r.pressure_bound_ratio), format_real(r.interp_margin), format_real(r.grad_iden_rel_err),
               format_real(r.hessian_margin_rel), format_real(r.omega_l4), format_real(r.t_min),
               format_real(r.t_max), format_real(r.u2_mean_max), format_real(r.divergence_rel),
               format_real(r.closure_defect)});
}

}  // namespace rbslip
