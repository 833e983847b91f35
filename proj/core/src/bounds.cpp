#include "rbslip/bounds.hpp"

#include "rbslip/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace rbslip {

std::string_view to_string(Region r) noexcept {
  switch (r) {
    case Region::FreeSlip512: return "FREE_SLIP_512";
    case Region::LsGe1Mixed: return "LS_GE1_MIXED";
    case Region::LsLt1Mixed: return "LS_LT1_MIXED";
  }
  return "";
}

std::string_view to_string(Term t) noexcept {
  switch (t) {
    case Term::Ra512: return "RA_5_12";
    case Term::Ls16Pr16Ra12: return "LS_16_PR_16_RA_12";
    case Term::Ls13Ra13: return "LS_13_RA_13";
    case Term::Ls23Pr16Ra12: return "LS_23_PR_16_RA_12";
    case Term::Ls213Ra513: return "LS_213_RA_513";
  }
  return "";
}

Exponents term_exponents(Term t) noexcept {
  switch (t) {
    case Term::Ra512: return {5.0 / 12.0, 0.0, 0.0};
    case Term::Ls16Pr16Ra12: return {0.5, -1.0 / 6.0, -1.0 / 6.0};
    case Term::Ls13Ra13: return {1.0 / 3.0, 0.0, -1.0 / 3.0};
    case Term::Ls23Pr16Ra12: return {0.5, -1.0 / 6.0, -2.0 / 3.0};
    case Term::Ls213Ra513: return {5.0 / 13.0, 0.0, -2.0 / 13.0};
  }
  return {};
}

namespace {

double power(double x, double e) {
  if (e == 0.0) return 1.0;
  if (std::isinf(x)) return e < 0.0 ? 0.0 : kInf;
  return std::pow(x, e);
}

std::string_view term_formula(Term t) {
  switch (t) {
    case Term::Ra512: return "Nu <~ Ra^{5/12}";
    case Term::Ls16Pr16Ra12: return "Nu <~ Ls^{-1/6} Pr^{-1/6} Ra^{1/2}";
    case Term::Ls13Ra13: return "Nu <~ Ls^{-1/3} Ra^{1/3}";
    case Term::Ls23Pr16Ra12: return "Nu <~ Ls^{-2/3} Pr^{-1/6} Ra^{1/2}";
    case Term::Ls213Ra513: return "Nu <~ Ls^{-2/13} Ra^{5/13}";
  }
  return "";
}

struct CellDef {
  int row;
  std::string_view pr_band;
  std::string_view ls_band;
  Term term;
  // Closed Ls interval [lo, hi] as functions of (ra, pr).
  double (*lo)(double, double);
  double (*hi)(double, double);
};

double zero(double, double) { return 0.0; }
double inf(double, double) { return kInf; }
double one(double, double) { return 1.0; }
double ra_m5_24(double ra, double) { return std::pow(ra, -5.0 / 24.0); }
double ra_m2_7(double ra, double) { return std::pow(ra, -2.0 / 7.0); }
double pr_m12_ra12(double ra, double pr) { return power(pr, -0.5) * std::sqrt(ra); }
double pr_m13_40_ra9_40(double ra, double pr) { return power(pr, -13.0 / 40.0) * std::pow(ra, 9.0 / 40.0); }
double pr_m14_ra18(double ra, double pr) { return power(pr, -0.25) * std::pow(ra, 0.125); }
double pr_m1_ra12(double ra, double pr) { return power(pr, -1.0) * std::sqrt(ra); }

const std::vector<CellDef>& cells() {
  static const std::vector<CellDef> c = {
      {1, "Ra^{11/7} <= Pr", "Ra^{-5/24} <= Ls", Term::Ra512, ra_m5_24, inf},
      {1, "Ra^{11/7} <= Pr", "Ra^{-2/7} <= Ls <= Ra^{-5/24}", Term::Ls213Ra513, ra_m2_7, ra_m5_24},
      {1, "Ra^{11/7} <= Pr", "Pr^{-1/2} Ra^{1/2} <= Ls <= Ra^{-2/7}", Term::Ls13Ra13, pr_m12_ra12, ra_m2_7},
      {1, "Ra^{11/7} <= Pr", "Ls <= Pr^{-1/2} Ra^{1/2}", Term::Ls23Pr16Ra12, zero, pr_m12_ra12},
      {2, "Ra^{4/3} <= Pr <= Ra^{11/7}", "Ra^{-5/24} <= Ls", Term::Ra512, ra_m5_24, inf},
      {2, "Ra^{4/3} <= Pr <= Ra^{11/7}", "Pr^{-13/40} Ra^{9/40} <= Ls <= Ra^{-5/24}", Term::Ls213Ra513,
       pr_m13_40_ra9_40, ra_m5_24},
      {2, "Ra^{4/3} <= Pr <= Ra^{11/7}", "Ls <= Pr^{-13/40} Ra^{9/40}", Term::Ls23Pr16Ra12, zero,
       pr_m13_40_ra9_40},
      {3, "Ra^{1/2} <= Pr <= Ra^{4/3}", "Pr^{-1/4} Ra^{1/8} <= Ls", Term::Ra512, pr_m14_ra18, inf},
      {3, "Ra^{1/2} <= Pr <= Ra^{4/3}", "Ls <= Pr^{-1/4} Ra^{1/8}", Term::Ls23Pr16Ra12, zero, pr_m14_ra18},
      {4, "Pr <= Ra^{1/2}", "Pr^{-1} Ra^{1/2} <= Ls", Term::Ra512, pr_m1_ra12, inf},
      {4, "Pr <= Ra^{1/2}", "1 <= Ls <= Pr^{-1} Ra^{1/2}", Term::Ls16Pr16Ra12, one, pr_m1_ra12},
      {4, "Pr <= Ra^{1/2}", "Ls <= 1", Term::Ls23Pr16Ra12, zero, one},
  };
  return c;
}

bool in_row(int row, double ra, double pr) {
  const double a = std::sqrt(ra), b = std::pow(ra, 4.0 / 3.0), c = std::pow(ra, 11.0 / 7.0);
  switch (row) {
    case 1: return pr >= c;
    case 2: return pr >= b && pr <= c;
    case 3: return pr >= a && pr <= b;
    case 4: return pr <= a;
  }
  return false;
}

double rel_distance(double x, double edge) {
  if (std::isinf(x) && std::isinf(edge)) return 0.0;
  if (std::isinf(x) || std::isinf(edge) || edge == 0.0) return kInf;
  return std::abs(x / edge - 1.0);
}

}  // namespace

double term_value(Term t, const PhysParams& p) {
  const Exponents e = term_exponents(t);
  return power(p.ra, e.ra) * power(p.pr, e.pr) * power(p.ls, e.ls);
}

BoundReport bound_value(const PhysParams& p) {
  p.validate();
  BoundReport r;
  std::vector<Term> terms;
  if (p.free_slip()) {
    r.region = Region::FreeSlip512;
    terms = {Term::Ra512};
  } else if (p.ls >= 1.0) {
    r.region = Region::LsGe1Mixed;
    terms = {Term::Ra512, Term::Ls16Pr16Ra12};
  } else {
    r.region = Region::LsLt1Mixed;
    terms = {Term::Ls13Ra13, Term::Ls23Pr16Ra12, Term::Ls213Ra513, Term::Ra512};
  }
  double best = -1.0;
  for (Term t : terms) {
    const double v = term_value(t, p);
    r.value += v;
    if (v > best) {
      best = v;
      r.dominant = t;
    }
  }
  r.exponents = term_exponents(r.dominant);
  r.delta_star = delta_optimal(p, std::max(1.0, r.value));
  r.table_row = region_classify(p).label;
  r.caveat =
      "constants set to 1; valid for Ra large enough that the initial velocity satisfies "
      "|u0|_{W^{1,4}} <~ Ra (initial data not checked)";
  return r;
}

TableCell region_classify(const PhysParams& p) {
  p.validate();
  const double ra = p.ra, pr = p.pr, ls = p.ls;
  const CellDef* chosen = nullptr;
  double chosen_value = kInf;
  for (const CellDef& c : cells()) {
    if (!in_row(c.row, ra, pr)) continue;
    const double lo = c.lo(ra, pr), hi = c.hi(ra, pr);
    if (ls < lo || ls > hi) continue;
    const double v = term_value(c.term, p);
    if (!chosen || v < chosen_value) {
      chosen = &c;
      chosen_value = v;
    }
  }
  if (!chosen) throw Error("no overview table cell contains the parameters");
  TableCell out;
  out.row = chosen->row;
  out.term = chosen->term;
  out.label = std::string(chosen->pr_band) + ", " + std::string(chosen->ls_band) + ": " +
              std::string(term_formula(chosen->term));
  double d = kInf;
  const double edges[] = {std::sqrt(ra), std::pow(ra, 4.0 / 3.0), std::pow(ra, 11.0 / 7.0)};
  for (double e : edges) d = std::min(d, rel_distance(pr, e));
  for (const CellDef& c : cells()) {
    if (c.row != chosen->row) continue;
    for (double e : {c.lo(ra, pr), c.hi(ra, pr)}) d = std::min(d, rel_distance(ls, e));
  }
  out.boundary_distance = d;
  return out;
}

double delta_coefficient(const PhysParams& p, double nu) {
  const double ils = p.inv_ls();
  const double ipr = p.inv_pr();
  const double ra54 = std::pow(p.ra, 1.25);
  return ils * nu * p.ra + std::max(1.0, std::pow(ils, 1.5)) * std::sqrt(ils * ipr) * nu * std::pow(p.ra, 1.5) +
         std::sqrt(ils) * std::pow(nu, 0.75) * ra54 + nu * ra54;
}

DeltaOptimum delta_optimal_detail(const PhysParams& p, double nu) {
  p.validate();
  if (!(nu >= 1.0) || !std::isfinite(nu)) throw InvalidInput("Nusselt hypothesis must be finite and >= 1");
  DeltaOptimum d;
  d.delta = std::min(1.0, std::pow(2.0 / (3.0 * delta_coefficient(p, nu)), 0.25));
  const double ra = p.ra;
  const double ils = p.inv_ls(), ipr = p.inv_pr();
  double s;
  if (p.free_slip()) {
    d.branch = DeltaBranch::FreeSlip;
    s = std::pow(ra, -5.0 / 16.0) * std::pow(nu, -0.25);
  } else if (p.ls >= 1.0) {
    d.branch = DeltaBranch::LsGe1;
    s = std::pow(nu, -0.25) * std::pow(std::sqrt(ils * ipr) * std::pow(ra, 1.5) + std::pow(ra, 1.25), -0.25);
  } else {
    const double test = std::sqrt(ils) * std::pow(ra, -0.25) + std::pow(ils, 1.5) * std::sqrt(ipr) * std::pow(ra, 0.25) +
                        std::sqrt(p.ls);
    if (test >= std::pow(nu, -0.25)) {
      d.branch = DeltaBranch::LsLt1Mixed;
      s = std::pow(nu, -0.25) *
          std::pow(ils * ra + ils * ils * std::sqrt(ipr) * std::pow(ra, 1.5) + std::pow(ra, 1.25), -0.25);
    } else {
      d.branch = DeltaBranch::LsLt1Slip;
      s = std::pow(p.ls, 0.125) * std::pow(nu, -3.0 / 16.0) * std::pow(ra, -5.0 / 16.0);
    }
  }
  d.scaling = std::min(1.0, s);
  return d;
}

double delta_optimal(const PhysParams& p, double nu) { return delta_optimal_detail(p, nu).delta; }

double delta_bruteforce(const PhysParams& p, double nu) {
  p.validate();
  const double s = delta_coefficient(p, nu);
  constexpr int n = 100000;
  const double a = std::log(1e-8), b = 0.0;
  double best = kInf, arg = 1.0;
  for (int i = 0; i < n; ++i) {
    const double dl = std::exp(a + (b - a) * i / (n - 1));
    const double f = dl * dl * dl * s + 2.0 / dl;
    if (f < best) {
      best = f;
      arg = dl;
    }
  }
  return arg;
}

}  // namespace rbslip
