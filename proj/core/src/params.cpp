#include "rbslip/params.hpp"

#include "rbslip/error.hpp"

#include <cctype>
#include <charconv>
#include <string>
#include <system_error>
#include <utility>

namespace rbslip {

void PhysParams::validate() const {
  if (!(ra > 0.0) || !std::isfinite(ra)) throw InvalidInput("ra must be positive and finite");
  if (!(pr > 0.0)) throw InvalidInput("pr must be positive (inf allowed)");
  if (!(ls > 0.0)) throw InvalidInput("ls must be positive (inf for free slip; ls = 0 is not supported)");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("gamma must be positive and finite");
}

PhysParams nondimensionalize(const Nondim& d, double ls, double gamma) {
  const std::pair<const char*, double> inputs[] = {{"g", d.g},         {"alpha", d.alpha},
                                                   {"delta_t", d.delta_t}, {"h", d.h},
                                                   {"kappa", d.kappa}, {"nu", d.nu}};
  for (const auto& [name, v] : inputs) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidInput(std::string(name) + " must be positive and finite");
  }
  PhysParams p;
  p.ra = d.g * d.alpha * d.delta_t * d.h * d.h * d.h / (d.kappa * d.nu);
  p.pr = d.nu / d.kappa;
  p.ls = ls;
  p.gamma = gamma;
  p.validate();
  return p;
}

double parse_real(std::string_view text, std::string_view what) {
  auto fail = [&] {
    return InvalidInput("invalid number for " + std::string(what) + ": '" + std::string(text) + "'");
  };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text == "inf" || text == "+inf" || text == "Inf" || text == "infinity") return kInf;
  if (text == "-inf") return -kInf;
  std::string_view body = text;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
  if (body.empty() || ec != std::errc() || ptr != body.data() + body.size() || !std::isfinite(v)) throw fail();
  return v;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace rbslip
