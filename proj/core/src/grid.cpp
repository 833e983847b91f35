#include "rbslip/grid.hpp"

#include "rbslip/error.hpp"
#include "rbslip/fourier.hpp"
#include "rbslip/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace rbslip {

namespace {

constexpr double pi = std::numbers::pi;

// Chebyshev coefficients a_k of the interpolant through Lobatto samples,
// f(x) = sum a_k T_k(x) with x = 1 - 2z.
std::vector<double> cheb_coefficients(std::span<const double> f) {
  const int n = static_cast<int>(f.size()) - 1;
  std::vector<double> a(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    double s = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double w = (j == 0 || j == n) ? 0.5 : 1.0;
      s += w * f[j] * std::cos(pi * k * j / n);
    }
    a[k] = 2.0 * s / n;
  }
  a[0] *= 0.5;
  a[n] *= 0.5;
  return a;
}

double cheb_t(int k, double x) { return std::cos(k * std::acos(std::clamp(x, -1.0, 1.0))); }

// Antiderivative of sum a_k T_k evaluated at x.
double cheb_antiderivative(const std::vector<double>& a, double x) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const int kk = static_cast<int>(k);
    double prim;
    if (kk == 0) {
      prim = x;
    } else if (kk == 1) {
      prim = 0.5 * x * x;
    } else {
      prim = cheb_t(kk + 1, x) / (2.0 * (kk + 1)) - cheb_t(kk - 1, x) / (2.0 * (kk - 1));
    }
    s += a[k] * prim;
  }
  return s;
}

void require_finite(const ScalarField& f, const char* what) {
  if (!f.all_finite()) throw InvalidInput(std::string(what) + ": field has non-finite entries");
}

double weighted_sum(const ScalarField& f, const std::function<double(double)>& g) {
  const Domain& d = f.domain();
  const auto w = d.quad_weights();
  const auto v = f.values();
  double s = 0.0;
  for (int i = 0; i < d.nx(); ++i) {
    const double* col = v.data() + static_cast<std::size_t>(i) * d.nz();
    for (int j = 0; j < d.nz(); ++j) s += w[j] * g(col[j]);
  }
  return s * d.gamma() / d.nx();
}

}  // namespace

Domain::Domain(double gamma, int nx, int nz) : gamma_(gamma), nx_(nx), nz_(nz) {
  const int n = nz - 1;
  nodes_.resize(nz);
  for (int j = 0; j <= n; ++j) {
    const double s = std::sin(pi * j / (2.0 * n));
    nodes_[j] = s * s;
  }

  // Clenshaw-Curtis on [-1, 1], halved for [0, 1].
  weights_.assign(nz, 0.0);
  std::vector<double> v(n - 1, 1.0);
  if (n % 2 == 0) {
    weights_[0] = weights_[n] = 1.0 / (n * n - 1.0);
    for (int k = 1; k < n / 2; ++k)
      for (int j = 1; j < n; ++j) v[j - 1] -= 2.0 * std::cos(2.0 * k * pi * j / n) / (4.0 * k * k - 1.0);
    for (int j = 1; j < n; ++j) v[j - 1] -= std::cos(pi * j) / (n * n - 1.0);
  } else {
    weights_[0] = weights_[n] = 1.0 / (static_cast<double>(n) * n);
    for (int k = 1; k <= (n - 1) / 2; ++k)
      for (int j = 1; j < n; ++j) v[j - 1] -= 2.0 * std::cos(2.0 * k * pi * j / n) / (4.0 * k * k - 1.0);
  }
  for (int j = 1; j < n; ++j) weights_[j] = 2.0 * v[j - 1] / n;
  for (auto& w : weights_) w *= 0.5;

  spacing_.resize(nz);
  spacing_[0] = nodes_[1] - nodes_[0];
  spacing_[n] = nodes_[n] - nodes_[n - 1];
  for (int j = 1; j < n; ++j) spacing_[j] = 0.5 * (nodes_[j + 1] - nodes_[j - 1]);

  // Chebyshev differentiation on x_j = cos(pi j / n), then d/dz = -2 d/dx.
  Eigen::MatrixXd dx(nz, nz);
  auto c = [n](int j) { return (j == 0 || j == n) ? 2.0 : 1.0; };
  for (int i = 0; i <= n; ++i) {
    double row = 0.0;
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      const double diff = -2.0 * std::sin(pi * (i + j) / (2.0 * n)) * std::sin(pi * (i - j) / (2.0 * n));
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      dx(i, j) = c(i) / c(j) * sign / diff;
      row += dx(i, j);
    }
    dx(i, i) = -row;
  }
  dz_ = -2.0 * dx;
  d2z_ = dz_ * dz_;
  fourier_ = std::make_unique<detail::Fourier>(nx, nz);
}

Domain::~Domain() = default;

std::shared_ptr<const Domain> Domain::create(double gamma, int nx, int nz) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("gamma must be positive and finite");
  if (nx < 8 || nx % 2 != 0) throw InvalidInput("nx must be an even integer >= 8");
  if (nz < 9) throw InvalidInput("nz must be an integer >= 9");
  return std::shared_ptr<const Domain>(new Domain(gamma, nx, nz));
}

double Domain::wavenumber(int m) const noexcept { return 2.0 * pi * m / gamma_; }

double Domain::min_vertical_spacing() const noexcept {
  return *std::min_element(spacing_.begin(), spacing_.end());
}

ScalarField::ScalarField(DomainPtr domain)
    : domain_(std::move(domain)),
      values_(static_cast<std::size_t>(domain_->nx()) * domain_->nz(), 0.0) {}

ScalarField::ScalarField(DomainPtr domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(domain_->nx()) * domain_->nz())
    throw InvalidInput("field size does not match domain (expected " +
                       std::to_string(domain_->nx() * domain_->nz()) + " values, got " +
                       std::to_string(values_.size()) + ")");
}

ScalarField ScalarField::from_function(DomainPtr domain,
                                       const std::function<double(double, double)>& f) {
  ScalarField out(domain);
  for (int i = 0; i < domain->nx(); ++i)
    for (int j = 0; j < domain->nz(); ++j) out(i, j) = f(domain->x(i), domain->z(j));
  return out;
}

Eigen::Map<Eigen::MatrixXd> ScalarField::matrix() noexcept {
  return {values_.data(), domain_->nz(), domain_->nx()};
}

Eigen::Map<const Eigen::MatrixXd> ScalarField::matrix() const noexcept {
  return {values_.data(), domain_->nz(), domain_->nx()};
}

std::vector<double> ScalarField::wall_profile(bool top) const {
  std::vector<double> out(domain_->nx());
  const int j = top ? domain_->nz() - 1 : 0;
  for (int i = 0; i < domain_->nx(); ++i) out[i] = (*this)(i, j);
  return out;
}

bool ScalarField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::min_value() const noexcept {
  return *std::min_element(values_.begin(), values_.end());
}

double ScalarField::max_value() const noexcept {
  return *std::max_element(values_.begin(), values_.end());
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  if (o.values_.size() != values_.size()) throw InvalidInput("field shapes differ");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  if (o.values_.size() != values_.size()) throw InvalidInput("field shapes differ");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double c) noexcept {
  for (double& v : values_) v *= c;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double c, ScalarField a) { return a *= c; }

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  if (a.values().size() != b.values().size()) throw InvalidInput("field shapes differ");
  ScalarField out(a.domain_ptr());
  auto o = out.values();
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = av[k] * bv[k];
  return out;
}

double integrate(const ScalarField& f) {
  require_finite(f, "integrate");
  return weighted_sum(f, [](double v) { return v; });
}

double lp_norm(const ScalarField& f, double p) {
  require_finite(f, "norm");
  if (std::isinf(p)) return f.max_abs();
  if (!(p >= 1.0)) throw InvalidInput("norm exponent must be >= 1");
  if (p == 1.0) return weighted_sum(f, [](double v) { return std::abs(v); });
  if (p == 2.0) return std::sqrt(weighted_sum(f, [](double v) { return v * v; }));
  if (p == 4.0) return std::sqrt(std::sqrt(weighted_sum(f, [](double v) { return v * v * v * v; })));
  return std::pow(weighted_sum(f, [p](double v) { return std::pow(std::abs(v), p); }), 1.0 / p);
}

double norm(const ScalarField& f, double p) {
  if (!(p == 1.0 || p == 2.0 || p == 4.0 || (std::isinf(p) && p > 0)))
    throw InvalidInput("unsupported norm exponent " + std::to_string(p) +
                       " (expected 1, 2, 4 or inf)");
  return lp_norm(f, p);
}

double sobolev_norm(const ScalarField& f, SobolevKind kind, const GradientProvider& gradient) {
  require_finite(f, "sobolev_norm");
  const auto [g1, g2] = gradient(f);
  const double p = kind == SobolevKind::H1 ? 2.0 : 4.0;
  ScalarField gm(f.domain_ptr());
  auto o = gm.values();
  for (std::size_t k = 0; k < o.size(); ++k)
    o[k] = std::sqrt(g1.values()[k] * g1.values()[k] + g2.values()[k] * g2.values()[k]);
  const double a = std::pow(lp_norm(f, p), p);
  const double b = std::pow(lp_norm(gm, p), p);
  return std::pow(a + b, 1.0 / p);
}

double sobolev_norm(const ScalarField& f, SobolevKind kind) {
  return sobolev_norm(f, kind, [](const ScalarField& g) { return std::make_pair(ddx(g), ddz(g)); });
}

std::vector<double> horizontal_average(const ScalarField& f) {
  require_finite(f, "horizontal_average");
  const Domain& d = f.domain();
  std::vector<double> out(d.nz(), 0.0);
  for (int i = 0; i < d.nx(); ++i)
    for (int j = 0; j < d.nz(); ++j) out[j] += f(i, j);
  for (double& v : out) v /= d.nx();
  return out;
}

double wall_trace_integral(const ScalarField& f, Wall wall) {
  const Domain& d = f.domain();
  const int j = wall == Wall::top ? d.nz() - 1 : 0;
  double s = 0.0;
  for (int i = 0; i < d.nx(); ++i) s += f(i, j);
  return s * d.dx();
}

double vertical_integral(const Domain& d, std::span<const double> profile) {
  if (profile.size() != static_cast<std::size_t>(d.nz())) throw InvalidInput("profile length must equal nz");
  const auto w = d.quad_weights();
  return std::inner_product(w.begin(), w.end(), profile.begin(), 0.0);
}

double integrate_profile_below(const Domain& d, std::span<const double> profile, double delta) {
  if (profile.size() != static_cast<std::size_t>(d.nz())) throw InvalidInput("profile length must equal nz");
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidInput("delta must lie in (0, 1]");
  const auto a = cheb_coefficients(profile);
  // z in [0, delta] maps to x in [1 - 2 delta, 1], dz = -dx / 2.
  return 0.5 * (cheb_antiderivative(a, 1.0) - cheb_antiderivative(a, 1.0 - 2.0 * delta));
}

double evaluate_profile(const Domain& d, std::span<const double> profile, double z) {
  if (profile.size() != static_cast<std::size_t>(d.nz())) throw InvalidInput("profile length must equal nz");
  const auto a = cheb_coefficients(profile);
  const double x = 1.0 - 2.0 * z;
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * cheb_t(static_cast<int>(k), x);
  return s;
}

}  // namespace rbslip
