#include "specflow/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "specflow/errors.hpp"

namespace specflow {

namespace {

constexpr double kPi = std::numbers::pi;

double log_norm2d(double gamma, long k) {
  const double kd = static_cast<double>(k);
  return -0.5 * std::lgamma(kd + 1.0) + 0.5 * (kd + 1.0) * std::log(gamma / 2.0) - 0.5 * std::log(kPi);
}

// Trapezoid inner product on a uniform grid.
double dot(const std::vector<double>& a, const std::vector<double>& b, double h) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  s -= 0.5 * (a.front() * b.front() + a.back() * b.back());
  return s * h;
}

}  // namespace

double kernel1d(const Oscillator1D& osc, double x) {
  if (!(osc.gamma > 0.0)) throw ParameterError("kernel1d requires gamma > 0");
  return std::pow(osc.gamma / kPi, 0.25) * std::exp(-0.5 * osc.gamma * x * x);
}

std::complex<double> kernel2d(const Oscillator2D& osc, std::complex<double> z) {
  if (!(osc.gamma > 0.0)) throw ParameterError("kernel2d requires gamma > 0");
  if (osc.k < 0) throw InvalidModeError("kernel2d: k < 0 has trivial kernel");
  const double a = std::abs(z);
  if (a == 0.0) return osc.k == 0 ? std::exp(log_norm2d(osc.gamma, 0)) : 0.0;
  const double kd = static_cast<double>(osc.k);
  const double lmod = log_norm2d(osc.gamma, osc.k) + kd * std::log(a) - 0.25 * osc.gamma * a * a;
  return std::polar(std::exp(lmod), kd * std::arg(z));
}

double annihilation_residual_1d(double gamma, int points) {
  const Oscillator1D osc{gamma, 0.0};
  const double s = 1.0 / std::sqrt(gamma);
  const double h = 1e-3 * s;
  const double peak = kernel1d(osc, 0.0);
  double worst = 0.0;
  for (int j = 0; j < points; ++j) {
    const double x = -6.0 * s + 12.0 * s * j / (points - 1);
    const double d = (-kernel1d(osc, x + 2 * h) + 8 * kernel1d(osc, x + h) - 8 * kernel1d(osc, x - h) +
                      kernel1d(osc, x - 2 * h)) /
                     (12 * h);
    worst = std::max(worst, std::abs(d + gamma * x * kernel1d(osc, x)));
  }
  return worst / (std::sqrt(gamma) * peak);
}

double annihilation_residual_2d(double gamma, long k, int points) {
  const Oscillator2D osc{gamma, k};
  const double s = 1.0 / std::sqrt(gamma);
  const double h = 1e-3 / std::sqrt(gamma * (1.0 + static_cast<double>(k)));
  const double r_peak = std::sqrt(2.0 * static_cast<double>(k) / gamma);
  const double r_max = r_peak + 6.0 * s;
  const double peak = std::abs(kernel2d(osc, {r_peak, 0.0}));
  using C = std::complex<double>;
  auto xi = [&](double x, double y) { return kernel2d(osc, C(x, y)); };
  double worst = 0.0;
  const int n_ang = 7;
  for (int j = 0; j < points; ++j) {
    const double rad = r_max * (j + 0.5) / points;
    for (int a = 0; a < n_ang; ++a) {
      const double th = 2.0 * kPi * (a + 0.25) / n_ang;
      const double x = rad * std::cos(th), y = rad * std::sin(th);
      const C dx = (-xi(x + 2 * h, y) + 8.0 * xi(x + h, y) - 8.0 * xi(x - h, y) + xi(x - 2 * h, y)) / (12 * h);
      const C dy = (-xi(x, y + 2 * h) + 8.0 * xi(x, y + h) - 8.0 * xi(x, y - h) + xi(x, y - 2 * h)) / (12 * h);
      const C L = dx + C(0, 1) * dy + 0.5 * gamma * C(x, y) * xi(x, y);
      worst = std::max(worst, std::abs(L));
    }
  }
  return worst / (std::sqrt(gamma) * peak);
}

GreenReport green1d_bound_check(double gamma, const std::vector<double>& x, const std::vector<double>& eta) {
  if (!(gamma > 0.0)) throw ParameterError("green1d_bound_check requires gamma > 0");
  if (x.size() != eta.size() || x.size() < 3) throw ParameterError("green1d_bound_check: bad sample arrays");
  const std::size_t n = x.size();
  const double h = x[1] - x[0];
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(x[i] - x[i - 1] - h) > 1e-9 * std::abs(h)) throw ParameterError("green1d_bound_check: grid must be uniform");
  if (gamma * std::max(x.front() * x.front(), x.back() * x.back()) > 1400.0)
    throw std::range_error("green1d_bound_check: exp(gamma x^2/2) overflows on this window");

  const Oscillator1D osc{gamma, 0.0};
  std::vector<double> xi(n);
  for (std::size_t i = 0; i < n; ++i) xi[i] = kernel1d(osc, x[i]);
  const double xn = dot(xi, xi, h);
  const double c = dot(eta, xi, h) / xn;
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = eta[i] - c * xi[i];

  // u(x) = int_{-inf}^x exp(-gamma (x^2 - t^2) / 2) rhs(t) dt, marched cell by cell.
  std::vector<double> u(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double E = std::exp(-0.5 * gamma * (x[i + 1] * x[i + 1] - x[i] * x[i]));
    u[i + 1] = E * u[i] + 0.5 * h * (E * rhs[i] + rhs[i + 1]);
  }
  const double cu = dot(u, xi, h) / xn;
  for (std::size_t i = 0; i < n; ++i) u[i] -= cu * xi[i];

  double res2 = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d = (u[i + 1] - u[i - 1]) / (2 * h) + gamma * x[i] * u[i] - rhs[i];
    res2 += d * d * h;
  }
  const double en = dot(eta, eta, h);
  GreenReport rep;
  rep.ratio = en > 0.0 ? gamma * dot(u, u, h) / en : 0.0;
  rep.overlap = std::abs(dot(u, xi, h)) / std::sqrt(xn);
  rep.residual = en > 0.0 ? std::sqrt(res2 / en) : std::sqrt(res2);
  return rep;
}

GreenReport green1d_random_trial(double gamma, std::uint64_t seed, int points) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double s = 1.0 / std::sqrt(gamma);
  std::vector<double> x(static_cast<std::size_t>(points)), eta(x.size(), 0.0);
  for (int i = 0; i < points; ++i) x[static_cast<std::size_t>(i)] = -12.0 * s + 24.0 * s * i / (points - 1);
  const int bumps = 1 + static_cast<int>(U(rng) * 3.0);
  for (int b = 0; b < bumps; ++b) {
    const double width = (0.2 + 1.8 * U(rng)) * s;
    const double center = (-4.0 + 8.0 * U(rng)) * s;
    const double amp = (U(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 1.5 * U(rng));
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = (x[i] - center) / width;
      if (std::abs(t) < 1.0) eta[i] += amp * std::pow(1.0 - t * t, 3);
    }
  }
  return green1d_bound_check(gamma, x, eta);
}

double PolyX::operator()(double x) const {
  double s = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) s = s * x + c[i];
  return s;
}

double second_order_lambda(const TaylorData& td, double r) {
  if (!(td.gamma > 0.0)) throw ParameterError("second_order_lambda requires gamma > 0");
  return 0.5 * r - 0.5 * td.gamma + td.r1 / (2.0 * td.gamma);
}

double SecondOrderModel::lambda(double r) const { return second_order_lambda(taylor, r); }

PolyX SecondOrderModel::a1() const {
  const auto& t = taylor;
  return {{0.0, -t.c1, 0.0, -t.r2 / 3.0}};
}

PolyX SecondOrderModel::a2(double r) const {
  const auto& t = taylor;
  const double g = t.gamma;
  const double cc3 = 1.0 + t.c3;
  const double A = 0.5 * (t.c1 * t.c1 - t.c2) - (t.r1 / (4.0 * g)) * (r - g + t.r1 / (2.0 * g) + cc3);
  const double B = t.c1 * t.r2 / 3.0 - t.r4 / 4.0 - t.r1 * t.r1 / (8.0 * g);
  const double Cc = t.r2 * t.r2 / 18.0;
  // A (x^2 - 1/2g) + B (x^4 - 3/4g^2) + C (x^6 - 15/8g^3)
  const double c0 = -A / (2.0 * g) - 3.0 * B / (4.0 * g * g) - 15.0 * Cc / (8.0 * g * g * g);
  return {{c0, 0.0, A, 0.0, B, 0.0, Cc}};
}

PolyX SecondOrderModel::b1() const {
  const auto& t = taylor;
  return {{0.0, -t.r1 / (2.0 * t.gamma)}};
}

PolyX SecondOrderModel::b2() const {
  const auto& t = taylor;
  const double g = t.gamma;
  const double A = (t.c1 * t.r1 - t.r3) / (2.0 * g) + t.r1 * t.r2 / (4.0 * g * g);
  const double B = t.r1 * t.r2 / (6.0 * g);
  return {{A / (2.0 * g), 0.0, A, 0.0, B}};
}

double cutoff(double s) {
  const double a = std::abs(s);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  const double u = 2.0 * (1.0 - a);
  return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
}

SectionValue second_order_section(const TaylorData& td, double r, double x, double half_width) {
  if (!(td.gamma > 0.0)) throw ParameterError("second_order_section requires gamma > 0");
  const double w = half_width > 0.0 ? half_width : 16.0 / std::sqrt(td.gamma);
  const SecondOrderModel M{td};
  const double base = cutoff(x / w) * kernel1d({td.gamma, 0.0}, x);
  return {(1.0 + M.a1()(x) + M.a2(r)(x)) * base, (M.b1()(x) + M.b2()(x)) * base};
}

DecayResult decay_bound(long k, long m, double z_abs, double eps, double C) {
  if (k < 0) throw DomainError("decay_bound requires k >= 0");
  const double kd = static_cast<double>(k), md = static_cast<double>(m);
  const double need = (1.0 / (32.0 * eps * eps) - 1.0) * kd;
  if (md < need - 1e-9)
    throw DomainError("decay_bound requires m >= (1/(32 eps^2) - 1) k = " + std::to_string(need));
  if (k + m <= 0) throw DomainError("decay_bound requires k + m > 0");
  if (z_abs < 9.0 * eps) throw DomainError("decay_bound requires |z| >= 9 eps");
  const double gamma = kd + md;
  const double lv = -std::lgamma(kd + 1.0) + (kd + 1.0) * std::log(gamma / 2.0) + 2.0 * kd * std::log(z_abs) -
                    0.5 * gamma * z_abs * z_abs - std::log(4.0 * kPi * kPi);
  const double lb = std::log(C) - gamma * z_abs * z_abs / C;
  return {std::exp(lv), std::exp(lb), lv <= lb};
}

}  // namespace specflow
