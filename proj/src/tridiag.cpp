#include "specflow/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specflow/errors.hpp"

namespace specflow {

double SymTridiag::norm_bound() const {
  double b = 0.0;
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = std::abs(d[i]);
    if (i > 0) s += std::abs(e[i - 1]);
    if (i + 1 < n) s += std::abs(e[i]);
    b = std::max(b, s);
  }
  return b;
}

std::vector<double> SymTridiag::apply(const std::vector<double>& x) const {
  const std::size_t n = d.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = d[i] * x[i];
    if (i > 0) s += e[i - 1] * x[i - 1];
    if (i + 1 < n) s += e[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

int negcount(const SymTridiag& T, double sigma) {
  const std::size_t n = T.d.size();
  const double tiny = std::numeric_limits<double>::min() * 1e10;
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e2 = i > 0 ? T.e[i - 1] * T.e[i - 1] : 0.0;
    q = (T.d[i] - sigma) - (i > 0 ? e2 / q : 0.0);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

double kth_eigenvalue(const SymTridiag& T, int idx, double tol) {
  const double R = T.norm_bound();
  double a = -R - 1.0, b = R + 1.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if (b - a <= std::max(tol, 4.0 * eps * std::max(std::abs(a), std::abs(b)))) break;
    if (negcount(T, mid) > idx)
      b = mid;
    else
      a = mid;
  }
  return 0.5 * (a + b);
}

namespace {

// Solve (T - lambda I) x = b with partial pivoting (tridiagonal LU, as in LAPACK gtsv).
std::vector<double> shifted_solve(const SymTridiag& T, double lambda, std::vector<double> b) {
  const std::size_t n = T.d.size();
  std::vector<double> dl(T.e), du(T.e), d(n), du2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = T.d[i] - lambda;
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(1.0, T.norm_bound());
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double f = dl[i] / d[i];
      dl[i] = f;
      d[i + 1] -= f * du[i];
      b[i + 1] -= f * b[i];
      du2[i] = 0.0;
    } else {
      const double f = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = f;
      const double tmp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = tmp - f * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
      std::swap(b[i], b[i + 1]);
      b[i + 1] -= f * b[i];
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    if (ii + 1 < n) s -= du[ii] * x[ii + 1];
    if (ii + 2 < n) s -= du2[ii] * x[ii + 2];
    x[ii] = s / d[ii];
  }
  return x;
}

void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  for (double& x : v) x /= s;
}

}  // namespace

std::vector<double> eigenvector(const SymTridiag& T, double lambda) {
  const std::size_t n = T.d.size();
  std::vector<double> v(n);
  // deterministic, generic start vector
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3);
  normalize(v);
  for (int it = 0; it < 4; ++it) {
    v = shifted_solve(T, lambda, v);
    double s = 0.0;
    for (double x : v) s += x * x;
    if (!std::isfinite(s)) throw NumericalError("inverse iteration overflow");
    normalize(v);
    if (residual_norm(T, lambda, v) <= 1e-13 * std::max(1.0, T.norm_bound())) break;
  }
  return v;
}

double residual_norm(const SymTridiag& T, double lambda, const std::vector<double>& v) {
  const std::vector<double> y = T.apply(v);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = y[i] - lambda * v[i];
    s += r * r;
  }
  return std::sqrt(s);
}

}  // namespace specflow
