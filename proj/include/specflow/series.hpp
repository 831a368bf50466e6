#pragma once

#include <array>
#include <cstddef>

namespace specflow {

// Truncated Taylor series c[0] + c[1] x + ... + c[N] x^N about a fixed point.
template <std::size_t N>
struct Series {
  std::array<double, N + 1> c{};

  static Series constant(double v) {
    Series s;
    s.c[0] = v;
    return s;
  }

  double operator[](std::size_t i) const { return c[i]; }
  double& operator[](std::size_t i) { return c[i]; }

  // j-th derivative at the expansion point
  double derivative(std::size_t j) const {
    double f = 1.0;
    for (std::size_t i = 2; i <= j; ++i) f *= static_cast<double>(i);
    return c[j] * f;
  }

  Series& operator+=(const Series& o) {
    for (std::size_t i = 0; i <= N; ++i) c[i] += o.c[i];
    return *this;
  }
  Series& operator-=(const Series& o) {
    for (std::size_t i = 0; i <= N; ++i) c[i] -= o.c[i];
    return *this;
  }
  Series& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }
};

template <std::size_t N>
Series<N> operator+(Series<N> a, const Series<N>& b) { return a += b; }
template <std::size_t N>
Series<N> operator-(Series<N> a, const Series<N>& b) { return a -= b; }
template <std::size_t N>
Series<N> operator*(Series<N> a, double s) { return a *= s; }
template <std::size_t N>
Series<N> operator*(double s, Series<N> a) { return a *= s; }

template <std::size_t N>
Series<N> operator*(const Series<N>& a, const Series<N>& b) {
  Series<N> r;
  for (std::size_t i = 0; i <= N; ++i)
    for (std::size_t j = 0; i + j <= N; ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

template <std::size_t N>
Series<N> operator/(const Series<N>& a, const Series<N>& b) {
  Series<N> q;
  for (std::size_t i = 0; i <= N; ++i) {
    double s = a.c[i];
    for (std::size_t j = 1; j <= i; ++j) s -= b.c[j] * q.c[i - j];
    q.c[i] = s / b.c[0];
  }
  return q;
}

// d/dx, dropping the top coefficient
template <std::size_t N>
Series<N> deriv(const Series<N>& a) {
  Series<N> r;
  for (std::size_t i = 1; i <= N; ++i) r.c[i - 1] = static_cast<double>(i) * a.c[i];
  return r;
}

}  // namespace specflow
