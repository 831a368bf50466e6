#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "specflow/profiles.hpp"

namespace specflow {

struct Oscillator1D {
  double gamma = 1.0;
  double center = 0.0;
};

struct Oscillator2D {
  double gamma = 1.0;
  long k = 0;
};

// (gamma/pi)^(1/4) exp(-gamma x^2 / 2), x measured from the center.
double kernel1d(const Oscillator1D& osc, double x);
// Unit L2 norm on the plane: z^k exp(-gamma |z|^2 / 4) up to the log-Gamma normalization.
std::complex<double> kernel2d(const Oscillator2D& osc, std::complex<double> z);

// max |(d/dx + gamma x) xi| / (sqrt(gamma) max |xi|) over `points` samples in |x| <= 6/sqrt(gamma),
// derivative by a five-point stencil.
double annihilation_residual_1d(double gamma, int points = 201);
// Same for (2 d/dzbar + (gamma/2) z) on the 2-D kernel, over a polar sample set.
double annihilation_residual_2d(double gamma, long k, int points = 201);

struct GreenReport {
  double ratio = 0.0;     // gamma * int|u|^2 / int|eta|^2
  double overlap = 0.0;   // |<u, xi>|
  double residual = 0.0;  // L2 residual of the ODE, relative to |eta|
};

// Solves (d/dx + gamma x) u = eta - <eta, xi> xi with u orthogonal to xi on a uniform grid.
GreenReport green1d_bound_check(double gamma, const std::vector<double>& x, const std::vector<double>& eta);

// Sum of 1-3 smooth bumps with random centers, widths and signs inside |x| <= 4/sqrt(gamma).
GreenReport green1d_random_trial(double gamma, std::uint64_t seed, int points = 4001);

// Polynomial in x with coefficients c[0] + c[1] x + ...
struct PolyX {
  std::vector<double> c;
  double operator()(double x) const;
};

struct SecondOrderModel {
  TaylorData taylor;

  double lambda(double r) const;
  PolyX a1() const;
  PolyX a2(double r) const;
  PolyX b1() const;
  PolyX b2() const;
};

double second_order_lambda(const TaylorData& td, double r);

struct SectionValue {
  double alpha;
  double beta;
};

// C^2 cutoff: 1 on |s| <= 1/2, 0 on |s| >= 1.
double cutoff(double s);

// Model section at x = rho - rho_star; the cutoff is applied on the scale `half_width`
// (default 16/sqrt(gamma)).
SectionValue second_order_section(const TaylorData& td, double r, double x, double half_width = 0.0);

struct DecayResult {
  double value;  // |xi|^2 with the (phi, t) torus volume 4 pi^2 included
  double bound;  // C exp(-gamma |z|^2 / C)
  bool holds;
};

inline constexpr double kDecayConstant = 100.0;

DecayResult decay_bound(long k, long m, double z_abs, double eps = 0.01, double C = kDecayConstant);

}  // namespace specflow
