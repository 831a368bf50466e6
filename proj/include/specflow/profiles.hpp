#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specflow/series.hpp"

namespace specflow {

enum class ProfileKind { binding, dehn_twist };

const char* to_string(ProfileKind k);

// Polynomial in the local variable t = rho - origin.
struct Poly {
  std::vector<double> c;
  double eval(double t, int deriv = 0) const;
};

// Smooth monotone twist: 0 below `lo`, sign*2*pi*N above `hi` (degree-7 smoothstep between).
struct TwistSpec {
  int N = 1;
  int sign = 1;
  double lo = -0.95;
  double hi = 0.95;

  double total() const;
  double tau(double rho, int deriv = 0) const;
  Poly local_poly(double origin) const;  // tau on [lo, hi] in t = rho - origin
};

struct ProfileParams {
  double V = 5.0;
  double eps = 0.01;
  double v = 0.0;
  std::optional<TwistSpec> twist;
};

struct Piece {
  double lo, hi;
  std::string label;
  Poly f, g;  // in t = rho - lo
};

struct ProfileValue {
  double f, f1, f2, g, g1, g2;
  double delta() const { return 0.5 * (f1 * g - f * g1); }
  double delta1() const { return 0.5 * (f2 * g - f * g2); }
};

inline constexpr std::size_t kJetOrder = 9;
using Jet = Series<kJetOrder>;

struct ContactProfile {
  ProfileKind kind = ProfileKind::binding;
  double rho_lo = 0.0;
  double rho_hi = 2.0;
  ProfileParams params;
  std::vector<Piece> pieces;

  const Piece& piece_at(double rho) const;
  ProfileValue eval(double rho) const;
  double f(double rho) const;
  double g(double rho) const;
  // Exact Taylor expansions of f and g about rho.
  void jets(double rho, Jet& f, Jet& g) const;
  // Profile obtained by extending the nearest pole piece over the whole domain.
  ContactProfile disc_model(bool lower_pole) const;
  // Distance below which a point counts as belonging to a pole region.
  double pole_zone() const { return 10.0 * params.eps; }
};

ContactProfile build_binding_profile(double V, double eps = 0.01);
ContactProfile build_dehn_profile(double V, double v, const TwistSpec& twist, double eps = 0.01);
// Dehn twist spec with the switching interval fixed by eps.
TwistSpec make_twist(int N, int sign, double eps = 0.01);

double delta(const ContactProfile& p, double rho);

struct ProfileCheck {
  std::string name;
  bool ok;
  std::string detail;
};

std::vector<ProfileCheck> validate_profile(const ContactProfile& p, int samples = 10000);
// max over sampled rho of 1 + 2|(v-rho)^2 tau'| + 2|(v-rho) tau|
double dehn_required_V(double v, const TwistSpec& twist, double eps, int samples = 10000);

struct ModePoint {
  long k = 0;
  long m = 0;
  double rho_star = 0.0;
  double gamma = 0.0;
};

ModePoint mode_point(const ContactProfile& p, long k, long m);
bool is_pole_mode(const ContactProfile& p, const ModePoint& mp);
// Which pole a pole mode belongs to (true for rho_lo).
bool pole_side_lower(const ContactProfile& p, const ModePoint& mp);

struct TaylorData {
  double gamma = 0.0;
  double rho_star = 0.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0;
  double p1 = 0.0;  // linear coefficient of the diagonal potential; zero at the mode point
};

// Potentials of the radial system as Taylor series in x = rho - rho_star.
struct ModePotentials {
  Jet P, W, C3;
};
ModePotentials mode_potentials(const ContactProfile& p, long k, long m, double rho);

TaylorData taylor_at(const ContactProfile& p, const ModePoint& mp);
// Pole modes: the disc model has constant diagonal potential, so only gamma survives.
TaylorData pole_taylor(const ModePoint& mp);

double integral_delta(const ContactProfile& p);
double integral_delta(const ContactProfile& p, double a, double b);

}  // namespace specflow
