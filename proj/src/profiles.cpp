#include "specflow/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "specflow/errors.hpp"

namespace specflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Poly quintic_hermite(double L, const double y0[3], const double y1[3]) {
  const double c0 = y0[0], c1 = y0[1], c2 = 0.5 * y0[2];
  const double R0 = y1[0] - (c0 + c1 * L + c2 * L * L);
  const double R1 = y1[1] - (c1 + 2.0 * c2 * L);
  const double R2 = y1[2] - 2.0 * c2;
  const double L2 = L * L, L3 = L2 * L;
  return Poly{{c0, c1, c2, (10.0 * R0 - 4.0 * R1 * L + 0.5 * R2 * L2) / L3,
               (-15.0 * R0 + 7.0 * R1 * L - R2 * L2) / (L3 * L),
               (6.0 * R0 - 3.0 * R1 * L + 0.5 * R2 * L2) / (L3 * L2)}};
}

// Re-expand a polynomial given in t = rho - from into t' = rho - to.
Poly shift(const Poly& p, double from, double to) {
  const std::size_t n = p.c.size();
  Poly out{std::vector<double>(n, 0.0)};
  double fact = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0) fact *= static_cast<double>(j);
    out.c[j] = p.eval(to - from, static_cast<int>(j)) / fact;
  }
  return out;
}

Poly mul(const Poly& a, const Poly& b) {
  Poly r{std::vector<double>(a.c.size() + b.c.size() - 1, 0.0)};
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

Poly add(const Poly& a, const Poly& b) {
  Poly r{std::vector<double>(std::max(a.c.size(), b.c.size()), 0.0)};
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  return r;
}

void end_values(const Poly& p, double t, double out[3]) {
  for (int d = 0; d < 3; ++d) out[d] = p.eval(t, d);
}

Piece join(double lo, double hi, const Piece& left, const Piece& right, std::string label) {
  double fl[3], gl[3], fr[3], gr[3];
  end_values(left.f, lo - left.lo, fl);
  end_values(left.g, lo - left.lo, gl);
  end_values(right.f, hi - right.lo, fr);
  end_values(right.g, hi - right.lo, gr);
  return Piece{lo, hi, std::move(label), quintic_hermite(hi - lo, fl, fr),
               quintic_hermite(hi - lo, gl, gr)};
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void check_positive(const ContactProfile& p) {
  const int n = 10000;
  for (int i = 1; i < n; ++i) {
    const double rho = p.rho_lo + (p.rho_hi - p.rho_lo) * i / n;
    const ProfileValue pv = p.eval(rho);
    if (!(pv.delta() > 0.0))
      throw ConstructionError("profile construction: Delta <= 0 at rho=" + fmt(rho));
    if (!(pv.f > 0.0))
      throw ConstructionError("profile construction: f <= 0 at rho=" + fmt(rho));
  }
}

}  // namespace

const char* to_string(ProfileKind k) {
  return k == ProfileKind::binding ? "binding" : "dehn_twist";
}

double Poly::eval(double t, int deriv) const {
  const int n = static_cast<int>(c.size());
  if (deriv >= n) return 0.0;
  double s = 0.0;
  for (int i = n - 1; i >= deriv; --i) {
    double coef = c[i];
    for (int j = 0; j < deriv; ++j) coef *= static_cast<double>(i - j);
    s = s * t + coef;
  }
  return s;
}

double TwistSpec::total() const { return sign * kTwoPi * N; }

double TwistSpec::tau(double rho, int deriv) const {
  if (rho <= lo) return 0.0;
  if (rho >= hi) return deriv == 0 ? total() : 0.0;
  return local_poly(lo).eval(rho - lo, deriv);
}

Poly TwistSpec::local_poly(double origin) const {
  const double L = hi - lo;
  // 35u^4 - 84u^5 + 70u^6 - 20u^7, u = (rho - lo)/L
  const double s[8] = {0, 0, 0, 0, 35, -84, 70, -20};
  Poly p{std::vector<double>(8, 0.0)};
  double scale = total();
  for (int i = 0; i < 8; ++i) {
    p.c[i] = scale * s[i];
    scale /= L;
  }
  return origin == lo ? p : shift(p, lo, origin);
}

TwistSpec make_twist(int N, int sign, double eps) {
  if (N < 1) throw ParameterError("twist power N must be a positive integer");
  if (sign != 1 && sign != -1) throw ParameterError("twist sign must be +1 or -1");
  return TwistSpec{N, sign, -1.0 + 5.0 * eps, 1.0 - 5.0 * eps};
}

const Piece& ContactProfile::piece_at(double rho) const {
  if (!(rho >= rho_lo && rho <= rho_hi))
    throw DomainError("rho=" + fmt(rho) + " outside profile domain [" + fmt(rho_lo) + ", " +
                      fmt(rho_hi) + "]");
  for (const auto& pc : pieces)
    if (rho < pc.hi) return pc;
  return pieces.back();
}

ProfileValue ContactProfile::eval(double rho) const {
  const Piece& pc = piece_at(rho);
  const double t = rho - pc.lo;
  return {pc.f.eval(t), pc.f.eval(t, 1), pc.f.eval(t, 2),
          pc.g.eval(t), pc.g.eval(t, 1), pc.g.eval(t, 2)};
}

double ContactProfile::f(double rho) const {
  const Piece& pc = piece_at(rho);
  return pc.f.eval(rho - pc.lo);
}

double ContactProfile::g(double rho) const {
  const Piece& pc = piece_at(rho);
  return pc.g.eval(rho - pc.lo);
}

void ContactProfile::jets(double rho, Jet& fj, Jet& gj) const {
  const Piece& pc = piece_at(rho);
  const double t = rho - pc.lo;
  double fact = 1.0;
  for (std::size_t j = 0; j <= kJetOrder; ++j) {
    if (j > 0) fact *= static_cast<double>(j);
    fj[j] = pc.f.eval(t, static_cast<int>(j)) / fact;
    gj[j] = pc.g.eval(t, static_cast<int>(j)) / fact;
  }
}

ContactProfile ContactProfile::disc_model(bool lower_pole) const {
  const Piece& src = lower_pole ? pieces.front() : pieces.back();
  ContactProfile d = *this;
  d.pieces = {Piece{rho_lo, rho_hi, src.label + "_extended", shift(src.f, src.lo, rho_lo),
                    shift(src.g, src.lo, rho_lo)}};
  return d;
}

ContactProfile build_binding_profile(double V, double eps) {
  if (!(V > 1.0)) throw ParameterError("binding profile requires V > 1");
  if (!(eps > 0.0 && eps <= 0.01)) throw ParameterError("eps must lie in (0, 0.01]");
  ContactProfile p;
  p.kind = ProfileKind::binding;
  p.rho_lo = 0.0;
  p.rho_hi = 2.0;
  p.params = ProfileParams{V, eps, 0.0, std::nullopt};

  const double a1 = 10.0 * eps, b1 = 1.0 - 5.0 * eps, a2 = 1.0 + 15.0 * eps, b2 = 2.0 - 10.0 * eps;
  Piece pole_lo{0.0, a1, "pole_lo", Poly{{0.0, 0.0, 1.0}}, Poly{{2.0, 0.0, -1.0}}};
  Piece flat{b1, a2, "flat", Poly{{V}}, Poly{{2.0 - b1, -1.0}}};
  // (2 - rho)^2 and -2 + (2 - rho)^2 with t = rho - b2
  const double u = 2.0 - b2;
  Piece pole_hi{b2, 2.0, "pole_hi", Poly{{u * u, -2.0 * u, 1.0}}, Poly{{-2.0 + u * u, -2.0 * u, 1.0}}};
  Piece j1 = join(a1, b1, pole_lo, flat, "join_lo");
  Piece j2 = join(a2, b2, flat, pole_hi, "join_hi");
  p.pieces = {pole_lo, j1, flat, j2, pole_hi};
  check_positive(p);
  return p;
}

double dehn_required_V(double v, const TwistSpec& tw, double eps, int samples) {
  const double a = -1.0 - 15.0 * eps, b = 1.0 + 15.0 * eps;
  double req = 0.0;
  for (int i = 1; i < samples; ++i) {
    const double rho = a + (b - a) * i / samples;
    const double w = v - rho;
    req = std::max(req, 1.0 + 2.0 * std::abs(w * w * tw.tau(rho, 1)) + 2.0 * std::abs(w * tw.tau(rho)));
  }
  return req;
}

ContactProfile build_dehn_profile(double V, double v, const TwistSpec& tw, double eps) {
  if (!(eps > 0.0 && eps <= 0.01)) throw ParameterError("eps must lie in (0, 0.01]");
  const double req = dehn_required_V(v, tw, eps);
  if (V < req)
    throw ValidationError("Dehn profile: V=" + fmt(V) +
                          " violates V >= 1 + 2|(v-rho)^2 tau'| + 2|(v-rho) tau| (needs V >= " +
                          fmt(req) + ")");
  ContactProfile p;
  p.kind = ProfileKind::dehn_twist;
  p.rho_lo = -2.0;
  p.rho_hi = 2.0;
  p.params = ProfileParams{V, eps, v, tw};

  const double c = 2.0 * std::abs(v) + 2.0;
  const double e10 = 10.0 * eps, e15 = 15.0 * eps;
  // g = 2(v - rho) written in t = rho - origin
  auto affine_g = [&](double origin) { return Poly{{2.0 * (v - origin), -2.0}}; };

  Piece pole_lo{-2.0, -2.0 + e10, "pole_lo", Poly{{0.0, 0.0, 1.0}}, Poly{{c, 0.0, -1.0}}};
  Piece flat_lo{-1.0 - e15, tw.lo, "untwisted", Poly{{V}}, affine_g(-1.0 - e15)};
  // f = V - 2(v - rho) tau(rho) on [tw.lo, tw.hi]
  Poly tau_p = tw.local_poly(tw.lo);
  Poly f_tw = add(Poly{{V}}, mul(Poly{{-2.0 * (v - tw.lo), 2.0}}, tau_p));
  Piece twist{tw.lo, tw.hi, "twist", f_tw, affine_g(tw.lo)};
  const double T = tw.total();
  Piece flat_hi{tw.hi, 1.0 + e15, "twisted",
                Poly{{V - 2.0 * (v - tw.hi) * T, 2.0 * T}}, affine_g(tw.hi)};
  const double u = e10;  // 2 - rho at the start of the upper pole piece
  Piece pole_hi{2.0 - e10, 2.0, "pole_hi", Poly{{u * u, -2.0 * u, 1.0}},
                Poly{{-c + u * u, -2.0 * u, 1.0}}};
  Piece j1 = join(-2.0 + e10, -1.0 - e15, pole_lo, flat_lo, "join_lo");
  Piece j2 = join(1.0 + e15, 2.0 - e10, flat_hi, pole_hi, "join_hi");
  p.pieces = {pole_lo, j1, flat_lo, twist, flat_hi, j2, pole_hi};
  check_positive(p);
  return p;
}

double delta(const ContactProfile& p, double rho) { return p.eval(rho).delta(); }

std::vector<ProfileCheck> validate_profile(const ContactProfile& p, int samples) {
  std::vector<ProfileCheck> out;
  double min_f = INFINITY, min_d = INFINITY, max_dq = -INFINITY;
  double at_f = 0, at_d = 0, at_q = 0;
  for (int i = 1; i < samples; ++i) {
    const double rho = p.rho_lo + (p.rho_hi - p.rho_lo) * i / samples;
    const ProfileValue pv = p.eval(rho);
    if (pv.f < min_f) min_f = pv.f, at_f = rho;
    if (pv.delta() < min_d) min_d = pv.delta(), at_d = rho;
    // (g/f)' = -2 Delta / f^2
    const double dq = (pv.g1 * pv.f - pv.g * pv.f1) / (pv.f * pv.f);
    if (dq > max_dq) max_dq = dq, at_q = rho;
  }
  out.push_back({"f_positive", min_f > 0.0, "min f=" + fmt(min_f) + " at rho=" + fmt(at_f)});
  out.push_back({"delta_positive", min_d > 0.0, "min Delta=" + fmt(min_d) + " at rho=" + fmt(at_d)});
  out.push_back({"g_over_f_decreasing", max_dq < 0.0,
                 "max (g/f)'=" + fmt(max_dq) + " at rho=" + fmt(at_q)});

  const ProfileValue lo = p.eval(p.rho_lo), hi = p.eval(p.rho_hi);
  const bool quad = lo.f == 0.0 && hi.f == 0.0 && std::abs(lo.f2 - 2.0) < 1e-12 &&
                    std::abs(hi.f2 - 2.0) < 1e-12;
  out.push_back({"pole_quadratic", quad,
                 "f''(lo)=" + fmt(lo.f2) + " f''(hi)=" + fmt(hi.f2)});

  const double e = p.params.eps;
  double dev = 0.0;
  auto scan = [&](double a, double b, auto fexact, auto gexact) {
    for (int i = 0; i <= 200; ++i) {
      const double rho = a + (b - a) * i / 200.0;
      dev = std::max(dev, std::abs(p.f(rho) - fexact(rho)));
      dev = std::max(dev, std::abs(p.g(rho) - gexact(rho)));
    }
  };
  const double V = p.params.V;
  if (p.kind == ProfileKind::binding) {
    scan(0.0, 10 * e, [](double r) { return r * r; }, [](double r) { return 2 - r * r; });
    scan(1 - 5 * e, 1 + 15 * e, [&](double) { return V; }, [](double r) { return 2 - r; });
    scan(2 - 10 * e, 2.0, [](double r) { return (2 - r) * (2 - r); },
         [](double r) { return -2 + (2 - r) * (2 - r); });
  } else {
    const double v = p.params.v, c = 2 * std::abs(v) + 2;
    const TwistSpec& tw = *p.params.twist;
    scan(-1 - 15 * e, 1 + 15 * e, [&](double r) { return V - 2 * (v - r) * tw.tau(r); },
         [&](double r) { return 2 * (v - r); });
    scan(2 - 10 * e, 2.0, [](double r) { return (2 - r) * (2 - r); },
         [&](double r) { return -c + (2 - r) * (2 - r); });
    scan(-2.0, -2 + 10 * e, [](double r) { return (r + 2) * (r + 2); },
         [&](double r) { return c - (r + 2) * (r + 2); });
    const double req = dehn_required_V(v, tw, e, samples);
    out.push_back({"dehn_contact_condition", V >= req, "V=" + fmt(V) + " required=" + fmt(req)});
  }
  out.push_back({"mandated_pieces", dev < 1e-12, "max deviation=" + fmt(dev)});

  // C2 continuity across junctions
  double jump = 0.0;
  for (std::size_t i = 0; i + 1 < p.pieces.size(); ++i) {
    const Piece& a = p.pieces[i];
    const Piece& b = p.pieces[i + 1];
    for (int d = 0; d < 3; ++d) {
      jump = std::max(jump, std::abs(a.f.eval(a.hi - a.lo, d) - b.f.eval(0.0, d)));
      jump = std::max(jump, std::abs(a.g.eval(a.hi - a.lo, d) - b.g.eval(0.0, d)));
    }
  }
  out.push_back({"c2_junctions", jump < 1e-9, "max jump=" + fmt(jump)});
  return out;
}

ModePoint mode_point(const ContactProfile& p, long k, long m) {
  if (k == 0 && m == 0) throw InvalidModeError("mode (0,0) has no localization point");
  if (k < 0) throw InvalidModeError("k must be nonnegative");
  ModePoint mp{k, m, 0.0, 0.0};
  if (k == 0) {
    const double rho = m > 0 ? p.rho_lo : p.rho_hi;
    mp.rho_star = rho;
    mp.gamma = 2.0 * std::abs(static_cast<double>(m)) / std::abs(p.g(rho));
    return mp;
  }
  const double kd = static_cast<double>(k), md = static_cast<double>(m);
  auto h = [&](double rho) { return kd * p.g(rho) - md * p.f(rho); };
  // h > 0 at the lower pole (f=0, g>0) and h < 0 at the upper pole
  double a = p.rho_lo, b = p.rho_hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if (h(mid) > 0.0)
      a = mid;
    else
      b = mid;
    if (b - a < 1e-15) break;
  }
  mp.rho_star = std::abs(h(a)) <= std::abs(h(b)) ? a : b;
  mp.gamma = 2.0 * kd / p.f(mp.rho_star);
  return mp;
}

bool is_pole_mode(const ContactProfile& p, const ModePoint& mp) {
  return mp.rho_star - p.rho_lo <= p.pole_zone() || p.rho_hi - mp.rho_star <= p.pole_zone();
}

bool pole_side_lower(const ContactProfile& p, const ModePoint& mp) {
  return mp.rho_star - p.rho_lo <= p.rho_hi - mp.rho_star;
}

ModePotentials mode_potentials(const ContactProfile& p, long k, long m, double rho) {
  Jet F, G;
  p.jets(rho, F, G);
  const Jet F1 = deriv(F), G1 = deriv(G), F2 = deriv(F1), G2 = deriv(G1);
  const Jet D = 0.5 * (F1 * G - F * G1);
  const Jet D1 = deriv(D);
  const double kd = static_cast<double>(k), md = static_cast<double>(m);
  ModePotentials out;
  out.P = (kd * G1 - md * F1) / (2.0 * D);
  out.W = (kd * G - md * F) / D + D1 / (2.0 * D);
  out.C3 = (F2 * G1 - F1 * G2) / (8.0 * D);
  return out;
}

TaylorData taylor_at(const ContactProfile& p, const ModePoint& mp) {
  if (is_pole_mode(p, mp))
    throw PoleModeError("mode (" + std::to_string(mp.k) + "," + std::to_string(mp.m) +
                        ") lies within the pole region; use the disc model (pole_taylor)");
  const ModePotentials mpot = mode_potentials(p, mp.k, mp.m, mp.rho_star);
  TaylorData td;
  td.rho_star = mp.rho_star;
  td.gamma = mp.gamma;
  td.p1 = mpot.P[1];
  td.r1 = mpot.P[2];
  td.r3 = mpot.P[3];
  td.c1 = -mpot.W[0];
  td.c2 = -(mpot.W[1] + mp.gamma);
  td.r2 = -mpot.W[2];
  td.r4 = -mpot.W[3];
  td.c3 = mpot.C3[0];
  return td;
}

TaylorData pole_taylor(const ModePoint& mp) {
  TaylorData td;
  td.gamma = mp.gamma;
  td.rho_star = mp.rho_star;
  return td;
}

double integral_delta(const ContactProfile& p, double a, double b) {
  static const double x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                              -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                              0.7966664774136267,  0.9602898564975363};
  static const double w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                              0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                              0.2223810344533745, 0.1012285362903763};
  if (a > b) return -integral_delta(p, b, a);
  auto rule = [&](double lo, double hi, int parts) {
    double s = 0.0;
    const double h = (hi - lo) / parts;
    for (int j = 0; j < parts; ++j) {
      const double c = lo + (j + 0.5) * h;
      for (int i = 0; i < 8; ++i) s += 0.5 * h * w[i] * delta(p, c + 0.5 * h * x[i]);
    }
    return s;
  };
  double total = 0.0;
  // Delta is a polynomial on each piece; split at junctions and refine until stable.
  for (const auto& pc : p.pieces) {
    const double lo = std::max(a, pc.lo), hi = std::min(b, pc.hi);
    if (hi <= lo) continue;
    int parts = 2;
    double prev = rule(lo, hi, parts);
    for (;;) {
      parts *= 2;
      const double cur = rule(lo, hi, parts);
      if (std::abs(cur - prev) <= 1e-13 * std::max(1.0, std::abs(cur)) || parts >= 4096) {
        prev = cur;
        break;
      }
      prev = cur;
    }
    total += prev;
  }
  return total;
}

double integral_delta(const ContactProfile& p) { return integral_delta(p, p.rho_lo, p.rho_hi); }

}  // namespace specflow
