#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "specflow/errors.hpp"
#include "specflow/profiles.hpp"

using namespace specflow;

namespace {

const ContactProfile& binding5() {
  static const ContactProfile p = build_binding_profile(5.0, 0.01);
  return p;
}

const ContactProfile& dehn30() {
  static const ContactProfile p = build_dehn_profile(30.0, 0.5, make_twist(1, 1, 0.01), 0.01);
  return p;
}

// W(rho) = (k g' - m f') / (2 Delta) straight from the profile values.
double w_direct(const ContactProfile& p, long k, long m, double rho) {
  const ProfileValue v = p.eval(rho);
  return (k * v.g1 - m * v.f1) / (2.0 * v.delta());
}

}  // namespace

TEST_CASE("binding profile mandated values") {
  const auto& p = binding5();
  CHECK(std::abs(p.f(0.05) - 0.0025) < 1e-15);
  CHECK(std::abs(p.g(0.05) - 1.9975) < 1e-15);
  CHECK(std::abs(delta(p, 0.05) - 0.1) < 1e-14);
  CHECK(std::abs(p.f(1.0) - 5.0) < 1e-14);
  CHECK(std::abs(p.g(1.0) - 1.0) < 1e-14);
  CHECK(std::abs(delta(p, 1.0) - 2.5) < 1e-14);
  CHECK(std::abs(delta(p, 2.0)) < 1e-14);
  CHECK(std::abs(p.f(2.0)) < 1e-14);
  for (double rho = 0.0; rho <= 0.1; rho += 0.01) {
    CHECK(std::abs(p.f(rho) - rho * rho) < 1e-15);
    CHECK(std::abs(p.g(rho) - (2.0 - rho * rho)) < 1e-15);
  }
  for (double rho = 0.95; rho <= 1.15; rho += 0.02) {
    CHECK(std::abs(p.f(rho) - 5.0) < 1e-13);
    CHECK(std::abs(p.g(rho) - (2.0 - rho)) < 1e-13);
  }
}

TEST_CASE("profile domain and parameter errors") {
  CHECK_THROWS_AS(delta(binding5(), 2.5), DomainError);
  CHECK_THROWS_AS(delta(binding5(), -0.1), DomainError);
  CHECK_THROWS_AS(build_binding_profile(0.5, 0.01), ParameterError);
  CHECK_THROWS_AS(build_binding_profile(5.0, 0.02), ParameterError);
  CHECK_THROWS_AS(build_dehn_profile(2.0, 0.5, make_twist(1, 1, 0.01), 0.01), ValidationError);
  CHECK_THROWS_AS(make_twist(0, 1), ParameterError);
  CHECK_THROWS_AS(mode_point(binding5(), 0, 0), InvalidModeError);
}

TEST_CASE("Dehn profile mandated pieces") {
  const auto& p = dehn30();
  const double V = 30.0, v = 0.5;
  for (double rho = -1.1; rho <= -0.96; rho += 0.02) {
    CHECK(std::abs(p.f(rho) - V) < 1e-12);
    CHECK(std::abs(p.g(rho) - 2.0 * (v - rho)) < 1e-12);
  }
  for (double rho = 0.96; rho <= 1.1; rho += 0.02)
    CHECK(std::abs(p.f(rho) - (V - 4.0 * std::numbers::pi * (v - rho))) < 1e-11);
  for (double rho = 1.91; rho < 2.0; rho += 0.02) {
    CHECK(std::abs(p.f(rho) - (2.0 - rho) * (2.0 - rho)) < 1e-12);
    CHECK(std::abs(p.g(rho) - (-2.0 * std::abs(v) - 2.0 + (2.0 - rho) * (2.0 - rho))) < 1e-12);
  }
  double min_delta = 1e300;
  for (int i = 1; i < 40000; ++i) min_delta = std::min(min_delta, delta(p, -2.0 + 4.0 * i / 40000.0));
  CHECK(min_delta > 0.0);
}

TEST_CASE("twist function is monotone and saturates") {
  const TwistSpec t = make_twist(2, -1, 0.01);
  CHECK(t.tau(-1.0) == 0.0);
  CHECK(std::abs(t.tau(1.0) + 4.0 * std::numbers::pi) < 1e-12);
  for (double rho = -1.0; rho <= 1.0; rho += 0.001) CHECK(t.tau(rho, 1) <= 1e-12);
}

TEST_CASE("sampled profile invariants") {
  for (const ContactProfile* p : {&binding5(), &dehn30()}) {
    for (const auto& c : validate_profile(*p)) {
      INFO(c.name << ": " << c.detail);
      CHECK(c.ok);
    }
    const int n = 10000;
    for (int i = 1; i < n; ++i) {
      const double rho = p->rho_lo + (p->rho_hi - p->rho_lo) * i / n;
      CHECK(p->f(rho) > 0.0);
      CHECK(delta(*p, rho) > 0.0);
    }
  }
}

TEST_CASE("mode_point examples") {
  const auto& p = binding5();
  const ModePoint a = mode_point(p, 0, 5);
  CHECK(a.rho_star == 0.0);
  CHECK(a.gamma == 5.0);
  const ModePoint b = mode_point(p, 1, 399);
  CHECK(std::abs(b.rho_star - std::sqrt(2.0 / 400.0)) < 1e-12);
  CHECK(std::abs(b.gamma - 400.0) < 1e-8);
  const ModePoint c = mode_point(p, 5, 1);
  CHECK(std::abs(c.rho_star - 1.0) < 1e-12);
  CHECK(std::abs(c.gamma - 2.0) < 1e-12);
  // rho_star = 2 - V m / k on the flat piece
  for (long k = 10; k <= 300; k += 10)
    for (long m = 0; m <= k; ++m) {
      const double closed = 2.0 - 5.0 * static_cast<double>(m) / static_cast<double>(k);
      if (closed < 0.96 || closed > 1.14) continue;
      CHECK(std::abs(mode_point(p, k, m).rho_star - closed) < 1e-12);
    }
  const ModePoint d = mode_point(dehn30(), 0, 3);
  CHECK(std::abs(d.gamma - 3.0 / 1.5) < 1e-12);
}

TEST_CASE("mode_point root and gamma identities") {
  std::mt19937_64 rng(11);
  for (const ContactProfile* p : {&binding5(), &dehn30()}) {
    std::uniform_int_distribution<long> kd(1, 400), md(-300, 300);
    for (int t = 0; t < 400; ++t) {
      const long k = kd(rng), m = md(rng);
      const ModePoint mp = mode_point(*p, k, m);
      const ProfileValue v = p->eval(mp.rho_star);
      // residual implied by a 1e-12 root tolerance in rho
      const double scale = 1e-12 * (k * std::abs(v.g1) + std::abs(m) * std::abs(v.f1)) + 1e-13 * (k + std::abs(m));
      CHECK(std::abs(k * v.g - m * v.f) <= scale);
      CHECK(std::abs(mp.gamma - 2.0 * k / v.f) <= 1e-11 * mp.gamma);
      if (std::abs(v.g) > 1e-3) CHECK(std::abs(mp.gamma - 2.0 * m / v.g) <= 1e-8 * mp.gamma);
    }
  }
}

TEST_CASE("gamma against m for fixed k follows f along rho_star") {
  // gamma = 2k/f(rho_star) and rho_star falls as m grows: increasing below the flat piece,
  // constant on it, decreasing above it
  const auto& p = binding5();
  long rising = 0, level = 0, falling = 0;
  for (long k = 1; k <= 200; k += 7) {
    ModePoint prev = mode_point(p, k, 0);
    for (long m = 1; m <= 300; ++m) {
      const ModePoint cur = mode_point(p, k, m);
      CHECK(cur.rho_star < prev.rho_star);
      if (prev.rho_star < 0.95) {
        CHECK(cur.gamma > prev.gamma);
        ++rising;
      } else if (cur.rho_star >= 0.95 && prev.rho_star <= 1.15) {
        CHECK(std::abs(cur.gamma - 2.0 * k / 5.0) < 1e-10 * cur.gamma);
        ++level;
      } else if (cur.rho_star > 1.15) {
        CHECK(cur.gamma < prev.gamma);
        ++falling;
      }
      prev = cur;
    }
  }
  CHECK(rising > 1000);
  CHECK(level > 10);
  CHECK(falling > 100);
}

TEST_CASE("Taylor data on the flat piece vanishes") {
  const auto& p = binding5();
  for (auto km : {std::pair<long, long>{5, 1}, {50, 10}, {100, 19}, {200, 41}}) {
    const ModePoint mp = mode_point(p, km.first, km.second);
    const TaylorData td = taylor_at(p, mp);
    CHECK(std::abs(td.c2) < 1e-10);
    CHECK(std::abs(td.c3) < 1e-10);
    CHECK(std::abs(td.r1) < 1e-10);
    CHECK(std::abs(td.r2) < 1e-10);
    CHECK(std::abs(td.r3) < 1e-10);
    CHECK(std::abs(td.r4) < 1e-10);
    CHECK(std::abs(td.gamma - mp.gamma) < 1e-12);
  }
}

TEST_CASE("Taylor data against finite differences") {
  const auto& p = binding5();
  for (auto km : {std::pair<long, long>{5, 2}, {20, -3}, {30, 8}}) {
    const ModePoint mp = mode_point(p, km.first, km.second);
    const TaylorData td = taylor_at(p, mp);
    const double x0 = mp.rho_star;
    auto w = [&](double x) { return w_direct(p, km.first, km.second, x); };
    // linear coefficient of W vanishes at the mode point
    CHECK(std::abs(mode_potentials(p, km.first, km.second, x0).P[1]) < 1e-9 * mp.gamma);
    CHECK(std::abs(w(x0) + 0.5 * mp.gamma) < 1e-10 * mp.gamma);
    auto second = [&](double h) { return (w(x0 + h) - 2.0 * w(x0) + w(x0 - h)) / (h * h); };
    const double d1 = second(2e-3), d2 = second(1e-3);
    const double r1_fd = 0.5 * (d2 + (d2 - d1) / 3.0);
    const double r1_fd_half = 0.5 * (second(5e-4) + (second(5e-4) - d2) / 3.0);
    CHECK(std::abs(r1_fd - r1_fd_half) <= 1e-6 * std::abs(r1_fd_half));
    CHECK(std::abs(td.r1 - r1_fd_half) <= 1e-6 * std::abs(r1_fd_half));
    const ProfileValue v = p.eval(x0);
    const double w0 = (km.first * v.g - km.second * v.f) / v.delta() + v.delta1() / (2.0 * v.delta());
    CHECK(std::abs(td.c1 + w0) < 1e-10 * std::max(1.0, std::abs(w0)));
  }
}

TEST_CASE("Taylor data refuses pole modes") {
  CHECK_THROWS_AS(taylor_at(binding5(), mode_point(binding5(), 0, 5)), PoleModeError);
}

TEST_CASE("integral of Delta") {
  const auto& p = binding5();
  CHECK(std::abs(integral_delta(p, 0.0, 0.1) - 0.01) < 1e-14);
  CHECK(std::abs(integral_delta(p, 0.95, 1.0) - 2.5 * 0.05) < 1e-13);
  for (const ContactProfile* q : {&binding5(), &dehn30()}) {
    const double ref = oracle::piecewise_integral_delta(*q, q->rho_lo, q->rho_hi);
    CHECK(std::abs(integral_delta(*q) - ref) <= 1e-9 * std::abs(ref));
  }
}
