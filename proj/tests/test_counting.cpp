#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "specflow/counting.hpp"
#include "specflow/errors.hpp"

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

}  // namespace

TEST_CASE("lattice_count small r") {
  CHECK(lattice_count(binding5(), 0.5, sector_all()) == 0);
  long axis = 0;
  for (const auto& mp : enumerate_modes(binding5(), 2.5, sector_all()))
    if (mp.k == 0) ++axis;
  CHECK(axis == 4);
}

TEST_CASE("lattice_count matches a brute-force double loop") {
  for (double r : {5.0, 10.0, 20.0, 40.0}) {
    CHECK(lattice_count(binding5(), r, sector_all()) == oracle::brute_count(binding5(), r, sector_all()));
    CHECK(lattice_count(binding5(), r, sector_binding(5.0)) ==
          oracle::brute_count(binding5(), r, sector_binding(5.0)));
  }
  for (double r : {10.0, 20.0}) {
    CHECK(lattice_count(dehn30(), r, sector_all()) == oracle::brute_count(dehn30(), r, sector_all()));
    CHECK(lattice_count(dehn30(), r, sector_dehn(dehn30())) ==
          oracle::brute_count(dehn30(), r, sector_dehn(dehn30())));
  }
}

TEST_CASE("lattice_count is nondecreasing in r") {
  long prev = 0;
  for (double r = 1.0; r <= 80.0; r += 0.37) {
    const long c = lattice_count(binding5(), r, sector_all());
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("enumerate_modes agrees with lattice_count") {
  for (double r : {15.0, 33.0}) {
    const auto modes = enumerate_modes(binding5(), r, sector_binding(5.0));
    CHECK(static_cast<long>(modes.size()) == lattice_count(binding5(), r, sector_binding(5.0)));
    for (const auto& mp : modes) {
      CHECK(mp.gamma <= r);
      CHECK(static_cast<double>(mp.m) >= static_cast<double>(mp.k) / 5.0 - 1e-12);
    }
  }
}

TEST_CASE("sector inequalities") {
  const SectorSpec b = sector_binding(5.0);
  CHECK(b.contains(10, 2));
  CHECK_FALSE(b.contains(10, 1));
  const SectorSpec d = sector_dehn(dehn30());
  const double tp = 2.0 * std::numbers::pi, tm = 0.0, V = 30.0, v = 0.5;
  for (long k = 1; k < 50; ++k) {
    const double lo = 2.0 * (v - 1.0) * k / (V - 2.0 * (v - 1.0) * tp);
    const double hi = 2.0 * (v + 1.0) * k / (V - 2.0 * (v + 1.0) * tm);
    CHECK(std::abs(d.m_min(k) - lo) < 1e-12 * (1.0 + std::abs(lo)));
    CHECK(std::abs(d.m_max(k) - hi) < 1e-12 * (1.0 + std::abs(hi)));
  }
  CHECK_THROWS_AS(sector_dehn(binding5()), ParameterError);
  CHECK_THROWS_AS(sector_kind_from_string("diagonal"), ParameterError);
}

TEST_CASE("eta_circle examples") {
  const EtaH a = eta_circle(5.0);
  CHECK(a.eta == 0.0);
  CHECK(a.h == 1);
  const EtaH b = eta_circle(0.5);
  CHECK(std::abs(b.eta) < 1e-15);
  CHECK(b.h == 0);
  const EtaH c = eta_circle(0.25);
  CHECK(std::abs(c.eta - 0.5) < 1e-15);
  CHECK(c.h == 0);
}

TEST_CASE("eta_circle against the Hurwitz zeta continuation") {
  for (int i = 0; i < 50; ++i) {
    const double theta = -3.0 + 6.0 * (i + 0.3183) / 50.0;
    CHECK(std::abs(eta_circle(theta).eta - oracle::eta_shifted(theta)) < 1e-8);
  }
}

TEST_CASE("eta_circle sawtooth antisymmetry") {
  for (double t = 0.01; t < 1.0; t += 0.0123) {
    if (std::abs(t - 0.5) < 1e-9) continue;
    CHECK(std::abs(eta_circle(t).eta + eta_circle(1.0 - t).eta) < 1e-14);
  }
}

TEST_CASE("index_sigma worked examples") {
  SigmaData sd;
  sd.V = 2.0;
  sd.area = std::numbers::pi;
  sd.euler = -1;
  sd.circles = {binding_circle(2.0)};
  CHECK(index_sigma(sd, 10) == 5);
  CHECK(index_sigma(sd, 11) == 5);
  sd.area = 1.0;
  CHECK_THROWS_AS(index_sigma(sd, 3), DataInconsistencyError);
}

TEST_CASE("index_sigma grows linearly") {
  const SigmaData sd = default_sigma(5.0, 0.5);
  long lo = 1L << 40, hi = -(1L << 40);
  long prev = index_sigma(sd, 1);
  for (long n = 2; n <= 10000; ++n) {
    const long cur = index_sigma(sd, n);
    lo = std::min(lo, cur - prev);
    hi = std::max(hi, cur - prev);
    prev = cur;
  }
  CHECK(hi - lo <= 8);
  const double slope = sd.area / (sd.V * std::numbers::pi);
  CHECK(std::abs(static_cast<double>(prev) - slope * 10000.0) < 10.0);
}

TEST_CASE("s_n sequence") {
  const double V = 5.0, d3 = 0.5;
  std::vector<double> crossings;
  for (const auto& mp : enumerate_modes(binding5(), 2.0 * 400 / V + 2.0, sector_all())) crossings.push_back(mp.gamma);
  const SnSequence S = build_sn(crossings, d3, V, 400);
  REQUIRE(S.values.size() == 400);
  CHECK(S.first_subdivided == 301);
  for (long n = 1; n <= 300; ++n) CHECK(S.values[n - 1] == 2.0 * n / V + 1.0 / V);
  for (long n = 1; n <= 400; ++n) CHECK(std::abs(S.values[n - 1] - 2.0 * n / V - 1.0 / V) <= 1.0 / (4.0 * V));
  for (long n = 2; n <= 400; ++n) {
    const double gap = S.values[n - 1] - S.values[n - 2];
    CHECK(gap >= 2.0 / V - 1.0 / (2.0 * V));
    CHECK(gap <= 2.0 / V + 1.0 / (2.0 * V));
  }
  // a large delta3 only pushes subdivision further out
  const SnSequence wide = build_sn(crossings, 50.0, V, 10);
  CHECK(wide.first_subdivided == 0);
  CHECK(wide.values[9] == 2.0 * 10 / V + 1.0 / V);
  CHECK_THROWS_AS(build_sn(crossings, 0.0, V, 10), ParameterError);
}

TEST_CASE("asymptotic report leading coefficient") {
  const ContactProfile b30 = build_binding_profile(30.0, 0.01);
  SigmaData sd;
  sd.V = 30.0;
  sd.area = 2.0;
  sd.euler = -1;
  sd.circles = {binding_circle(30.0), dehn_circle_upper(30.0, 0.5), dehn_circle_lower(30.0, 0.5)};
  const AsymptoticReport empty = asymptotic_report(b30, dehn30(), sd, {});
  CHECK(empty.rows.empty());
  const double Ib = oracle::piecewise_integral_delta(b30, 0.0, 1.0);
  const double Id = oracle::piecewise_integral_delta(dehn30(), -1.0, 1.0);
  const double expect = 0.25 * Ib + 0.25 * Id + 30.0 * 2.0 / (8.0 * std::numbers::pi);
  CHECK(std::abs(empty.leading_coefficient - expect) < 1e-9 * expect);
}

TEST_CASE("monotone growth detector") {
  CHECK(monotone_growth({20, 40, 80, 160}, {1, 2, 4, 8}));
  CHECK_FALSE(monotone_growth({20, 40, 80, 160}, {1, 1.1, 1.05, 1.2}));
  CHECK_FALSE(monotone_growth({20, 40, 80, 160}, {1, 1.01, 1.02, 1.03}));
}
