#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "specflow/errors.hpp"
#include "specflow/matrix_sf.hpp"

using namespace specflow;

namespace {

HermitianPath scalar_path(std::function<double(double)> f) {
  HermitianPath p;
  p.dim = 1;
  p.sample = [f](double s) { return HMatrix::Constant(1, 1, f(s)); };
  return p;
}

double nearest_zero_eigenvalue(const HMatrix& H) {
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<HMatrix>(H, Eigen::EigenvaluesOnly).eigenvalues();
  double best = ev(0);
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) < std::abs(best)) best = ev(i);
  return best;
}

}  // namespace

TEST_CASE("scalar linear crossing") {
  const SfResult r = spectral_flow(scalar_path([](double s) { return 2.0 * s - 1.0; }));
  CHECK(r.flow == 1);
  REQUIRE(r.crossings.size() == 1);
  CHECK(std::abs(r.crossings[0].s_star - 0.5) < 1e-10);
  CHECK(r.crossings[0].sign == 1);
  CHECK(r.crossings[0].multiplicity == 1);
  CHECK(std::abs(r.crossings[0].lambda_prime - 2.0) < 1e-6);
  const SfResult d = spectral_flow(scalar_path([](double s) { return 0.3 - s; }));
  CHECK(d.flow == -1);
}

TEST_CASE("gap-protected path has no flow") {
  HermitianPath p;
  p.dim = 2;
  p.sample = [](double s) {
    HMatrix H(2, 2);
    H << 2.0 * s - 1.0, 0.1, 0.1, 1.0 - 2.0 * s;
    return H;
  };
  const SfResult r = spectral_flow(p);
  CHECK(r.flow == 0);
  CHECK(r.crossings.empty());
}

TEST_CASE("degenerate crossing counts with multiplicity") {
  const HMatrix I = HMatrix::Identity(2, 2);
  const SfResult r = spectral_flow(linear_path(-I, I));
  CHECK(r.flow == 2);
  REQUIRE(r.crossings.size() == 1);
  CHECK(r.crossings[0].multiplicity == 2);
}

TEST_CASE("negcount_delta examples") {
  HMatrix A = HMatrix::Zero(2, 2), B = HMatrix::Zero(2, 2);
  A.diagonal() << -1.0, -1.0;
  B.diagonal() << 1.0, 1.0;
  CHECK(negcount_delta(A, B) == 2);
  CHECK(negcount_delta(A, A) == 0);
  CHECK_THROWS_AS(negcount(HMatrix::Zero(2, 2)), DegeneracyError);
}

TEST_CASE("random paths: flow equals the endpoint index difference") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 30; ++t) {
    const int d = 2 + t % 11;
    const HMatrix H0 = random_hermitian(d, rng), H1 = random_hermitian(d, rng);
    const HMatrix K = random_hermitian(d, rng), M = random_hermitian(d, rng);
    const int nd = negcount_delta(H0, H1);
    CHECK(spectral_flow(linear_path(H0, H1)).flow == nd);
    CHECK(spectral_flow(bent_path(H0, H1, K)).flow == nd);
    CHECK(spectral_flow(sampled_path({H0, M, H1})).flow == nd);
  }
}

TEST_CASE("flow is invariant under grid refinement") {
  std::mt19937_64 rng(23);
  const HMatrix H0 = random_hermitian(6, rng), H1 = random_hermitian(6, rng), K = random_hermitian(6, rng, 2.0);
  const HermitianPath p = bent_path(H0, H1, K);
  const int f = spectral_flow(p, 256).flow;
  CHECK(spectral_flow(p, 1024).flow == f);
  CHECK(spectral_flow(p, 4096).flow == f);
}

TEST_CASE("additivity over a split") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 20; ++t) {
    const HMatrix H0 = random_hermitian(5, rng), H1 = random_hermitian(5, rng), K = random_hermitian(5, rng);
    const HermitianPath p = bent_path(H0, H1, K);
    try {
      negcount(p.H(0.5));
    } catch (const DegeneracyError&) {
      continue;
    }
    CHECK(spectral_flow(p).flow == spectral_flow(p, 0.0, 0.5).flow + spectral_flow(p, 0.5, 1.0).flow);
  }
}

TEST_CASE("sign rule at each crossing") {
  std::mt19937_64 rng(31);
  const HMatrix H0 = random_hermitian(8, rng), H1 = random_hermitian(8, rng), K = random_hermitian(8, rng, 3.0);
  const HermitianPath p = bent_path(H0, H1, K);
  const SfResult r = spectral_flow(p);
  REQUIRE_FALSE(r.crossings.empty());
  for (const auto& c : r.crossings) {
    CHECK(c.sign == (c.lambda_prime > 0 ? 1 : -1));
    CHECK(std::abs(nearest_zero_eigenvalue(p.H(c.s_star))) <= 1e-9);
    const double d = 1e-5;
    const int before = negcount(p.H(c.s_star - d)), after = negcount(p.H(c.s_star + d));
    CHECK(before - after == c.sign * c.multiplicity);
  }
}

TEST_CASE("non-transverse paths are rejected") {
  CHECK_THROWS_AS(spectral_flow(scalar_path([](double s) { return s; })), DegeneracyError);
  HMatrix m1 = HMatrix::Constant(1, 1, -1.0), z = HMatrix::Zero(1, 1), p1 = HMatrix::Constant(1, 1, 1.0);
  CHECK_THROWS_AS(spectral_flow(sampled_path({m1, z, z, p1}, {0.0, 0.4, 0.6, 1.0})), DegeneracyError);
  CHECK_THROWS_AS(spectral_flow(scalar_path([](double s) { return s - 0.5; }), 1), ParameterError);
}

TEST_CASE("path samples must be Hermitian") {
  HMatrix A = HMatrix::Identity(2, 2);
  A(0, 1) = 0.3;
  CHECK(hermiticity_defect(A) > 0.1);
  CHECK_THROWS_AS(spectral_flow(linear_path(A, -A)), ParameterError);
  std::mt19937_64 rng(2);
  CHECK(hermiticity_defect(random_hermitian(7, rng)) <= 1e-15);
  CHECK_THROWS_AS(sampled_path({A}), ParameterError);
  CHECK_THROWS_AS(sampled_path({A, A}, {0.0, 0.5}), ParameterError);
}

TEST_CASE("derivative callback is used when given") {
  HermitianPath p = scalar_path([](double s) { return std::sin(3.0 * s) - 0.5; });
  p.derivative = [](double s) { return HMatrix::Constant(1, 1, 3.0 * std::cos(3.0 * s)); };
  const SfResult r = spectral_flow(p);
  REQUIRE(r.crossings.size() == 2);
  CHECK(r.flow == 0);
  const double roots[2] = {std::asin(0.5) / 3.0, (std::numbers::pi - std::asin(0.5)) / 3.0};
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(r.crossings[i].s_star - roots[i]) < 1e-10);
    CHECK(std::abs(r.crossings[i].lambda_prime - 3.0 * std::cos(3.0 * r.crossings[i].s_star)) < 1e-12);
  }
  CHECK(r.crossings[0].sign == 1);
  CHECK(r.crossings[1].sign == -1);
}
