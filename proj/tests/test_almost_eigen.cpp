#include <doctest.h>

#include <cmath>
#include <random>

#include "specflow/almost_eigen.hpp"
#include "specflow/errors.hpp"

using namespace specflow;

namespace {

CVector basis(int dim, int i) {
  CVector v = CVector::Zero(dim);
  v(i) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("exact eigenpairs match with zero gaps") {
  AlmostEigenSystem sys;
  sys.H = CMatrix::Zero(2, 2);
  sys.H.diagonal() << 1.0, 2.0;
  sys.psis = {basis(2, 0), basis(2, 1)};
  sys.mus = {1.0, 2.0};
  CHECK(check_hypotheses(sys).ok);
  const auto rows = nearest_eigen_check(sys);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) CHECK(r.gap < 1e-15);
}

TEST_CASE("coupled 2x2 system against the closed form") {
  const double e = 0.01;
  AlmostEigenSystem sys;
  sys.H = CMatrix(2, 2);
  sys.H << 1.0, e, e, 2.0;
  sys.psis = {basis(2, 0)};
  sys.mus = {1.0};
  sys.delta4 = e * e;
  const HypothesisReport h = check_hypotheses(sys);
  CHECK(h.ok);
  CHECK(std::abs(h.max_residual2 - e * e) < 1e-18);
  const auto rows = nearest_eigen_check(sys);
  REQUIRE(rows.size() == 1);
  const double lower = 1.5 - std::sqrt(0.25 + e * e);
  CHECK(std::abs(rows[0].lambda - lower) < 1e-14);
  CHECK(rows[0].gap <= std::sqrt(2.0) * e);
}

TEST_CASE("violated conclusion is reported") {
  AlmostEigenSystem sys;
  sys.H = CMatrix::Zero(2, 2);
  sys.H.diagonal() << 1.0, 2.0;
  sys.psis = {basis(2, 0)};
  sys.mus = {1.5};
  sys.delta4 = 1e-4;
  CHECK_FALSE(check_hypotheses(sys).ok);
  CHECK_THROWS_AS(nearest_eigen_check(sys), LemmaViolationError);
}

TEST_CASE("random almost-eigen systems") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 60; ++t) {
    const int dim = 2 + t % 39, L = 1 + t % std::min(dim, 10);
    const AlmostEigenSystem sys = random_almost_system(dim, L, 1e-2, rng);
    CHECK(sys.delta4 <= 1e-2);
    CHECK(check_hypotheses(sys).ok);
    const auto rows = nearest_eigen_check(sys);
    CHECK(rows.size() == static_cast<std::size_t>(L));
    for (const auto& r : rows) CHECK(r.gap <= std::sqrt(2.0 * sys.delta4) * (1.0 + 1e-12));
  }
  CHECK_THROWS_AS(random_almost_system(3, 4, 1e-2, rng), ParameterError);
}

TEST_CASE("Welch check on orthonormal families") {
  CoherenceSet cs;
  cs.dim = 6;
  cs.delta6 = 0.5;
  for (int i = 0; i < 6; ++i) cs.vectors.push_back(basis(6, i));
  const WelchResult w = welch_check(cs);
  CHECK(w.invariant_ok);
  CHECK(w.L_bound_ok);
  CHECK(w.max_coherence == 0.0);
  CHECK(std::abs(w.slack - 0.25 / (1.0 - 0.25 / 6.0)) < 1e-15);
}

TEST_CASE("Welch lower bound formula") {
  CHECK(std::abs(welch_lower_bound(5, 4) - 0.25) < 1e-15);
  CHECK(std::abs(welch_lower_bound(7, 3) - std::sqrt(4.0 / 18.0)) < 1e-15);
  CHECK(welch_lower_bound(4, 4) == 0.0);
}

TEST_CASE("generated coherence sets satisfy the cap") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 100; ++t) {
    const CoherenceSet cs = random_coherence_set(rng);
    const WelchResult w = welch_check(cs);
    CHECK(w.invariant_ok);
    CHECK(w.L_bound_ok);
    CHECK(static_cast<double>(cs.vectors.size()) <= cs.dim + w.slack + 1e-12);
  }
}

TEST_CASE("coherence search never beats the Welch bound") {
  const CoherenceSearch s = min_max_coherence(5, 4, 2000, 8, 1);
  CHECK(s.best >= welch_lower_bound(5, 4) - 1e-9);
  CHECK(s.best <= 0.26);
  CHECK(s.best_random >= s.best);
}

TEST_CASE("Gram reports") {
  std::vector<CVector> on = {basis(3, 0), basis(3, 1), basis(3, 2)};
  const GramReport g = gram_report(on);
  CHECK((g.gram - CMatrix::Identity(3, 3)).norm() == 0.0);
  CHECK(g.max_offdiag == 0.0);
  CHECK_FALSE(g.normalized.has_value());
  const GramReport one = gram_report(std::vector<CVector>{basis(4, 2)});
  CHECK(one.gram.rows() == 1);
  std::mt19937_64 rng(47);
  std::normal_distribution<double> N;
  CMatrix A(12, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) A(i, j) = {N(rng), N(rng)};
  const CMatrix H = A + A.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
  std::vector<CVector> ev;
  for (int i = 0; i < 12; ++i) ev.push_back(es.eigenvectors().col(i));
  CHECK(gram_report(ev).max_offdiag <= 1e-12);
  const std::vector<std::vector<double>> real = {{1.0, 0.0}, {0.6, 0.8}};
  const GramReport w = gram_report(real, {4.0, 9.0});
  REQUIRE(w.normalized.has_value());
  CHECK(std::abs(*w.normalized - 0.6 * 6.0) < 1e-14);
}

TEST_CASE("lemma suite is deterministic") {
  const LemmaSuiteSummary a = run_lemma_suite(40, 9, 1, 500, 2);
  const LemmaSuiteSummary b = run_lemma_suite(40, 9, 2, 500, 2);
  CHECK(a.matchings_found == 40);
  CHECK(a.welch_ok == a.welch_sets);
  CHECK(a.worst_gap_ratio == b.worst_gap_ratio);
  CHECK(a.coherence.best == b.coherence.best);
}
