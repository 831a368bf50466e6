#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "specflow/tridiag.hpp"

using namespace specflow;

namespace {

SymTridiag random_tridiag(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  SymTridiag T;
  for (int i = 0; i < n; ++i) T.d.push_back(N(rng));
  for (int i = 0; i + 1 < n; ++i) T.e.push_back(N(rng));
  return T;
}

Eigen::VectorXd dense_eigenvalues(const SymTridiag& T) {
  const int n = static_cast<int>(T.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) M(i, i) = T.d[i];
  for (int i = 0; i + 1 < n; ++i) M(i, i + 1) = M(i + 1, i) = T.e[i];
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

TEST_CASE("Sturm count and bisection agree with a dense solver") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const SymTridiag T = random_tridiag(5 + 7 * t, rng);
    const Eigen::VectorXd ev = dense_eigenvalues(T);
    const int n = static_cast<int>(T.size());
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(kth_eigenvalue(T, i, 1e-13) - ev(i)) < 1e-11);
      if (i + 1 < n) CHECK(negcount(T, 0.5 * (ev(i) + ev(i + 1))) == i + 1);
    }
    CHECK(negcount(T, ev(0) - 1.0) == 0);
    CHECK(negcount(T, T.norm_bound() + 1.0) == n);
  }
}

TEST_CASE("inverse iteration eigenvectors") {
  std::mt19937_64 rng(5);
  const SymTridiag T = random_tridiag(200, rng);
  for (int i : {0, 57, 199}) {
    const double lam = kth_eigenvalue(T, i, 1e-14);
    const auto v = eigenvector(T, lam);
    double nn = 0.0;
    for (double x : v) nn += x * x;
    CHECK(std::abs(nn - 1.0) < 1e-12);
    CHECK(residual_norm(T, lam, v) < 1e-10);
  }
}

TEST_CASE("apply is the matrix-vector product") {
  SymTridiag T{{1.0, 2.0, 3.0}, {0.5, -1.0}};
  const auto y = T.apply({1.0, 1.0, 1.0});
  CHECK(y[0] == 1.5);
  CHECK(y[1] == 1.5);
  CHECK(y[2] == 2.0);
}
