#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace specflow {

using HMatrix = Eigen::MatrixXcd;

struct HermitianPath {
  int dim = 0;
  std::function<HMatrix(double)> sample;
  std::optional<std::function<HMatrix(double)>> derivative;

  HMatrix H(double s) const;
  HMatrix dH(double s) const;  // finite differences when no derivative is given
};

struct CrossingRecord {
  double s_star;
  int sign;
  int multiplicity;
  double lambda_prime;
};

struct SfResult {
  int flow = 0;
  std::vector<CrossingRecord> crossings;
};

inline constexpr int kDefaultSfGrid = 256;
inline constexpr double kDefaultSfTol = 1e-10;

// Signed count of zero crossings along s in [0, 1].
SfResult spectral_flow(const HermitianPath& path, int grid = kDefaultSfGrid, double tol = kDefaultSfTol);
// Same on a sub-interval [s0, s1].
SfResult spectral_flow(const HermitianPath& path, double s0, double s1, int grid = kDefaultSfGrid,
                       double tol = kDefaultSfTol);

int negcount(const HMatrix& H, double tol = kDefaultSfTol);
int negcount_delta(const HMatrix& H0, const HMatrix& H1, double tol = kDefaultSfTol);

double hermiticity_defect(const HMatrix& H);

HMatrix random_hermitian(int dim, std::mt19937_64& rng, double scale = 1.0);

HermitianPath linear_path(const HMatrix& H0, const HMatrix& H1);
// (1-s) H0 + s H1 + sin(pi s) K.
HermitianPath bent_path(const HMatrix& H0, const HMatrix& H1, const HMatrix& K);
// Piecewise-linear interpolation through samples at knots s (uniform when empty).
HermitianPath sampled_path(std::vector<HMatrix> samples, std::vector<double> s = {});

}  // namespace specflow
