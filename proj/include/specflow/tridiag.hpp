#pragma once

#include <vector>

namespace specflow {

// Symmetric tridiagonal matrix: diagonal d (size n), off-diagonal e (size n-1).
struct SymTridiag {
  std::vector<double> d;
  std::vector<double> e;

  std::size_t size() const { return d.size(); }
  double norm_bound() const;  // Gershgorin radius max_i |d_i| + |e_{i-1}| + |e_i|
  std::vector<double> apply(const std::vector<double>& x) const;
};

// Number of eigenvalues strictly below sigma (Sturm sequence / LDL^T inertia).
int negcount(const SymTridiag& T, double sigma);

// Eigenvalue with ascending index `idx` (0-based), bisected to absolute width `tol`.
double kth_eigenvalue(const SymTridiag& T, int idx, double tol = 0.0);

// Eigenvector for an (accurately known) eigenvalue via inverse iteration, unit 2-norm.
std::vector<double> eigenvector(const SymTridiag& T, double lambda);

double residual_norm(const SymTridiag& T, double lambda, const std::vector<double>& v);

}  // namespace specflow
