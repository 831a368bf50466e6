#include "specflow/matrix_sf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "specflow/errors.hpp"

namespace specflow {

namespace {

using Solver = Eigen::SelfAdjointEigenSolver<HMatrix>;

struct Sample {
  double s;
  Eigen::VectorXd eig;
  int neg;
  double min_abs;
};

Sample take(const HermitianPath& path, double s) {
  Solver es(path.H(s), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("spectral_flow: eigensolver failed at s=" + std::to_string(s));
  Sample out{s, es.eigenvalues(), 0, INFINITY};
  for (int i = 0; i < out.eig.size(); ++i) {
    if (out.eig[i] < 0.0) ++out.neg;
    out.min_abs = std::min(out.min_abs, std::abs(out.eig[i]));
  }
  return out;
}

void check_hermitian(const HMatrix& H, double s) {
  const double scale = std::max(1.0, H.norm());
  if (hermiticity_defect(H) > 1e-12 * scale)
    throw ParameterError("path sample at s=" + std::to_string(s) + " is not Hermitian");
}

// Eigenvalue nearest zero at s and its Hellmann-Feynman slope.
std::pair<double, double> nearest_zero(const HermitianPath& path, double s) {
  Solver es(path.H(s));
  const Eigen::VectorXd& ev = es.eigenvalues();
  int j = 0;
  for (int i = 1; i < ev.size(); ++i)
    if (std::abs(ev[i]) < std::abs(ev[j])) j = i;
  const Eigen::VectorXcd psi = es.eigenvectors().col(j);
  return {ev[j], (psi.adjoint() * path.dH(s) * psi)(0, 0).real()};
}

CrossingRecord finish(const HermitianPath& path, const Sample& a, const Sample& b) {
  // One Newton step from the bracket midpoint, slope reported at s*.
  const double sm = 0.5 * (a.s + b.s);
  const auto [lam, slope] = nearest_zero(path, sm);
  const int net = a.neg - b.neg;
  double s_star = sm;
  if (slope != 0.0) s_star = std::clamp(sm - lam / slope, a.s, b.s);
  const double slope_star = s_star == sm ? slope : nearest_zero(path, s_star).second;
  return {s_star, net > 0 ? 1 : -1, std::abs(net), slope_star};
}

void refine(const HermitianPath& path, const Sample& a, const Sample& b, double tol, int depth,
            std::vector<CrossingRecord>& out) {
  if (a.neg == b.neg) return;
  if (b.s - a.s <= tol || depth >= 60) {
    out.push_back(finish(path, a, b));
    return;
  }
  const Sample m = take(path, 0.5 * (a.s + b.s));
  refine(path, a, m, tol, depth + 1, out);
  refine(path, m, b, tol, depth + 1, out);
}

}  // namespace

HMatrix HermitianPath::H(double s) const { return sample(s); }

HMatrix HermitianPath::dH(double s) const {
  if (derivative) return (*derivative)(s);
  const double h = 1e-6;
  const double lo = std::max(0.0, s - h), hi = std::min(1.0, s + h);
  return (sample(hi) - sample(lo)) / (hi - lo);
}

double hermiticity_defect(const HMatrix& H) { return (H - H.adjoint()).cwiseAbs().maxCoeff(); }

int negcount(const HMatrix& H, double tol) {
  Solver es(H, Eigen::EigenvaluesOnly);
  int n = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()[i];
    if (std::abs(l) <= tol) throw DegeneracyError("matrix has an eigenvalue within tol of zero: " + std::to_string(l));
    if (l < 0.0) ++n;
  }
  return n;
}

int negcount_delta(const HMatrix& H0, const HMatrix& H1, double tol) { return negcount(H0, tol) - negcount(H1, tol); }

SfResult spectral_flow(const HermitianPath& path, int grid, double tol) { return spectral_flow(path, 0.0, 1.0, grid, tol); }

SfResult spectral_flow(const HermitianPath& path, double s0, double s1, int grid, double tol) {
  if (grid < 2) throw ParameterError("spectral_flow requires grid >= 2");
  if (!(s0 < s1)) throw ParameterError("spectral_flow requires s0 < s1");
  std::vector<Sample> S;
  S.reserve(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    const double s = s0 + (s1 - s0) * i / (grid - 1);
    check_hermitian(path.H(s), s);
    S.push_back(take(path, s));
  }
  if (S.front().min_abs <= tol || S.back().min_abs <= tol)
    throw DegeneracyError("path endpoint has an eigenvalue within tol of zero; perturb the endpoints");
  for (std::size_t i = 0; i + 1 < S.size(); ++i)
    if (S[i].min_abs <= tol && S[i + 1].min_abs <= tol)
      throw DegeneracyError("eigenvalue stays within tol of zero on [" + std::to_string(S[i].s) + ", " +
                            std::to_string(S[i + 1].s) + "]; perturb the path");

  SfResult res;
  for (std::size_t i = 0; i + 1 < S.size(); ++i) refine(path, S[i], S[i + 1], tol, 0, res.crossings);
  for (const auto& c : res.crossings) res.flow += c.sign * c.multiplicity;
  return res;
}

HMatrix random_hermitian(int dim, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> N(0.0, 1.0);
  HMatrix A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = {N(rng), N(rng)};
  return scale * 0.5 * (A + A.adjoint());
}

HermitianPath linear_path(const HMatrix& H0, const HMatrix& H1) {
  HermitianPath p;
  p.dim = static_cast<int>(H0.rows());
  p.sample = [H0, H1](double s) -> HMatrix { return (1.0 - s) * H0 + s * H1; };
  p.derivative = [H0, H1](double) -> HMatrix { return H1 - H0; };
  return p;
}

HermitianPath bent_path(const HMatrix& H0, const HMatrix& H1, const HMatrix& K) {
  constexpr double pi = std::numbers::pi;
  HermitianPath p;
  p.dim = static_cast<int>(H0.rows());
  p.sample = [H0, H1, K](double s) -> HMatrix { return (1.0 - s) * H0 + s * H1 + std::sin(pi * s) * K; };
  p.derivative = [H0, H1, K](double s) -> HMatrix { return H1 - H0 + pi * std::cos(pi * s) * K; };
  return p;
}

HermitianPath sampled_path(std::vector<HMatrix> samples, std::vector<double> s) {
  if (samples.size() < 2) throw ParameterError("sampled path needs at least two matrices");
  const std::size_t n = samples.size();
  if (s.empty())
    for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<double>(i) / static_cast<double>(n - 1));
  if (s.size() != n) throw ParameterError("sampled path: knot count does not match matrix count");
  if (s.front() != 0.0 || s.back() != 1.0) throw ParameterError("sampled path: knots must run from 0 to 1");
  for (std::size_t i = 1; i < n; ++i)
    if (!(s[i] > s[i - 1])) throw ParameterError("sampled path: knots must be increasing");
  const long dim = samples.front().rows();
  for (const auto& M : samples)
    if (M.rows() != dim || M.cols() != dim) throw ParameterError("sampled path: matrices must share one square shape");

  auto seg = [s](double t) {
    const auto it = std::upper_bound(s.begin(), s.end(), t);
    std::size_t i = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
    return std::min(i, s.size() - 2);
  };
  HermitianPath p;
  p.dim = static_cast<int>(dim);
  p.sample = [samples, s, seg](double t) -> HMatrix {
    const std::size_t i = seg(t);
    const double u = (t - s[i]) / (s[i + 1] - s[i]);
    return (1.0 - u) * samples[i] + u * samples[i + 1];
  };
  p.derivative = [samples, s, seg](double t) -> HMatrix {
    const std::size_t i = seg(t);
    return (samples[i + 1] - samples[i]) / (s[i + 1] - s[i]);
  };
  return p;
}

}  // namespace specflow
