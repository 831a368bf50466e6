#include "specflow/almost_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "specflow/errors.hpp"
#include "specflow/matrix_sf.hpp"
#include "specflow/parallel.hpp"

namespace specflow {

namespace {

using Solver = Eigen::SelfAdjointEigenSolver<CMatrix>;

CVector random_unit(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  CVector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = {N(rng), N(rng)};
  return v.normalized();
}

CMatrix random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  CMatrix A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = {N(rng), N(rng)};
  Eigen::HouseholderQR<CMatrix> qr(A);
  return qr.householderQ() * CMatrix::Identity(dim, dim);
}

// exp(i eps K) for Hermitian K.
CMatrix small_unitary(const CMatrix& K, double eps) {
  Solver es(K);
  const Eigen::VectorXd& d = es.eigenvalues();
  CVector ph(d.size());
  for (int i = 0; i < d.size(); ++i) ph[i] = std::polar(1.0, eps * d[i]);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

double max_coherence(const std::vector<CVector>& u) {
  double c = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = i + 1; j < u.size(); ++j) c = std::max(c, std::abs(u[i].dot(u[j])));
  return c;
}

// Kuhn augmenting paths on the bipartite graph mu_l -> admissible eigenvalues.
bool kuhn(int l, const std::vector<std::vector<int>>& adj, std::vector<int>& owner, std::vector<char>& seen) {
  for (int j : adj[static_cast<std::size_t>(l)]) {
    if (seen[static_cast<std::size_t>(j)]) continue;
    seen[static_cast<std::size_t>(j)] = 1;
    if (owner[static_cast<std::size_t>(j)] < 0 || kuhn(owner[static_cast<std::size_t>(j)], adj, owner, seen)) {
      owner[static_cast<std::size_t>(j)] = l;
      return true;
    }
  }
  return false;
}

}  // namespace

HypothesisReport check_hypotheses(const AlmostEigenSystem& sys, double tol) {
  HypothesisReport rep;
  const std::size_t L = sys.psis.size();
  const double scale = std::max(1.0, sys.H.norm());
  std::vector<CVector> Hp;
  for (const auto& p : sys.psis) Hp.push_back(sys.H * p);
  for (std::size_t l = 0; l < L; ++l) {
    rep.max_residual2 = std::max(rep.max_residual2, (Hp[l] - sys.mus[l] * sys.psis[l]).squaredNorm());
    for (std::size_t j = 0; j < L; ++j) {
      const double target = l == j ? 1.0 : 0.0;
      rep.orthonormality_defect = std::max(rep.orthonormality_defect, std::abs(sys.psis[l].dot(sys.psis[j]) - target));
      if (l != j) {
        rep.cross_term_defect = std::max(rep.cross_term_defect, std::abs(Hp[l].dot(sys.psis[j])));
        rep.image_overlap_sum += std::abs(Hp[l].dot(Hp[j]));
      }
    }
  }
  const double slack = 1e-12 * scale * scale;
  rep.ok = rep.orthonormality_defect <= tol * std::max(1.0, static_cast<double>(sys.H.rows())) &&
           rep.cross_term_defect <= tol * scale * std::max(1.0, static_cast<double>(sys.H.rows())) &&
           rep.max_residual2 <= sys.delta4 + slack && rep.image_overlap_sum <= sys.delta4 + slack;
  return rep;
}

std::vector<MatchRow> nearest_eigen_check(const AlmostEigenSystem& sys) {
  const std::size_t L = sys.mus.size();
  Solver es(sys.H, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd lam = es.eigenvalues();
  const int n = static_cast<int>(lam.size());
  const double bound = std::sqrt(2.0 * sys.delta4) * (1.0 + 1e-9) + 1e-12 * std::max(1.0, sys.H.norm());

  std::vector<std::size_t> order(L);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sys.mus[a] < sys.mus[b]; });

  std::vector<int> assign(L, -1);
  bool ok = true;
  int j = 0;
  for (std::size_t idx : order) {
    const double mu = sys.mus[idx];
    while (j < n && lam[j] < mu - bound) ++j;
    if (j < n && lam[j] <= mu + bound) {
      assign[idx] = j++;
    } else {
      ok = false;
      break;
    }
  }
  if (!ok) {
    std::vector<std::vector<int>> adj(L);
    for (std::size_t l = 0; l < L; ++l)
      for (int i = 0; i < n; ++i)
        if (std::abs(lam[i] - sys.mus[l]) <= bound) adj[l].push_back(i);
    std::vector<int> owner(static_cast<std::size_t>(n), -1);
    for (std::size_t l = 0; l < L; ++l) {
      std::vector<char> seen(static_cast<std::size_t>(n), 0);
      if (!kuhn(static_cast<int>(l), adj, owner, seen))
        throw LemmaViolationError("no injective matching of almost-eigenvalues within sqrt(2 delta4) = " +
                                  std::to_string(bound));
    }
    for (int i = 0; i < n; ++i)
      if (owner[static_cast<std::size_t>(i)] >= 0) assign[static_cast<std::size_t>(owner[static_cast<std::size_t>(i)])] = i;
  }
  std::vector<MatchRow> rows;
  for (std::size_t l = 0; l < L; ++l) {
    const double lv = lam[assign[l]];
    rows.push_back({sys.mus[l], lv, std::abs(lv - sys.mus[l])});
  }
  return rows;
}

AlmostEigenSystem random_almost_system(int dim, int L, double max_delta4, std::mt19937_64& rng) {
  if (L < 1 || L > dim) throw ParameterError("random_almost_system requires 1 <= L <= dim");
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const CMatrix H = random_hermitian(dim, rng);
  Solver es(H);
  std::vector<int> idx(static_cast<std::size_t>(dim));
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  CMatrix V(dim, L);
  for (int l = 0; l < L; ++l) V.col(l) = es.eigenvectors().col(idx[static_cast<std::size_t>(l)]);
  CMatrix K = random_hermitian(dim, rng);
  K /= K.norm();
  double eps = 0.002 + 0.2 * U(rng);

  for (int attempt = 0; attempt < 80; ++attempt, eps *= 0.5) {
    const CMatrix Q = small_unitary(K, eps) * V;
    Solver cs(Q.adjoint() * H * Q);
    const CMatrix Psi = Q * cs.eigenvectors();
    AlmostEigenSystem sys;
    sys.H = H;
    double res = 0.0, cross = 0.0;
    std::vector<CVector> R;
    for (int l = 0; l < L; ++l) {
      sys.psis.push_back(Psi.col(l));
      sys.mus.push_back(cs.eigenvalues()[l]);
      R.push_back(H * Psi.col(l));
      res = std::max(res, (R.back() - sys.mus.back() * sys.psis.back()).squaredNorm());
    }
    for (int l = 0; l < L; ++l)
      for (int j = 0; j < L; ++j)
        if (l != j) cross += std::abs(R[static_cast<std::size_t>(l)].dot(R[static_cast<std::size_t>(j)]));
    sys.delta4 = std::max(res, cross);
    if (sys.delta4 <= max_delta4) return sys;
  }
  throw NumericalError("random_almost_system: could not reach the requested delta4");
}

double welch_lower_bound(int L, int dim) {
  if (L <= dim) return 0.0;
  return std::sqrt(static_cast<double>(L - dim) / (static_cast<double>(dim) * (L - 1)));
}

WelchResult welch_check(const CoherenceSet& cs) {
  WelchResult r;
  const double Lo = static_cast<double>(cs.dim);
  for (const auto& v : cs.vectors)
    if (v.size() != cs.dim || std::abs(v.norm() - 1.0) > 1e-12) throw ParameterError("welch_check: vectors must be unit norm in dimension L_o");
  r.max_coherence = max_coherence(cs.vectors);
  r.invariant_ok = r.max_coherence < cs.delta6 / Lo;
  const double d2 = cs.delta6 * cs.delta6;
  r.slack = d2 / (1.0 - d2 / Lo);
  r.L_bound_ok = d2 < Lo && static_cast<double>(cs.vectors.size()) <= Lo + r.slack;
  return r;
}

CoherenceSet random_coherence_set(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> N(0.0, 1.0);
  CoherenceSet cs;
  if (U(rng) < 0.5) {
    cs.dim = 2 + static_cast<int>(U(rng) * 39);
    const int L = 1 + static_cast<int>(U(rng) * cs.dim);
    cs.delta6 = 0.05 + 0.95 * U(rng);
    const CMatrix Q = random_unitary(cs.dim, rng);
    double sigma = 0.5 * cs.delta6 / (cs.dim * std::sqrt(static_cast<double>(cs.dim)));
    for (int attempt = 0; attempt < 60; ++attempt, sigma *= 0.5) {
      cs.vectors.clear();
      for (int l = 0; l < L; ++l) {
        CVector v = Q.col(l);
        for (int i = 0; i < cs.dim; ++i) v[i] += sigma * std::complex<double>(N(rng), N(rng));
        cs.vectors.push_back(v.normalized());
      }
      if (max_coherence(cs.vectors) < cs.delta6 / cs.dim) return cs;
    }
    throw NumericalError("random_coherence_set: could not meet the coherence invariant");
  }
  // Regular simplex: L_o + 1 unit vectors in dimension L_o with coherence exactly 1/L_o.
  cs.dim = 2 + static_cast<int>(U(rng) * 19);
  const int n = cs.dim + 1;
  cs.delta6 = 1.0 + (0.05 + 0.9 * U(rng)) * (std::sqrt(static_cast<double>(cs.dim)) - 1.0);
  const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
  const Eigen::MatrixXd B = es.eigenvectors().rightCols(cs.dim);  // eigenvalue-1 subspace
  const CMatrix Q = random_unitary(cs.dim, rng);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd w = B.transpose() * P.col(i);
    cs.vectors.push_back((Q * w.cast<std::complex<double>>()).normalized());
  }
  return cs;
}

CoherenceSearch min_max_coherence(int L, int dim, long random_trials, int optimizer_starts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CoherenceSearch out;
  out.best_random = INFINITY;
  out.random_trials = random_trials;
  out.optimizer_starts = optimizer_starts;
  std::vector<CVector> u(static_cast<std::size_t>(L));
  for (long t = 0; t < random_trials; ++t) {
    for (auto& v : u) v = random_unit(dim, rng);
    out.best_random = std::min(out.best_random, max_coherence(u));
  }
  out.best = out.best_random;
  // Projected gradient descent on sum |<u_i,u_j>|^(2p) with increasing p.
  for (int s = 0; s < optimizer_starts; ++s) {
    for (auto& v : u) v = random_unit(dim, rng);
    for (int p : {2, 4, 8, 16, 32, 64}) {
      double eta = 0.05;
      for (int it = 0; it < 400; ++it) {
        std::vector<CVector> g(u.size(), CVector::Zero(dim));
        const double c = std::max(max_coherence(u), 1e-300);
        for (std::size_t i = 0; i < u.size(); ++i)
          for (std::size_t j = 0; j < u.size(); ++j) {
            if (i == j) continue;
            const std::complex<double> gij = u[j].dot(u[i]);  // <u_j, u_i>
            const double w = std::pow(std::abs(gij) / c, 2 * (p - 1));
            g[i] += w * gij * u[j];
          }
        double gmax = 0.0;
        for (const auto& gi : g) gmax = std::max(gmax, gi.norm());
        if (gmax < 1e-14) break;
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = (u[i] - (eta / gmax) * c * g[i]).normalized();
        eta *= 0.995;
      }
      out.best = std::min(out.best, max_coherence(u));
    }
  }
  return out;
}

GramReport gram_report(const std::vector<CVector>& vectors, const std::vector<double>& weights) {
  if (vectors.empty()) throw ParameterError("gram_report needs at least one vector");
  if (!weights.empty() && weights.size() != vectors.size()) throw ParameterError("gram_report: one weight per vector");
  const std::size_t n = vectors.size();
  GramReport g;
  g.gram.resize(static_cast<long>(n), static_cast<long>(n));
  double norm_stat = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = vectors[i].dot(vectors[j]);
      g.gram(static_cast<long>(i), static_cast<long>(j)) = v;
      if (i != j) {
        g.max_offdiag = std::max(g.max_offdiag, std::abs(v));
        if (!weights.empty()) norm_stat = std::max(norm_stat, std::abs(v) * std::sqrt(weights[i] * weights[j]));
      }
    }
  if (!weights.empty()) g.normalized = norm_stat;
  return g;
}

GramReport gram_report(const std::vector<std::vector<double>>& vectors, const std::vector<double>& weights) {
  std::vector<CVector> cv;
  for (const auto& v : vectors) {
    CVector c(static_cast<long>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) c[static_cast<long>(i)] = v[i];
    cv.push_back(c);
  }
  return gram_report(cv, weights);
}

LemmaSuiteSummary run_lemma_suite(long trials, std::uint64_t seed, int threads, long coherence_random_trials,
                                  int coherence_starts) {
  if (trials < 1) throw ParameterError("lemma suite needs at least one trial");
  struct Trial {
    bool matched = false, hyp_ok = false;
    double gap_ratio = 0.0;
    bool welch_ok = false, super = false;
  };
  std::vector<Trial> out(static_cast<std::size_t>(trials));
  parallel_for(out.size(), resolve_threads(threads), [&](std::size_t i) {
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(ss);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const int dim = 2 + static_cast<int>(U(rng) * 39);
    const int L = 1 + static_cast<int>(U(rng) * std::min(10, dim));
    const double d4max = std::pow(10.0, -6.0 + 4.0 * U(rng));
    const AlmostEigenSystem sys = random_almost_system(dim, L, d4max, rng);
    Trial t;
    t.hyp_ok = check_hypotheses(sys).ok;
    try {
      const auto rows = nearest_eigen_check(sys);
      t.matched = true;
      const double b = std::sqrt(2.0 * sys.delta4);
      for (const auto& r : rows) t.gap_ratio = std::max(t.gap_ratio, b > 0.0 ? r.gap / b : (r.gap > 0.0 ? INFINITY : 0.0));
    } catch (const LemmaViolationError&) {
      t.matched = false;
    }
    const CoherenceSet cs = random_coherence_set(rng);
    const WelchResult w = welch_check(cs);
    t.welch_ok = w.invariant_ok && w.L_bound_ok;
    t.super = static_cast<int>(cs.vectors.size()) > cs.dim;
    out[i] = t;
  });
  LemmaSuiteSummary s;
  s.trials = trials;
  s.seed = seed;
  for (const auto& t : out) {
    s.matchings_found += t.matched;
    s.hypothesis_failures += !t.hyp_ok;
    s.worst_gap_ratio = std::max(s.worst_gap_ratio, t.gap_ratio);
    ++s.welch_sets;
    s.welch_ok += t.welch_ok;
    s.welch_supercomplete += t.super;
  }
  s.welch_lower = welch_lower_bound(5, 4);
  s.coherence = min_max_coherence(5, 4, coherence_random_trials, coherence_starts, seed);
  return s;
}

}  // namespace specflow
