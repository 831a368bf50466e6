#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace specflow {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

struct AlmostEigenSystem {
  CMatrix H;
  std::vector<CVector> psis;
  std::vector<double> mus;
  double delta4 = 0.0;
};

struct HypothesisReport {
  double orthonormality_defect = 0.0;  // max |<psi_l, psi_l'> - delta_ll'|
  double cross_term_defect = 0.0;      // max_{l != l'} |<H psi_l, psi_l'>|
  double max_residual2 = 0.0;          // max |H psi_l - mu_l psi_l|^2
  double image_overlap_sum = 0.0;      // sum_{l != l'} |<H psi_l, H psi_l'>|
  bool ok = false;
};

HypothesisReport check_hypotheses(const AlmostEigenSystem& sys, double tol = 1e-12);

struct MatchRow {
  double mu;
  double lambda;
  double gap;
};

// Injective assignment of true eigenvalues (with multiplicity) to the mus with every gap
// at most sqrt(2 delta4). Throws LemmaViolationError when none exists.
std::vector<MatchRow> nearest_eigen_check(const AlmostEigenSystem& sys);

// Hermitian H of size dim, L of its eigenvectors rotated by a small unitary and re-diagonalized
// inside their span; delta4 is computed from the result and kept at or below max_delta4.
AlmostEigenSystem random_almost_system(int dim, int L, double max_delta4, std::mt19937_64& rng);

struct CoherenceSet {
  std::vector<CVector> vectors;
  int dim = 0;  // L_o
  double delta6 = 0.0;
};

struct WelchResult {
  bool invariant_ok = false;  // pairwise coherence < delta6 / L_o
  bool L_bound_ok = false;    // L <= L_o + delta6^2 / (1 - delta6^2 / L_o)
  double max_coherence = 0.0;
  double slack = 0.0;         // the c above
};

WelchResult welch_check(const CoherenceSet& cs);

// Welch lower bound on the maximal coherence of L unit vectors in dimension dim.
double welch_lower_bound(int L, int dim);

// Perturbed orthonormal families and rotated simplex frames that satisfy the coherence invariant.
CoherenceSet random_coherence_set(std::mt19937_64& rng);

struct CoherenceSearch {
  double best = 0.0;          // smallest max-coherence found
  double best_random = 0.0;   // smallest over the random draws only
  long random_trials = 0;
  int optimizer_starts = 0;
};

// Minimizes the max pairwise coherence of L unit vectors in C^dim.
CoherenceSearch min_max_coherence(int L, int dim, long random_trials, int optimizer_starts, std::uint64_t seed);

struct GramReport {
  CMatrix gram;
  double max_offdiag = 0.0;
  std::optional<double> normalized;  // max |<psi_i, psi_j>| sqrt(r_i r_j)
};

GramReport gram_report(const std::vector<CVector>& vectors, const std::vector<double>& weights = {});
GramReport gram_report(const std::vector<std::vector<double>>& vectors, const std::vector<double>& weights = {});

struct LemmaSuiteSummary {
  long trials = 0;
  std::uint64_t seed = 0;
  long matchings_found = 0;
  long hypothesis_failures = 0;
  double worst_gap_ratio = 0.0;  // max gap / sqrt(2 delta4)
  long welch_sets = 0;
  long welch_ok = 0;
  long welch_supercomplete = 0;  // sets with L > L_o
  double welch_lower = 0.0;
  CoherenceSearch coherence;
};

LemmaSuiteSummary run_lemma_suite(long trials, std::uint64_t seed, int threads = 0,
                                  long coherence_random_trials = 100000, int coherence_starts = 40);

}  // namespace specflow
