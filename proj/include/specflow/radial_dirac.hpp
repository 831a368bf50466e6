#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specflow/counting.hpp"
#include "specflow/profiles.hpp"
#include "specflow/tridiag.hpp"

namespace specflow {

enum class Backend { interior_staggered, pole_disc };

const char* to_string(Backend b);

inline constexpr double kValidityFloor = 10.0;
inline constexpr double kCrossingMargin = 5.0;
inline constexpr int kDefaultCells = 2000;

// Discrete radial Dirac operator D_r = A + (r/2) J for one mode (k, m).
// Unknowns alternate alpha (grid nodes) and beta (cell midpoints); the chain starts and ends
// with alpha, so beta vanishes just outside the window.
struct ModeOperator {
  ModePoint mode;
  Backend backend = Backend::interior_staggered;
  double a = 0.0, b = 0.0;  // window
  int n_cells = 0;
  double dx = 0.0;
  std::vector<double> A_diag;
  std::vector<double> A_off;
  std::vector<double> J;    // +1 alpha, -1 beta
  std::vector<double> pos;  // rho location of each unknown

  std::size_t size() const { return A_diag.size(); }
  SymTridiag at(double r) const;
  double hermiticity_defect() const;  // 0 for a finite symmetric assembly, inf otherwise
};

struct EigenResult {
  double r = 0.0;
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> vectors;
  std::vector<double> residuals;
};

struct AssembleOptions {
  int n_cells = kDefaultCells;
  std::optional<Backend> backend;  // chosen from the mode location when empty
  double barrier = 36.0;           // trim the window where the zeroth-order kernel drops below e^-barrier
};

ModeOperator assemble(const ContactProfile& p, long k, long m, const AssembleOptions& opt = {});
ModeOperator assemble(const ContactProfile& p, long k, long m, int n_cells);

EigenResult small_eigs(const ModeOperator& op, double r, int q = 1);

// Zero crossing of the eigenvalue branch whose Sturm count changes across [r_lo, r_hi].
std::optional<double> crossing_r(const ModeOperator& op, double r_lo, double r_hi, double tol = 1e-10);

// Per-mode spectral flow over [r_lo, r_hi]: #neg(D_{r_lo}) - #neg(D_{r_hi}).
int mode_spectral_flow(const ModeOperator& op, double r_lo, double r_hi);

// 1/2 (|alpha|^2 - |beta|^2) for the unit eigenvector nearest zero.
double eigen_derivative(const ModeOperator& op, double r);
double eigen_derivative(const ModeOperator& op, const std::vector<double>& v);

struct CrossingRow {
  long k;
  long m;
  double gamma;
  double r_star;
  double residual;
};

using CrossingTable = std::vector<CrossingRow>;

struct ModelSfOptions {
  int n_cells = kDefaultCells;
  double margin = kCrossingMargin;
  double solve_floor = 1.0;  // lowest r used in per-mode brackets
  int threads = 0;           // 0: resolve from environment / hardware
  bool progress = false;
};

struct ModelSfResult {
  long count = 0;
  CrossingTable table;
};

ModelSfResult model_sf(const ContactProfile& p, double r, const SectorSpec& sector,
                       const ModelSfOptions& opt = {});

}  // namespace specflow
