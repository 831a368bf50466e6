#include "specflow/radial_dirac.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>

#include "specflow/errors.hpp"
#include "specflow/parallel.hpp"

namespace specflow {

namespace {

constexpr double kDeltaFloor = 1e-8;

struct Potentials {
  double P, W, C3, delta;
};

Potentials potentials(const ContactProfile& p, double kd, double md, double rho) {
  const ProfileValue pv = p.eval(rho);
  const double D = pv.delta();
  const double D1 = pv.delta1();
  return {(kd * pv.g1 - md * pv.f1) / (2.0 * D), (kd * pv.g - md * pv.f) / D + D1 / (2.0 * D),
          (pv.f2 * pv.g1 - pv.f1 * pv.g2) / (8.0 * D), D};
}

double integrate_W(const ContactProfile& p, double kd, double md, double a, double b) {
  static const double x[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                              0.8611363115940526};
  static const double w[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                              0.3478548451374538};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += w[i] * potentials(p, kd, md, c + h * x[i]).W;
  return h * s;
}

std::string mode_name(const ModePoint& mp) {
  return "(" + std::to_string(mp.k) + "," + std::to_string(mp.m) + ")";
}

}  // namespace

const char* to_string(Backend b) {
  return b == Backend::pole_disc ? "pole_disc" : "interior_staggered";
}

SymTridiag ModeOperator::at(double r) const {
  SymTridiag T;
  T.d.resize(A_diag.size());
  for (std::size_t i = 0; i < A_diag.size(); ++i) T.d[i] = A_diag[i] + 0.5 * r * J[i];
  T.e = A_off;
  return T;
}

double ModeOperator::hermiticity_defect() const {
  // One off-diagonal is stored per pair, so the only possible defect is a non-finite entry.
  for (double x : A_off)
    if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
  for (double x : A_diag)
    if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
  return 0.0;
}

ModeOperator assemble(const ContactProfile& p, long k, long m, int n_cells) {
  AssembleOptions opt;
  opt.n_cells = n_cells;
  return assemble(p, k, m, opt);
}

ModeOperator assemble(const ContactProfile& p, long k, long m, const AssembleOptions& opt) {
  if (opt.n_cells < 200) throw ParameterError("n_cells must be at least 200");
  const ModePoint mp = mode_point(p, k, m);
  const bool pole = is_pole_mode(p, mp);
  const Backend backend = opt.backend.value_or(pole ? Backend::pole_disc : Backend::interior_staggered);
  if (backend == Backend::pole_disc && !pole)
    throw BackendMismatchError("mode " + mode_name(mp) + " is not within the pole region; pole_disc does not apply");

  const ContactProfile disc = backend == Backend::pole_disc ? p.disc_model(pole_side_lower(p, mp)) : ContactProfile{};
  const ContactProfile& model = backend == Backend::pole_disc ? disc : p;
  const double kd = static_cast<double>(k), md = static_cast<double>(m);

  const double w = std::max(0.3, 20.0 / std::sqrt(mp.gamma));
  double a = std::max(model.rho_lo, mp.rho_star - w);
  double b = std::min(model.rho_hi, mp.rho_star + w);

  // Trim to where the zeroth-order kernel exp(int W) stays above e^-barrier.
  {
    const int M = 4000;
    const double h = (b - a) / M;
    std::vector<double> lh(M + 1, 0.0);
    for (int i = 0; i < M; ++i) lh[i + 1] = lh[i] + h * potentials(model, kd, md, a + (i + 0.5) * h).W;
    const int top = static_cast<int>(std::max_element(lh.begin(), lh.end()) - lh.begin());
    const double peak = lh[top];
    int lo = top, hi = top;
    while (lo > 0 && lh[lo] - peak > -opt.barrier) --lo;
    while (hi < M && lh[hi] - peak > -opt.barrier) ++hi;
    const double na = a + lo * h, nb = a + hi * h;
    a = na;
    b = nb;
  }

  ModeOperator op;
  op.mode = mp;
  op.backend = backend;
  op.a = a;
  op.b = b;
  op.n_cells = opt.n_cells;
  const int n = opt.n_cells;
  const double dx = (b - a) / n;
  op.dx = dx;
  const std::size_t N = static_cast<std::size_t>(2 * n - 3);
  op.A_diag.resize(N);
  op.A_off.resize(N - 1);
  op.J.resize(N);
  op.pos.resize(N);

  auto check_floor = [&](const Potentials& pt, double rho) {
    if (backend == Backend::interior_staggered && pt.delta < kDeltaFloor)
      throw BackendMismatchError("window of mode " + mode_name(mp) + " samples Delta=" + std::to_string(pt.delta) +
                                 " < 1e-8 at rho=" + std::to_string(rho) + "; use pole_disc");
  };

  for (int j = 1; j <= n - 1; ++j) {
    const double x = a + j * dx;
    const Potentials pt = potentials(model, kd, md, x);
    check_floor(pt, x);
    const std::size_t ia = static_cast<std::size_t>(2 * (j - 1));
    op.A_diag[ia] = pt.P;
    op.J[ia] = 1.0;
    op.pos[ia] = x;
    if (j <= n - 2) {
      const double xm = x + 0.5 * dx;
      const Potentials pm = potentials(model, kd, md, xm);
      check_floor(pm, xm);
      op.A_diag[ia + 1] = -1.0 - pm.C3 - pm.P;
      op.J[ia + 1] = -1.0;
      op.pos[ia + 1] = xm;
      // exponentially fitted differences: (d - W) alpha at the midpoint, (-d - W) beta at nodes
      const double Il = integrate_W(model, kd, md, x, xm);
      const double Im = integrate_W(model, kd, md, xm, x + dx);
      op.A_off[ia] = -std::exp(Il) / dx;
      op.A_off[ia + 1] = std::exp(-Im) / dx;
    }
  }
  return op;
}

EigenResult small_eigs(const ModeOperator& op, double r, int q) {
  if (!(r > 0.0)) throw ParameterError("small_eigs requires r > 0");
  const SymTridiag T = op.at(r);
  const int N = static_cast<int>(T.size());
  q = std::min(q, N);
  const int c0 = negcount(T, 0.0);
  std::vector<double> cand;
  for (int i = std::max(0, c0 - q); i < std::min(N, c0 + q); ++i) cand.push_back(kth_eigenvalue(T, i));
  std::sort(cand.begin(), cand.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
  cand.resize(static_cast<std::size_t>(q));

  EigenResult res;
  res.r = r;
  const double scale = std::max(1.0, T.norm_bound());
  for (double lam : cand) {
    std::vector<double> v = eigenvector(T, lam);
    const double resid = residual_norm(T, lam, v);
    if (!(resid <= 1e-8))
      throw NumericalError("small_eigs: residual " + std::to_string(resid) + " exceeds 1e-8 for mode " +
                           mode_name(op.mode) + " at r=" + std::to_string(r) +
                           " (matrix scale " + std::to_string(scale) + ")");
    res.eigenvalues.push_back(lam);
    res.vectors.push_back(std::move(v));
    res.residuals.push_back(resid);
  }
  return res;
}

int mode_spectral_flow(const ModeOperator& op, double r_lo, double r_hi) {
  return negcount(op.at(r_lo), 0.0) - negcount(op.at(r_hi), 0.0);
}

double eigen_derivative(const ModeOperator& op, const std::vector<double>& v) {
  double s = 0.0, nrm = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += op.J[i] * v[i] * v[i];
    nrm += v[i] * v[i];
  }
  return 0.5 * s / nrm;
}

double eigen_derivative(const ModeOperator& op, double r) {
  const EigenResult er = small_eigs(op, r, 1);
  return eigen_derivative(op, er.vectors.front());
}

std::optional<double> crossing_r(const ModeOperator& op, double r_lo, double r_hi, double tol) {
  if (!(r_lo < r_hi)) throw ParameterError("crossing_r requires r_lo < r_hi");
  if (!(r_lo > 0.0)) throw ParameterError("crossing_r requires r_lo > 0");
  const int c_lo = negcount(op.at(r_lo), 0.0);
  const int c_hi = negcount(op.at(r_hi), 0.0);
  const int flow = c_lo - c_hi;
  if (flow == 0) return std::nullopt;
  if (flow != 1)
    throw MultiCrossingError("mode " + mode_name(op.mode) + ": spectral flow " + std::to_string(flow) +
                                 " across [" + std::to_string(r_lo) + ", " + std::to_string(r_hi) +
                                 "]; grid may be under-resolved",
                             op.mode.k, op.mode.m);
  // The crossing branch is the eigenvalue with ascending index c_hi throughout the bracket.
  const int idx = c_hi;
  double a = r_lo, b = r_hi;
  double r = (op.mode.gamma > a && op.mode.gamma < b) ? op.mode.gamma : 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    const SymTridiag T = op.at(r);
    const double lam = kth_eigenvalue(T, idx);
    if (std::abs(lam) <= tol) return r;
    if (lam < 0.0)
      a = r;
    else
      b = r;
    if (b - a <= 1e-14 * std::max(1.0, r)) return r;
    const std::vector<double> v = eigenvector(T, lam);
    const double slope = eigen_derivative(op, v);
    double rn = slope > 0.0 ? r - lam / slope : 0.5 * (a + b);
    if (!(rn > a && rn < b)) rn = 0.5 * (a + b);
    r = rn;
  }
  return r;
}

ModelSfResult model_sf(const ContactProfile& p, double r, const SectorSpec& sector, const ModelSfOptions& opt) {
  if (!(r >= kValidityFloor))
    throw ParameterError("model_sf requires r >= " + std::to_string(kValidityFloor));
  const std::vector<ModePoint> modes = enumerate_modes(p, r + opt.margin, sector);
  std::vector<std::optional<CrossingRow>> rows(modes.size());
  std::mutex mu;
  std::size_t done = 0;
  parallel_for(modes.size(), resolve_threads(opt.threads), [&](std::size_t i) {
    const ModePoint& mp = modes[i];
    const double lo = std::max(opt.solve_floor, mp.gamma - opt.margin);
    const double hi = mp.gamma + opt.margin;
    if (lo < hi) {
      const ModeOperator op = assemble(p, mp.k, mp.m, opt.n_cells);
      if (const auto rs = crossing_r(op, lo, hi)) {
        const int c_hi = negcount(op.at(hi), 0.0);
        const double lam = kth_eigenvalue(op.at(*rs), c_hi);
        rows[i] = CrossingRow{mp.k, mp.m, mp.gamma, *rs, std::abs(lam)};
      }
    }
    if (opt.progress) {
      std::lock_guard<std::mutex> lk(mu);
      if (++done % 100 == 0) std::fprintf(stderr, "sf model: %zu / %zu modes\n", done, modes.size());
    }
  });
  ModelSfResult res;
  for (auto& row : rows)
    if (row) {
      if (row->r_star <= r) ++res.count;
      res.table.push_back(*row);
    }
  return res;
}

}  // namespace specflow
