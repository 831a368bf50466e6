#include "specflow/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "specflow/errors.hpp"

namespace specflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieRel = 1e-12;

struct FGrid {
  std::vector<double> x, f;
  std::vector<double> max_x, max_f;  // refined interior local maxima of f
  double f_max = 0.0;
};

FGrid sample_f(const ContactProfile& p, int n = 20000) {
  FGrid G;
  G.x.resize(n + 1);
  G.f.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    G.x[i] = p.rho_lo + (p.rho_hi - p.rho_lo) * i / n;
    G.f[i] = p.f(G.x[i]);
  }
  for (int i = 1; i < n; ++i) {
    if (G.f[i] >= G.f[i - 1] && G.f[i] >= G.f[i + 1] && !(G.f[i] == G.f[i - 1] && G.f[i] == G.f[i + 1])) {
      // golden-section refinement on [x_{i-1}, x_{i+1}]
      double a = G.x[i - 1], b = G.x[i + 1];
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double c = b - gr * (b - a), d = a + gr * (b - a);
      for (int it = 0; it < 80; ++it) {
        if (p.f(c) > p.f(d))
          b = d;
        else
          a = c;
        c = b - gr * (b - a);
        d = a + gr * (b - a);
      }
      const double xm = 0.5 * (a + b);
      G.max_x.push_back(xm);
      G.max_f.push_back(std::max(p.f(xm), G.f[i]));
    }
  }
  for (double v : G.f) G.f_max = std::max(G.f_max, v);
  for (double v : G.max_f) G.f_max = std::max(G.f_max, v);
  return G;
}

double level_root(const ContactProfile& p, double a, double b, double L) {
  // f(a) and f(b) straddle L
  const bool a_above = p.f(a) >= L;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if ((p.f(mid) >= L) == a_above)
      a = mid;
    else
      b = mid;
  }
  return a_above ? a : b;
}

// Maximal rho-intervals on which f >= L.
std::vector<std::pair<double, double>> superlevel(const ContactProfile& p, const FGrid& G, double L) {
  std::vector<std::pair<double, double>> out;
  const std::size_t n = G.x.size();
  std::size_t i = 0;
  while (i < n) {
    if (G.f[i] < L) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && G.f[j + 1] >= L) ++j;
    const double lo = i == 0 ? G.x[0] : level_root(p, G.x[i - 1], G.x[i], L);
    const double hi = j + 1 == n ? G.x[n - 1] : level_root(p, G.x[j], G.x[j + 1], L);
    out.emplace_back(lo, hi);
    i = j + 1;
  }
  // peaks that poke above L between samples
  for (std::size_t q = 0; q < G.max_x.size(); ++q) {
    if (G.max_f[q] < L) continue;
    const double xm = G.max_x[q];
    bool covered = false;
    for (auto& iv : out)
      if (xm >= iv.first && xm <= iv.second) covered = true;
    if (covered) continue;
    const auto it = std::upper_bound(G.x.begin(), G.x.end(), xm);
    const std::size_t k = static_cast<std::size_t>(it - G.x.begin());
    if (k == 0 || k >= n) continue;
    out.emplace_back(level_root(p, G.x[k - 1], xm, L), level_root(p, xm, G.x[k], L));
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <class Fn>
void for_each_lattice_range(const ContactProfile& p, double r, const SectorSpec& sector, Fn&& emit) {
  // k = 0 axis
  {
    const double g_lo = p.g(p.rho_lo), g_hi = p.g(p.rho_hi);
    const long mp = static_cast<long>(std::floor(r * std::abs(g_lo) / 2.0 * (1.0 + kTieRel)));
    const long mn = static_cast<long>(std::floor(r * std::abs(g_hi) / 2.0 * (1.0 + kTieRel)));
    long lo = 1, hi = mp;
    lo = std::max<double>(lo, std::ceil(sector.m_min(0) - kTieRel));
    hi = std::min<double>(hi, std::floor(sector.m_max(0) + kTieRel));
    if (hi >= lo) emit(0L, lo, hi);
    lo = -mn;
    hi = -1;
    lo = std::max<double>(lo, std::ceil(sector.m_min(0) - kTieRel));
    hi = std::min<double>(hi, std::floor(sector.m_max(0) + kTieRel));
    if (hi >= lo) emit(0L, lo, hi);
  }
  if (r <= 0.0) return;
  const FGrid G = sample_f(p);
  const long kmax = static_cast<long>(std::floor(r * G.f_max / 2.0 * (1.0 + kTieRel)));
  for (long k = 1; k <= kmax; ++k) {
    const double kd = static_cast<double>(k);
    const double L = 2.0 * kd / r * (1.0 - kTieRel);
    const double smin = sector.m_min(k), smax = sector.m_max(k);
    for (const auto& iv : superlevel(p, G, L)) {
      // g/f decreases, so the m-range is reversed relative to rho
      const double mlo = kd * p.g(iv.second) / p.f(iv.second);
      const double mhi = kd * p.g(iv.first) / p.f(iv.first);
      const double a = std::max(mlo, smin), b = std::min(mhi, smax);
      const long ilo = static_cast<long>(std::ceil(a - kTieRel * std::max(1.0, std::abs(a))));
      const long ihi = static_cast<long>(std::floor(b + kTieRel * std::max(1.0, std::abs(b))));
      if (ihi >= ilo) emit(k, ilo, ihi);
    }
  }
}

}  // namespace

const char* to_string(SectorKind k) {
  switch (k) {
    case SectorKind::all: return "all";
    case SectorKind::binding_sector: return "binding";
    case SectorKind::dehn_band: return "dehn";
  }
  return "all";
}

SectorKind sector_kind_from_string(const std::string& s) {
  if (s == "all") return SectorKind::all;
  if (s == "binding" || s == "binding_sector") return SectorKind::binding_sector;
  if (s == "dehn" || s == "dehn_band") return SectorKind::dehn_band;
  throw ParameterError("unknown sector '" + s + "' (expected all, binding or dehn)");
}

double SectorSpec::m_min(long k) const {
  const double kd = static_cast<double>(k);
  switch (kind) {
    case SectorKind::all: return -kInf;
    case SectorKind::binding_sector: return kd / V;
    case SectorKind::dehn_band:
      return 2.0 * (v - 1.0) * kd / (V + denom_sign * 2.0 * (v - 1.0) * tau_plus);
  }
  return -kInf;
}

double SectorSpec::m_max(long k) const {
  const double kd = static_cast<double>(k);
  if (kind == SectorKind::dehn_band)
    return 2.0 * (v + 1.0) * kd / (V + denom_sign * 2.0 * (v + 1.0) * tau_minus);
  return kInf;
}

bool SectorSpec::contains(long k, long m) const {
  const double md = static_cast<double>(m);
  const double a = m_min(k), b = m_max(k);
  return md >= a - kTieRel * std::max(1.0, std::abs(a)) && md <= b + kTieRel * std::max(1.0, std::abs(b));
}

SectorSpec sector_all() { return SectorSpec{}; }

SectorSpec sector_binding(double V) {
  SectorSpec s;
  s.kind = SectorKind::binding_sector;
  s.V = V;
  return s;
}

SectorSpec sector_dehn(const ContactProfile& dehn, int denom_sign) {
  if (dehn.kind != ProfileKind::dehn_twist || !dehn.params.twist)
    throw ParameterError("Dehn band sector needs a Dehn twist profile");
  SectorSpec s;
  s.kind = SectorKind::dehn_band;
  s.V = dehn.params.V;
  s.v = dehn.params.v;
  s.tau_plus = dehn.params.twist->tau(1.0);
  s.tau_minus = dehn.params.twist->tau(-1.0);
  s.denom_sign = denom_sign;
  return s;
}

SectorSpec sector_for(const ContactProfile& p, SectorKind kind) {
  switch (kind) {
    case SectorKind::all: return sector_all();
    case SectorKind::binding_sector: return sector_binding(p.params.V);
    case SectorKind::dehn_band: return sector_dehn(p);
  }
  return sector_all();
}

std::vector<ModePoint> enumerate_modes(const ContactProfile& p, double r, const SectorSpec& sector) {
  std::vector<ModePoint> out;
  for_each_lattice_range(p, r, sector, [&](long k, long lo, long hi) {
    for (long m = lo; m <= hi; ++m) out.push_back(mode_point(p, k, m));
  });
  return out;
}

long lattice_count(const ContactProfile& p, double r, const SectorSpec& sector) {
  long total = 0;
  for_each_lattice_range(p, r, sector, [&](long, long lo, long hi) { total += hi - lo + 1; });
  return total;
}

long lattice_count_brute(const ContactProfile& p, double r, const SectorSpec& sector) {
  double fmax = 0.0, gmax = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double rho = p.rho_lo + (p.rho_hi - p.rho_lo) * i / 20000.0;
    fmax = std::max(fmax, p.f(rho));
    gmax = std::max(gmax, std::abs(p.g(rho)));
  }
  const long kmax = static_cast<long>(std::ceil(r * fmax * 1.01 / 2.0)) + 1;
  const long M = static_cast<long>(std::ceil(r * gmax / 2.0)) + 2;
  long count = 0;
  for (long k = 0; k <= kmax; ++k)
    for (long m = -M; m <= M; ++m) {
      if (k == 0 && m == 0) continue;
      if (!sector.contains(k, m)) continue;
      if (mode_point(p, k, m).gamma <= r * (1.0 + kTieRel)) ++count;
    }
  return count;
}

EtaH eta_circle(double theta) {
  const double fr = theta - std::floor(theta);
  if (fr < 1e-12 || fr > 1.0 - 1e-12) return {0.0, 1};
  return {1.0 - 2.0 * fr, 0};
}

int SigmaData::binding_count() const {
  return static_cast<int>(std::count_if(circles.begin(), circles.end(),
                                        [](const BoundaryCircle& c) { return c.kind == CircleKind::binding; }));
}

int SigmaData::dehn_count() const {
  return static_cast<int>(std::count_if(circles.begin(), circles.end(),
                                        [](const BoundaryCircle& c) { return c.kind == CircleKind::dehn; })) /
         2;
}

BoundaryCircle binding_circle(double V) { return {1.0 / V, 0.0, 1, CircleKind::binding}; }

BoundaryCircle dehn_circle_upper(double V, double v) {
  return {2.0 * (v - 1.0) / V, 0.0, 1, CircleKind::dehn};
}

BoundaryCircle dehn_circle_lower(double V, double v) {
  return {2.0 * (v + 1.0) / V, 0.0, -1, CircleKind::dehn};
}

SigmaData default_sigma(double V, double v) {
  SigmaData sd;
  sd.V = V;
  sd.area = std::numbers::pi;
  sd.euler = -7;
  for (int i = 0; i < 5; ++i) sd.circles.push_back(binding_circle(V));
  sd.circles.push_back(dehn_circle_upper(V, v));
  sd.circles.push_back(dehn_circle_lower(V, v));
  return sd;
}

double index_sigma_raw(const SigmaData& sd, long n) {
  double s = static_cast<double>(n) * sd.area / (sd.V * std::numbers::pi) + 0.5 * static_cast<double>(sd.euler);
  for (const auto& c : sd.circles) {
    const EtaH e = eta_circle(c.theta(n));
    s += 0.5 * (c.orientation * e.eta + e.h);
  }
  return s;
}

long index_sigma(const SigmaData& sd, long n) {
  const double raw = index_sigma_raw(sd, n);
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) > 1e-9)
    throw DataInconsistencyError("index formula is not integral at n=" + std::to_string(n) +
                                 " (value " + std::to_string(raw) + "); check area, euler and circles");
  return static_cast<long>(rounded);
}

double index_sigma_sum(const SigmaData& sd, long n_max) {
  double s = 0.0;
  for (long n = 1; n <= n_max; ++n) s += static_cast<double>(index_sigma(sd, n));
  return s;
}

SnSequence build_sn(std::vector<double> crossings, double delta3, double V, long n_max) {
  if (!(delta3 > 0.0)) throw ParameterError("delta3 must be positive");
  std::sort(crossings.begin(), crossings.end());
  auto count_in = [&](double a, double b) {
    return static_cast<long>(std::upper_bound(crossings.begin(), crossings.end(), b) -
                             std::lower_bound(crossings.begin(), crossings.end(), a));
  };
  SnSequence S;
  S.delta3 = delta3;
  const double threshold = 8.0 * (delta3 + 1.0) * V * V;
  double prev = 1.0 / V;
  for (long n = 1; n <= n_max; ++n) {
    const double gn = 2.0 * static_cast<double>(n) / V;
    const double half = delta3 / prev;
    double s;
    if (static_cast<double>(n) <= threshold) {
      s = gn + 1.0 / V;
    } else {
      if (S.first_subdivided == 0) S.first_subdivided = n;
      const double a = gn + 3.0 / (4.0 * V), b = gn + 5.0 / (4.0 * V);
      const double len = 2.0 * half;
      const long parts = static_cast<long>(std::floor((b - a) / len));
      if (parts < 1)
        throw ParameterError("s_n subdivision is empty at n=" + std::to_string(n) + "; delta3 too large");
      long best = -1, best_j = 0;
      for (long j = 0; j < parts; ++j) {
        const long c = count_in(a + j * len, a + (j + 1) * len);
        if (best < 0 || c < best) best = c, best_j = j;
      }
      s = a + (best_j + 0.5) * len;
    }
    const long near = count_in(s - half, s + half);
    S.values.push_back(s);
    S.near_counts.push_back(near);
    S.budget = std::max(S.budget, near);
    prev = s;
  }
  return S;
}

double a_wedge_da(const ContactProfile& binding, const ContactProfile& dehn, const SigmaData& sd) {
  const double pi = std::numbers::pi;
  return 8.0 * pi * pi * sd.binding_count() * integral_delta(binding, 0.0, 1.0) +
         8.0 * pi * pi * sd.dehn_count() * integral_delta(dehn, -1.0, 1.0) +
         4.0 * pi * sd.V * sd.area;
}

AsymptoticReport asymptotic_report(const ContactProfile& binding, const ContactProfile& dehn,
                                   const SigmaData& sd, const std::vector<double>& r_grid) {
  AsymptoticReport rep;
  const double pi = std::numbers::pi;
  rep.integral_binding = integral_delta(binding, 0.0, 1.0);
  rep.integral_dehn = integral_delta(dehn, -1.0, 1.0);
  rep.a_wedge_da = a_wedge_da(binding, dehn, sd);
  rep.leading_coefficient = rep.a_wedge_da / (32.0 * pi * pi);
  const SectorSpec sb = sector_binding(binding.params.V);
  const SectorSpec sdh = sector_dehn(dehn);
  std::vector<double> rs, rem;
  for (double r : r_grid) {
    ReportRow row;
    row.r = r;
    row.I_check = lattice_count(binding, r, sb);
    row.I_tilde = lattice_count(dehn, r, sdh);
    row.I_sigma_sum = index_sigma_sum(sd, static_cast<long>(std::floor(sd.V * r / 2.0)));
    row.combined = sd.binding_count() * static_cast<double>(row.I_check) +
                   sd.dehn_count() * static_cast<double>(row.I_tilde) + row.I_sigma_sum;
    row.predicted = rep.leading_coefficient * r * r;
    row.remainder_over_r = (row.combined - row.predicted) / r;
    rep.rows.push_back(row);
    rs.push_back(r);
    rem.push_back(std::abs(row.remainder_over_r));
  }
  rep.trend_growth = rs.size() >= 2 && monotone_growth(rs, rem);
  return rep;
}

bool monotone_growth(const std::vector<double>& r, const std::vector<double>& values, double min_slope) {
  if (values.size() < 2) return false;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) return false;
  if (values.front() <= 0.0) return true;
  const double slope = std::log(values.back() / values.front()) / std::log(r.back() / r.front());
  return slope >= min_slope;
}

}  // namespace specflow
