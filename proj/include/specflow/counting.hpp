#pragma once

#include <string>
#include <vector>

#include "specflow/profiles.hpp"

namespace specflow {

enum class SectorKind { all, binding_sector, dehn_band };

const char* to_string(SectorKind k);
SectorKind sector_kind_from_string(const std::string& s);

struct SectorSpec {
  SectorKind kind = SectorKind::all;
  double V = 0.0;
  double v = 0.0;
  double tau_plus = 0.0;   // tau(1)
  double tau_minus = 0.0;  // tau(-1)
  // Dehn band denominators are V + denom_sign * 2(v -+ 1) tau(+-1); -1 matches the mode structure.
  int denom_sign = -1;

  double m_min(long k) const;  // -inf when unbounded
  double m_max(long k) const;  // +inf when unbounded
  bool contains(long k, long m) const;
};

SectorSpec sector_all();
SectorSpec sector_binding(double V);
SectorSpec sector_dehn(const ContactProfile& dehn, int denom_sign = -1);
SectorSpec sector_for(const ContactProfile& p, SectorKind kind);

// (k, m) in the sector with gamma_{k,m} <= r, enumerated through the level sets of f.
std::vector<ModePoint> enumerate_modes(const ContactProfile& p, double r, const SectorSpec& sector);
long lattice_count(const ContactProfile& p, double r, const SectorSpec& sector);
// Same count by direct mode_point evaluation (small r only).
long lattice_count_brute(const ContactProfile& p, double r, const SectorSpec& sector);

struct EtaH {
  double eta;
  int h;
};
EtaH eta_circle(double theta);

enum class CircleKind { binding, dehn };

struct BoundaryCircle {
  double slope = 0.0;   // theta(n) = slope * n + offset
  double offset = 0.0;
  int orientation = 1;  // -1 reverses the boundary operator, negating eta
  CircleKind kind = CircleKind::binding;
  double theta(long n) const { return slope * static_cast<double>(n) + offset; }
};

struct SigmaData {
  double V = 5.0;
  double area = 0.0;
  long euler = 0;
  std::vector<BoundaryCircle> circles;
  int binding_count() const;
  int dehn_count() const;  // twist regions; each contributes two circles
};

BoundaryCircle binding_circle(double V);
// Circles on the two sides (rho = 1 and rho = -1) of a Dehn twist region.
BoundaryCircle dehn_circle_upper(double V, double v);
BoundaryCircle dehn_circle_lower(double V, double v);

// Genus-1 page with five binding circles and one twist region (area pi, chi = -7).
SigmaData default_sigma(double V, double v);

double index_sigma_raw(const SigmaData& sd, long n);
long index_sigma(const SigmaData& sd, long n);
double index_sigma_sum(const SigmaData& sd, long n_max);

struct SnSequence {
  std::vector<double> values;     // s_1, s_2, ...
  std::vector<long> near_counts;  // crossings within +-delta3 / s_{n-1} of s_n
  double delta3 = 0.0;
  long budget = 0;
  long first_subdivided = 0;      // first n chosen by subdivision
};

SnSequence build_sn(std::vector<double> crossings, double delta3, double V, long n_max);

struct ReportRow {
  double r;
  long I_check;
  long I_tilde;
  double I_sigma_sum;
  double combined;
  double predicted;
  double remainder_over_r;
};

struct AsymptoticReport {
  std::vector<ReportRow> rows;
  double integral_binding = 0.0;  // int_0^1 Delta (binding)
  double integral_dehn = 0.0;     // int_{-1}^{1} Delta (Dehn)
  double a_wedge_da = 0.0;
  double leading_coefficient = 0.0;  // predicted / r^2
  bool trend_growth = false;
};

double a_wedge_da(const ContactProfile& binding, const ContactProfile& dehn, const SigmaData& sd);
AsymptoticReport asymptotic_report(const ContactProfile& binding, const ContactProfile& dehn,
                                   const SigmaData& sd, const std::vector<double>& r_grid);

// Growth test used by the trend checks: strictly increasing at every step and
// log-log slope of the last vs first value at least `min_slope`.
bool monotone_growth(const std::vector<double>& r, const std::vector<double>& values,
                     double min_slope = 0.25);

}  // namespace specflow
