#pragma once

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "fringe.hpp"
#include "kpower.hpp"

namespace nslit {

/// Two optical frequencies probed through one interferometer delay.
struct SpectralPair {
  double f0_hz = 1.0;
  double f1_hz = 1.0;
  double delta_t_s = 1.0;
};

inline void validate(const SpectralPair& p) {
  const bool ok = std::isfinite(p.f0_hz) && p.f0_hz > 0.0 && std::isfinite(p.f1_hz) &&
                  p.f1_hz > 0.0 && std::isfinite(p.delta_t_s) && p.delta_t_s > 0.0;
  if (!ok) throw DomainError("SpectralPair: f0, f1, deltaT must be finite and > 0");
}

struct ResolvabilityReport {
  double peak_separation = 0.0;    // rad
  double fwhm = 0.0;               // rad
  double margin = 0.0;             // separation / fwhm
  bool resolvable = false;         // margin >= 1
  double min_resolvable_df = 0.0;  // Hz
};

/// Fringe-peak separation delta_alpha = 2 pi |f1 - f0| deltaT.
inline double peak_separation(const SpectralPair& pair) {
  validate(pair);
  return 2.0 * kPi * std::abs(pair.f1_hz - pair.f0_hz) * pair.delta_t_s;
}

/// Smallest resolvable frequency difference fwhm / (2 pi deltaT); frequencies
/// separated by at least this much pass the width criterion by construction.
inline double min_resolvable_df(const FringeParams& params, const KPowerSpec& spec,
                                double delta_t_s) {
  if (!std::isfinite(delta_t_s) || !(delta_t_s > 0.0))
    throw DomainError("min_resolvable_df: deltaT must be finite and > 0");
  return fwhm_exact(params, spec).fwhm / (2.0 * kPi * delta_t_s);
}

/// Width (Rayleigh) criterion: the pair is resolvable iff the peak separation
/// is at least the FWHM of a single Kth-powered line.
inline ResolvabilityReport resolvable(const SpectralPair& pair, const FringeParams& params,
                                      const KPowerSpec& spec) {
  const double sep = peak_separation(pair);
  const double width = fwhm_exact(params, spec).fwhm;
  ResolvabilityReport report;
  report.peak_separation = sep;
  report.fwhm = width;
  report.margin = sep / width;
  report.resolvable = sep >= width;
  report.min_resolvable_df = width / (2.0 * kPi * pair.delta_t_s);
  return report;
}

/// Peak phase 2 pi f deltaT folded into [-pi/2, pi/2]; the fringe repeats
/// every pi, so this is where the line's principal peak lands.
inline double centered_peak_phase(double f_hz, double delta_t_s) {
  return std::remainder(alpha_from_frequency(f_hz, delta_t_s), kPi);
}

/// Incoherent two-line overlay: pointwise sum of the two Kth-powered
/// normalized fringes, each centered at its own folded peak phase. Distinct
/// frequencies leave no stationary cross term, so intensities add.
/// The output is not normalized (values reach 2 where the lines coincide).
inline FringeCurve composite_curve(const SpectralPair& pair, const FringeParams& params,
                                   const KPowerSpec& spec, const PhaseGrid& grid) {
  validate(pair);
  validate(params);
  validate(spec);
  validate(grid);
  const double c0 = centered_peak_phase(pair.f0_hz, pair.delta_t_s);
  const double c1 = centered_peak_phase(pair.f1_hz, pair.delta_t_s);
  FringeCurve out{grid, std::vector<double>(static_cast<std::size_t>(grid.n_points)), false};
  for (int i = 0; i < grid.n_points; ++i) {
    const double phi = grid.point(i);
    out.values[static_cast<std::size_t>(i)] =
        kth_power_value(normalized_intensity_at(params, phi - c0), spec.order) +
        kth_power_value(normalized_intensity_at(params, phi - c1), spec.order);
  }
  return out;
}

/// Classic two-sinc^2 saddle value 8/pi^2 used for the dip cross-check.
inline constexpr double kRayleighDipThreshold = 0.81;

/// Dip statistics of a two-line composite between the component centers.
/// depth_ratio = dip / lower flanking peak, which is invariant under any
/// positive rescaling of the curve.
struct DipScan {
  bool has_dip = false;
  double dip_value = 0.0;
  double lower_peak_value = 0.0;
  double depth_ratio = 1.0;
};

/// Scan a composite curve for a local minimum between the two component
/// centers. The flanking peak values are found by climbing from the dip, so
/// slight peak pulling by the other component does not bias the reference.
inline DipScan dip_scan(const FringeCurve& composite, double center0, double center1) {
  const PhaseGrid& grid = composite.grid;
  const int n = grid.n_points;
  if (static_cast<int>(composite.values.size()) != n)
    throw DomainError("dip_scan: value count does not match the grid");
  const double lo_c = std::min(center0, center1);
  const double hi_c = std::max(center0, center1);
  auto nearest = [&](double x) {
    const int i = static_cast<int>(std::lround((x - grid.start) / grid.step()));
    return std::clamp(i, 0, n - 1);
  };
  const int i0 = nearest(lo_c);
  const int i1 = nearest(hi_c);
  if (i1 - i0 < 2)
    throw IndeterminateDipError("dip_scan: peaks are not separable on this grid");

  auto value = [&](int i) { return composite.values[static_cast<std::size_t>(i)]; };
  int dip = i0 + 1;
  for (int i = i0 + 2; i < i1; ++i)
    if (value(i) < value(dip)) dip = i;

  DipScan scan;
  scan.dip_value = value(dip);
  if (!(scan.dip_value < value(i0) && scan.dip_value < value(i1))) {
    // Monotone or center-peaked between the lines: the pair is merged.
    scan.lower_peak_value = std::min(value(i0), value(i1));
    return scan;
  }
  int left = dip;
  while (left > 0 && value(left - 1) > value(left)) --left;
  int right = dip;
  while (right < n - 1 && value(right + 1) > value(right)) ++right;
  scan.lower_peak_value = std::min(value(left), value(right));
  if (!(scan.lower_peak_value > 0.0)) return scan;
  scan.has_dip = true;
  scan.depth_ratio = scan.dip_value / scan.lower_peak_value;
  return scan;
}

/// Rayleigh dip criterion: the composite shows an interior minimum no deeper
/// than 0.81 of the lower flanking peak. Cross-check for the width criterion.
inline bool dip_resolvable(const SpectralPair& pair, const FringeParams& params,
                           const KPowerSpec& spec, const PhaseGrid& grid) {
  validate(pair);
  const double c0 = centered_peak_phase(pair.f0_hz, pair.delta_t_s);
  const double c1 = centered_peak_phase(pair.f1_hz, pair.delta_t_s);
  if (c0 == c1) return false;  // identical lines merge into one peak
  const FringeCurve composite = composite_curve(pair, params, spec, grid);
  const DipScan scan = dip_scan(composite, c0, c1);
  return scan.has_dip && scan.depth_ratio <= kRayleighDipThreshold;
}

}  // namespace nslit
