#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "fringe.hpp"

namespace nslit {

inline constexpr std::int64_t kMaxOrder = 1'000'000;

/// Intensity-product order K: the measured normalized fringe is raised to
/// the Kth power (equivalently, the readings of K equal detector splits of
/// one port are multiplied).
struct KPowerSpec {
  std::int64_t order = 1;
};

inline void validate(const KPowerSpec& s) {
  if (s.order < 1 || s.order > kMaxOrder)
    throw DomainError("KPowerSpec: order must lie in [1, 1000000]");
}

/// v^K for v in [0, 1], evaluated in the log domain as exp(K ln v); stable
/// for orders up to 1e6. v = 0 maps to 0 and K = 1 is the exact identity.
inline double kth_power_value(double v, std::int64_t order) {
  if (order == 1) return v;
  if (v == 0.0) return 0.0;
  return std::exp(static_cast<double>(order) * std::log(v));
}

inline FringeCurve kth_power(const FringeCurve& curve, const KPowerSpec& spec) {
  validate(spec);
  if (!curve.normalized)
    throw ContractError("kth_power: input curve must be normalized (values in [0, 1])");
  for (double v : curve.values) {
    if (!(v >= 0.0 && v <= 1.0 + 1e-12))
      throw ContractError("kth_power: normalized curve carries a value outside [0, 1]");
  }
  FringeCurve out = curve;
  if (spec.order == 1) return out;
  for (double& v : out.values) v = kth_power_value(v, spec.order);
  return out;
}

enum class WidthMethod { grid_interpolated, bisection_exact };

struct LineWidthResult {
  double fwhm = 0.0;           // rad
  double peak_location = 0.0;  // rad
  double peak_value = 0.0;
  WidthMethod method = WidthMethod::grid_interpolated;
};

/// FWHM of the principal peak read off a sampled curve.
///
/// The principal peak is the global maximum; ties resolve to the sample
/// nearest the grid center. Each half-maximum crossing is located by linear
/// interpolation between the bracketing samples. Half maximum means half of
/// the curve's own peak value.
inline LineWidthResult fwhm_grid(const FringeCurve& curve) {
  const int n = curve.grid.n_points;
  if (static_cast<int>(curve.values.size()) != n)
    throw DomainError("fwhm_grid: value count does not match the grid");
  if (n < 3) throw DomainError("fwhm_grid: need at least 3 samples");

  const double center = 0.5 * (n - 1);
  int peak = 0;
  for (int i = 1; i < n; ++i) {
    const double v = curve.values[static_cast<std::size_t>(i)];
    const double best = curve.values[static_cast<std::size_t>(peak)];
    if (v > best || (v == best && std::abs(i - center) < std::abs(peak - center))) peak = i;
  }
  if (peak == 0 || peak == n - 1)
    throw PeakClippedError("fwhm_grid: principal peak sits on the grid boundary");

  const double peak_value = curve.values[static_cast<std::size_t>(peak)];
  if (!(peak_value > 0.0))
    throw LineUnresolvedError("fwhm_grid: peak value is not positive");
  const double half = 0.5 * peak_value;

  auto value = [&](int i) { return curve.values[static_cast<std::size_t>(i)]; };
  // Crossing between sample a (above half) and sample b (at or below half).
  auto crossing = [&](int a, int b) {
    const double va = value(a);
    const double vb = value(b);
    const double t = (va - half) / (va - vb);
    return curve.grid.point(a) + t * (curve.grid.point(b) - curve.grid.point(a));
  };

  int right = peak + 1;
  while (right < n && value(right) > half) ++right;
  if (right == n)
    throw LineUnresolvedError("fwhm_grid: no right half-maximum crossing inside the grid");
  int left = peak - 1;
  while (left >= 0 && value(left) > half) --left;
  if (left < 0)
    throw LineUnresolvedError("fwhm_grid: no left half-maximum crossing inside the grid");

  const double xr = crossing(right - 1, right);
  const double xl = crossing(left + 1, left);
  return {xr - xl, curve.grid.point(peak), peak_value, WidthMethod::grid_interpolated};
}

/// Grid-free FWHM of the Kth-powered normalized fringe.
///
/// The half crossing is bisected on (0, pi/N), where the normalized fringe is
/// strictly decreasing as long as r*pi/N stays below the first sinc zero.
/// The root is solved on K*ln(I(a)) + ln 2, which stays well conditioned for
/// large K; the bracket stops just short of the first interference zero and
/// the bisection runs to 1e-12 absolute. The full width is twice the
/// half-width (the principal line is even).
inline LineWidthResult fwhm_exact(const FringeParams& params, const KPowerSpec& spec) {
  validate(params);
  validate(spec);
  const double k = static_cast<double>(spec.order);
  auto objective = [&](double a) {
    const double v = normalized_intensity_at(params, a);
    if (v <= 0.0) return -std::numeric_limits<double>::infinity();
    return k * std::log(v) + std::numbers::ln2;
  };

  double lo = 0.0;  // objective(0) = ln 2 > 0 since the normalized peak is 1
  double hi = kPi / params.n_slits * (1.0 - 1e-9);
  if (!(objective(hi) < 0.0))
    throw BracketError("fwhm_exact: fringe does not fall below half maximum before pi/N");

  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (objective(mid) > 0.0 ? lo : hi) = mid;
  }
  const double half_width = 0.5 * (lo + hi);
  return {2.0 * half_width, 0.0, 1.0, WidthMethod::bisection_exact};
}

struct SweepRow {
  int n_slits = 0;
  std::int64_t order = 0;
  double fwhm = 0.0;
};

/// One fwhm_exact row per (N, K) pair, in input order (N-major).
inline std::vector<SweepRow> sweep_fwhm(const std::vector<int>& n_list,
                                        const std::vector<std::int64_t>& k_list,
                                        double envelope_ratio) {
  if (n_list.empty() || k_list.empty())
    throw DomainError("sweep_fwhm: N and K lists must be nonempty");
  std::vector<SweepRow> rows;
  rows.reserve(n_list.size() * k_list.size());
  for (int n : n_list)
    for (std::int64_t k : k_list)
      rows.push_back({n, k, fwhm_exact({n, envelope_ratio}, {k}).fwhm});
  return rows;
}

struct KWidthSample {
  std::int64_t order = 0;
  double fwhm = 0.0;
};

/// Power-law fit fwhm = amplitude * K^(-exponent), least squares in
/// (log K, log fwhm) space.
struct ScalingFit {
  double amplitude = 0.0;
  double exponent = 0.0;
  double max_relative_deviation = 0.0;
};

/// The explicit shot-noise-limit reference law fwhm(1)/sqrt(K).
inline double snl_reference(double fwhm_at_k1, std::int64_t order) {
  return fwhm_at_k1 / std::sqrt(static_cast<double>(order));
}

inline ScalingFit snl_fit(const std::vector<KWidthSample>& samples) {
  if (samples.size() < 3) throw FitError("snl_fit: need at least 3 samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].order < 1 || !(samples[i].fwhm > 0.0) || !std::isfinite(samples[i].fwhm))
      throw FitError("snl_fit: samples need K >= 1 and finite fwhm > 0");
    for (std::size_t j = i + 1; j < samples.size(); ++j)
      if (samples[i].order == samples[j].order)
        throw FitError("snl_fit: K values must be distinct");
  }

  const double inv_n = 1.0 / static_cast<double>(samples.size());
  double mx = 0.0, my = 0.0;
  for (const auto& s : samples) {
    mx += std::log(static_cast<double>(s.order));
    my += std::log(s.fwhm);
  }
  mx *= inv_n;
  my *= inv_n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& s : samples) {
    const double dx = std::log(static_cast<double>(s.order)) - mx;
    const double dy = std::log(s.fwhm) - my;
    sxx += dx * dx;
    sxy += dx * dy;
  }
  const double slope = sxy / sxx;
  ScalingFit fit;
  fit.exponent = -slope;
  fit.amplitude = std::exp(my - slope * mx);
  for (const auto& s : samples) {
    const double model =
        fit.amplitude * std::pow(static_cast<double>(s.order), -fit.exponent);
    const double dev = std::abs(s.fwhm - model) / model;
    if (dev > fit.max_relative_deviation) fit.max_relative_deviation = dev;
  }
  return fit;
}

}  // namespace nslit
