#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "fringe.hpp"
#include "kpower.hpp"
#include "rng.hpp"

namespace nslit {

/// Poisson Monte Carlo setup for the K-way equal detector split.
struct NoiseConfig {
  double mean_photons = 1.0e4;  // expected photons per undivided sample
  int trials = 1;
  std::uint64_t seed = 0;
  int split_k = 1;  // number of equal ports
};

inline void validate(const NoiseConfig& cfg) {
  if (!std::isfinite(cfg.mean_photons) || cfg.mean_photons < 0.0)
    throw DomainError("NoiseConfig: mean_photons must be finite and >= 0");
  if (cfg.trials < 1) throw DomainError("NoiseConfig: trials must be >= 1");
  if (cfg.split_k < 1 || cfg.split_k > kMaxOrder)
    throw DomainError("NoiseConfig: split_k must lie in [1, 1000000]");
}

/// Exact Poisson draw.
///
/// Below mean 10: sequential-search inversion (product of uniforms). At and
/// above 10: Hormann's transformed rejection (PTRS), a normal-shaped
/// proposal with a squeeze step. Constant cost up to means of 1e8, exact at
/// every mean.
inline std::int64_t sample_poisson(double expected, RandomStream& stream) {
  if (!std::isfinite(expected) || expected < 0.0)
    throw DomainError("sample_poisson: expected count must be finite and >= 0");
  if (expected == 0.0) return 0;

  if (expected < 10.0) {
    const double limit = std::exp(-expected);
    std::int64_t k = -1;
    double prod = 1.0;
    do {
      prod *= stream.next_unit();
      ++k;
    } while (prod > limit);
    return k;
  }

  const double loglam = std::log(expected);
  const double b = 0.931 + 2.53 * std::sqrt(expected);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = stream.next_unit() - 0.5;
    const double v = stream.next_unit();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + expected + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        k * loglam - expected - std::lgamma(k + 1.0))
      return static_cast<std::int64_t>(k);
  }
}

/// One detection event: K independent Poisson draws, each with mean
/// I*nbar/K (the split fields are identical in intensity).
inline std::vector<std::int64_t> split_detect(double normalized_intensity,
                                              const NoiseConfig& cfg, RandomStream& stream) {
  validate(cfg);
  if (!(normalized_intensity >= 0.0 && normalized_intensity <= 1.0))
    throw ContractError("split_detect: normalized intensity must lie in [0, 1]");
  const double port_mean = normalized_intensity * cfg.mean_photons / cfg.split_k;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(cfg.split_k));
  for (auto& c : counts) c = sample_poisson(port_mean, stream);
  return counts;
}

/// prod_i counts[i] / (nbar/K). Ports are independent and each factor has
/// expectation I, so the estimator is unbiased for I^K.
inline double product_estimator(const std::vector<std::int64_t>& counts,
                                const NoiseConfig& cfg) {
  validate(cfg);
  if (cfg.mean_photons == 0.0)
    throw EstimatorError("product_estimator: undefined for zero mean photons");
  if (counts.size() != static_cast<std::size_t>(cfg.split_k))
    throw DomainError("product_estimator: counts length must equal split_k");
  const double norm = cfg.mean_photons / cfg.split_k;
  double prod = 1.0;
  for (std::int64_t c : counts) prod *= static_cast<double>(c) / norm;
  return prod;
}

struct EnsembleResult {
  std::vector<double> mean_curve;
  std::vector<double> stderr_curve;
  int trials_used = 0;
};

/// Per phase point, `trials` independent product estimates reduced to mean
/// and standard error.
///
/// Each (trial, phase) cell draws from a stream keyed by (seed, trial,
/// phase) and the reduction runs in fixed trial order, so the result is
/// reproducible bit for bit no matter how the outer loops are scheduled.
inline EnsembleResult ensemble_fringe(const FringeParams& params, const PhaseGrid& grid,
                                      const NoiseConfig& cfg) {
  validate(params);
  validate(grid);
  validate(cfg);
  if (cfg.mean_photons == 0.0)
    throw EstimatorError("ensemble_fringe: undefined for zero mean photons");

  EnsembleResult out;
  out.mean_curve.resize(static_cast<std::size_t>(grid.n_points));
  out.stderr_curve.resize(static_cast<std::size_t>(grid.n_points));
  out.trials_used = cfg.trials;
  const double norm = cfg.mean_photons / cfg.split_k;

  for (int i = 0; i < grid.n_points; ++i) {
    const double intensity = normalized_intensity_at(params, grid.point(i));
    const double port_mean = intensity * cfg.mean_photons / cfg.split_k;
    double mean = 0.0;
    double m2 = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
      RandomStream stream =
          make_stream(cfg.seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i));
      double prod = 1.0;
      for (int p = 0; p < cfg.split_k; ++p)
        prod *= static_cast<double>(sample_poisson(port_mean, stream)) / norm;
      const double delta = prod - mean;
      mean += delta / (t + 1);
      m2 += delta * (prod - mean);
    }
    out.mean_curve[static_cast<std::size_t>(i)] = mean;
    out.stderr_curve[static_cast<std::size_t>(i)] =
        cfg.trials > 1
            ? std::sqrt(m2 / (static_cast<double>(cfg.trials - 1) * cfg.trials))
            : 0.0;
  }
  return out;
}

struct WidthErrorRow {
  std::int64_t order = 0;
  double fwhm = 0.0;
  double fwhm_stderr = 0.0;
};

/// Empirical FWHM per intensity-product order with a bootstrap standard
/// error (trials resampled with replacement, 200 resamples).
///
/// Each K runs its own ensemble with split_k = K on a window spanning one
/// deterministic width either side of the peak (401 points). The
/// deterministic width places the window only; the estimate comes from the
/// noisy curve.
inline std::vector<WidthErrorRow> width_error_scaling(const FringeParams& params,
                                                      const NoiseConfig& cfg,
                                                      const std::vector<std::int64_t>& k_list) {
  validate(params);
  validate(cfg);
  if (k_list.empty()) throw DomainError("width_error_scaling: K list must be nonempty");

  constexpr int kResamples = 200;
  constexpr int kWindowPoints = 401;
  std::vector<WidthErrorRow> rows;
  rows.reserve(k_list.size());

  for (std::size_t ki = 0; ki < k_list.size(); ++ki) {
    const KPowerSpec spec{k_list[ki]};
    validate(spec);
    const double det_width = fwhm_exact(params, spec).fwhm;
    const PhaseGrid window{-det_width, det_width, kWindowPoints};

    NoiseConfig run_cfg = cfg;
    run_cfg.split_k = static_cast<int>(spec.order);

    // First pass: store every trial's estimate so the bootstrap can resample.
    const double norm = run_cfg.mean_photons / run_cfg.split_k;
    std::vector<double> estimates(static_cast<std::size_t>(run_cfg.trials) * kWindowPoints);
    std::vector<double> mean_values(kWindowPoints, 0.0);
    for (int i = 0; i < kWindowPoints; ++i) {
      const double intensity = normalized_intensity_at(params, window.point(i));
      const double port_mean = intensity * run_cfg.mean_photons / run_cfg.split_k;
      double sum = 0.0;
      for (int t = 0; t < run_cfg.trials; ++t) {
        RandomStream stream = make_stream(run_cfg.seed, static_cast<std::uint64_t>(t),
                                          static_cast<std::uint64_t>(i));
        double prod = 1.0;
        for (int p = 0; p < run_cfg.split_k; ++p)
          prod *= static_cast<double>(sample_poisson(port_mean, stream)) / norm;
        estimates[static_cast<std::size_t>(t) * kWindowPoints + i] = prod;
        sum += prod;
      }
      mean_values[static_cast<std::size_t>(i)] = sum / run_cfg.trials;
    }

    WidthErrorRow row;
    row.order = spec.order;
    row.fwhm = fwhm_grid({window, mean_values, false}).fwhm;

    double wsum = 0.0;
    double wsum2 = 0.0;
    std::vector<double> resampled(kWindowPoints);
    for (int b = 0; b < kResamples; ++b) {
      RandomStream boot = make_stream(cfg.seed ^ 0x626F6F74ull, ki, static_cast<std::uint64_t>(b));
      std::fill(resampled.begin(), resampled.end(), 0.0);
      for (int t = 0; t < run_cfg.trials; ++t) {
        const std::size_t pick = static_cast<std::size_t>(
            (static_cast<unsigned __int128>(boot.next_u64()) *
             static_cast<unsigned __int128>(run_cfg.trials)) >>
            64);
        const double* trial_row = &estimates[pick * kWindowPoints];
        for (int i = 0; i < kWindowPoints; ++i) resampled[static_cast<std::size_t>(i)] += trial_row[i];
      }
      for (double& v : resampled) v /= run_cfg.trials;
      const double w = fwhm_grid({window, resampled, false}).fwhm;
      wsum += w;
      wsum2 += w * w;
    }
    const double mean_w = wsum / kResamples;
    row.fwhm_stderr = std::sqrt(std::max(0.0, (wsum2 - kResamples * mean_w * mean_w) /
                                                  (kResamples - 1)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nslit
