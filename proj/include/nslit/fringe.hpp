#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "errors.hpp"

namespace nslit {

inline constexpr double kPi = std::numbers::pi;

/// Parameters of one N-slit fringe law.
///
/// n_slits is the number of interfering waves N. envelope_ratio is the
/// dimensionless ratio r = beta/alpha = b/a between the single-slit
/// diffraction phase and the slit-to-slit phase; r = 0 keeps the pure
/// interference term (envelope identically 1).
struct FringeParams {
  int n_slits = 1;
  double envelope_ratio = 0.0;
};

inline void validate(const FringeParams& p) {
  if (p.n_slits < 1) throw DomainError("FringeParams: n_slits must be >= 1");
  if (!std::isfinite(p.envelope_ratio) || p.envelope_ratio < 0.0)
    throw DomainError("FringeParams: envelope_ratio must be finite and >= 0");
}

/// Slit geometry in physical units. The wavenumber k = 2*pi/lambda is always
/// derived on demand, never stored.
struct PhysicalGeometry {
  double slit_separation = 0.0;  // a (m)
  double slit_width = 0.0;       // b (m)
  double wavelength = 0.0;       // lambda (m)
};

inline void validate(const PhysicalGeometry& g) {
  const bool ok = std::isfinite(g.slit_separation) && g.slit_separation > 0.0 &&
                  std::isfinite(g.slit_width) && g.slit_width > 0.0 &&
                  std::isfinite(g.wavelength) && g.wavelength > 0.0;
  if (!ok) throw DomainError("PhysicalGeometry: a, b, lambda must be finite and > 0");
}

/// Uniform, endpoint-inclusive phase axis.
struct PhaseGrid {
  double start = -kPi / 2.0;
  double end = kPi / 2.0;
  int n_points = 100001;

  double step() const { return (end - start) / (n_points - 1); }
  double point(int i) const { return i == n_points - 1 ? end : start + i * step(); }
};

inline void validate(const PhaseGrid& g) {
  if (!std::isfinite(g.start) || !std::isfinite(g.end) || !(g.start < g.end))
    throw DomainError("PhaseGrid: need finite start < end");
  if (g.n_points < 2) throw DomainError("PhaseGrid: n_points must be >= 2");
}

/// Axis used for figure-style outputs: [-pi/2, pi/2] with 100001 points,
/// which resolves the narrowest line treated here (N=200, K=100,
/// width ~1.44e-3 rad) with ~46 samples.
inline PhaseGrid default_grid() { return PhaseGrid{}; }

/// Sampled intensity curve. normalized=true means values are scaled by 1/N^2
/// and lie in [0, 1]; normalized=false means raw values in [0, N^2].
struct FringeCurve {
  PhaseGrid grid;
  std::vector<double> values;
  bool normalized = false;
};

/// sin(x)/x with sinc(0) = 1. Unnormalized convention throughout.
inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

namespace detail {

// (sin(N a)/sin(a))^2 with the removable singularity at a = m*pi filled in.
// The phase is folded to [-pi/2, pi/2] first: the factor is pi-periodic and
// folding keeps sin() well conditioned for large |a|.
inline double interference_factor(int n_slits, double alpha) {
  const double a = std::remainder(alpha, kPi);
  const double s = std::sin(a);
  double ratio;
  if (std::abs(s) < 1e-8) {
    // l'Hopital ratio N cos(Na)/cos(a): continuous, branch-free, exact at m*pi.
    ratio = n_slits * std::cos(n_slits * a) / std::cos(a);
  } else {
    ratio = std::sin(n_slits * a) / s;
  }
  return ratio * ratio;
}

}  // namespace detail

/// N-slit intensity sinc^2(r*alpha) * (sin(N*alpha)/sin(alpha))^2.
///
/// Removable singularities at alpha = m*pi evaluate to the limit
/// N^2 * sinc^2(r*m*pi). The result lies in [0, N^2]. Evaluated on |alpha|,
/// so the even symmetry holds bit for bit.
inline double intensity_at(const FringeParams& params, double alpha) {
  validate(params);
  if (!std::isfinite(alpha)) throw DomainError("intensity_at: non-finite alpha");
  const double mag = std::abs(alpha);
  const double env = sinc(params.envelope_ratio * mag);
  return env * env * detail::interference_factor(params.n_slits, mag);
}

/// intensity_at / N^2, clamped into [0, 1]. Kth powers and Poisson
/// intensities require the closed interval. Exactly 1 at alpha = 0.
inline double normalized_intensity_at(const FringeParams& params, double alpha) {
  const double n2 = static_cast<double>(params.n_slits) * params.n_slits;
  const double v = intensity_at(params, alpha) / n2;
  return v < 1.0 ? v : 1.0;
}

/// Pointwise evaluation over a grid. Deterministic and order-independent.
inline FringeCurve sample_curve(const FringeParams& params, const PhaseGrid& grid,
                                bool normalized) {
  validate(params);
  validate(grid);
  FringeCurve out{grid, std::vector<double>(static_cast<std::size_t>(grid.n_points)),
                  normalized};
  for (int i = 0; i < grid.n_points; ++i) {
    const double a = grid.point(i);
    out.values[static_cast<std::size_t>(i)] =
        normalized ? normalized_intensity_at(params, a) : intensity_at(params, a);
  }
  return out;
}

struct PhasePair {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Geometry adapter: alpha = (pi a / lambda) sin(theta),
/// beta = (pi b / lambda) sin(theta), so beta/alpha = b/a off axis.
inline PhasePair alpha_from_geometry(const PhysicalGeometry& geom, double theta) {
  validate(geom);
  if (!std::isfinite(theta) || std::abs(theta) > kPi / 2.0)
    throw DomainError("alpha_from_geometry: |theta| must be <= pi/2");
  const double s = std::sin(theta);
  return {kPi * geom.slit_separation / geom.wavelength * s,
          kPi * geom.slit_width / geom.wavelength * s};
}

/// Frequency adapter: alpha = 2 pi f deltaT.
inline double alpha_from_frequency(double f_hz, double delta_t_s) {
  if (!std::isfinite(f_hz) || f_hz < 0.0)
    throw DomainError("alpha_from_frequency: f must be finite and >= 0");
  if (!std::isfinite(delta_t_s) || delta_t_s < 0.0)
    throw DomainError("alpha_from_frequency: deltaT must be finite and >= 0");
  return 2.0 * kPi * f_hz * delta_t_s;
}

}  // namespace nslit
