#include <cmath>
#include <vector>

#include "doctest.h"
#include "nslit/kpower.hpp"
#include "nslit/rng.hpp"

using namespace nslit;

namespace {

FringeCurve make_curve(std::vector<double> values, bool normalized) {
  PhaseGrid grid{0.0, 1.0, static_cast<int>(values.size())};
  return {grid, std::move(values), normalized};
}

// Independent width oracle: march a fine lattice across (0, pi/N) and locate
// the half crossing of the Kth-powered normalized fringe by interpolation.
double scanned_fwhm(const FringeParams& params, std::int64_t order, int points = 2'000'000) {
  const double span = kPi / params.n_slits;
  double prev_a = 0.0;
  double prev_v = 1.0;
  for (int i = 1; i <= points; ++i) {
    const double a = span * i / (points + 1);
    const double v = kth_power_value(normalized_intensity_at(params, a), order);
    if (v <= 0.5) {
      const double t = (prev_v - 0.5) / (prev_v - v);
      return 2.0 * (prev_a + t * (a - prev_a));
    }
    prev_a = a;
    prev_v = v;
  }
  return 0.0;
}

// Closed form for the two-slit fringe: cos^(2K)(a) = 1/2.
double two_slit_fwhm(std::int64_t order) {
  return 2.0 * std::acos(std::pow(2.0, -1.0 / (2.0 * static_cast<double>(order))));
}

}  // namespace

TEST_CASE("kth power basics") {
  const FringeCurve identity = kth_power(make_curve({1.0, 0.5, 0.25}, true), {1});
  CHECK(identity.values == std::vector<double>{1.0, 0.5, 0.25});

  const FringeCurve squared = kth_power(make_curve({1.0, 0.5}, true), {2});
  CHECK(squared.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(squared.values[1] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(squared.normalized);

  CHECK(kth_power_value(0.0, 100) == 0.0);
  CHECK(kth_power_value(1.0, 100) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("two-slit fringe to the 10th power at pi/4 gives 2^-10") {
  const FringeCurve base = sample_curve({2, 0.0}, PhaseGrid{-kPi / 2.0, kPi / 2.0, 5}, true);
  const FringeCurve powered = kth_power(base, {10});
  CHECK(powered.values[3] == doctest::Approx(std::pow(2.0, -10.0)).epsilon(1e-12));
}

TEST_CASE("kth power rejects out-of-contract input") {
  CHECK_THROWS_AS(kth_power(make_curve({1.0, 0.5}, false), {2}), ContractError);
  CHECK_THROWS_AS(kth_power(make_curve({1.5, 0.5}, true), {2}), ContractError);
  CHECK_THROWS_AS(kth_power(make_curve({-0.1, 0.5}, true), {2}), ContractError);
  CHECK_THROWS_AS(kth_power(make_curve({1.0}, true), {0}), DomainError);
  CHECK_THROWS_AS(kth_power(make_curve({1.0}, true), {kMaxOrder + 1}), DomainError);
}

TEST_CASE("grid FWHM reproduces the known two-slit widths") {
  const FringeCurve base = sample_curve({2, 0.0}, default_grid(), true);

  const LineWidthResult k1 = fwhm_grid(base);
  CHECK(k1.fwhm == doctest::Approx(kPi / 2.0).epsilon(1e-8));
  CHECK(k1.peak_location == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(k1.peak_value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(k1.method == WidthMethod::grid_interpolated);

  const LineWidthResult k100 = fwhm_grid(kth_power(base, {100}));
  CHECK(std::abs(k100.fwhm - 0.166374) <= 1e-4);
  CHECK(k100.fwhm == doctest::Approx(two_slit_fwhm(100)).epsilon(1e-6));
}

TEST_CASE("grid FWHM for one hundred slits") {
  const FringeCurve base = sample_curve({100, 0.0}, default_grid(), true);
  const LineWidthResult width = fwhm_grid(base);
  CHECK(std::abs(width.fwhm - 2.7831e-2) <= 1e-4);
}

TEST_CASE("grid FWHM error paths") {
  // Monotone ramp: peak on the boundary.
  CHECK_THROWS_AS(fwhm_grid(make_curve({0.1, 0.2, 0.3, 0.4}, false)), PeakClippedError);
  // Grid narrower than the line: no half crossing inside.
  const FringeCurve narrow = sample_curve({2, 0.0}, PhaseGrid{-0.1, 0.1, 101}, true);
  CHECK_THROWS_AS(fwhm_grid(narrow), LineUnresolvedError);
  // All-zero curve has no positive peak.
  CHECK_THROWS_AS(fwhm_grid(make_curve({0.0, 0.0, 0.0}, false)), LineUnresolvedError);
  // Too small to carry an interior peak.
  CHECK_THROWS_AS(fwhm_grid(make_curve({0.0, 1.0}, false)), DomainError);
}

TEST_CASE("grid FWHM tie-break picks the maximum nearest the center") {
  const FringeCurve curve = make_curve({0.0, 1.0, 0.6, 1.0, 0.5, 1.0, 0.0}, false);
  const LineWidthResult width = fwhm_grid(curve);
  CHECK(width.peak_location == doctest::Approx(curve.grid.point(3)).epsilon(1e-14));
}

TEST_CASE("exact FWHM matches the two-slit closed form") {
  CHECK(std::abs(fwhm_exact({2, 0.0}, {1}).fwhm - kPi / 2.0) <= 1e-9);
  for (const std::int64_t k : {1, 2, 3, 4, 7, 50, 1000})
    CHECK(std::abs(fwhm_exact({2, 0.0}, {k}).fwhm - two_slit_fwhm(k)) <= 1e-9);
  CHECK(fwhm_exact({2, 0.0}, {1}).method == WidthMethod::bisection_exact);
}

TEST_CASE("exact FWHM agrees with an independent scan oracle") {
  CHECK(std::abs(fwhm_exact({100, 0.0}, {1}).fwhm - scanned_fwhm({100, 0.0}, 1)) <= 1e-8);
  CHECK(std::abs(fwhm_exact({200, 0.0}, {100}).fwhm - scanned_fwhm({200, 0.0}, 100)) <= 1e-9);
  CHECK(std::abs(fwhm_exact({10, 6.0}, {10}).fwhm - scanned_fwhm({10, 6.0}, 10)) <= 1e-8);
  // Pure envelope line: half crossing of sinc^2 at x = 1.39155738...
  CHECK(std::abs(fwhm_exact({1, 1.0}, {1}).fwhm - scanned_fwhm({1, 1.0}, 1)) <= 1e-8);
}

TEST_CASE("exact FWHM bracket errors") {
  CHECK_THROWS_AS(fwhm_exact({1, 0.0}, {1}), BracketError);   // flat fringe
  CHECK_THROWS_AS(fwhm_exact({1, 0.3}, {1}), BracketError);   // envelope never halves
}

TEST_CASE("Kth power strictly narrows the line") {
  RandomStream rng = make_stream(37, 0, 0);
  for (int c = 0; c < 300; ++c) {
    const int n = 2 + static_cast<int>(rng.next_unit() * 199);
    const double r = rng.next_unit() * 0.8 * n;
    const std::int64_t k1 = 1 + static_cast<std::int64_t>(rng.next_unit() * 999);
    const std::int64_t k2 = k1 + 1 + static_cast<std::int64_t>(rng.next_unit() * 999);
    CHECK(fwhm_exact({n, r}, {k2}).fwhm < fwhm_exact({n, r}, {k1}).fwhm);
  }
}

TEST_CASE("sweep rows") {
  const std::vector<SweepRow> single = sweep_fwhm({2}, {1}, 0.0);
  REQUIRE(single.size() == 1);
  CHECK(single[0].n_slits == 2);
  CHECK(single[0].order == 1);
  CHECK(std::abs(single[0].fwhm - kPi / 2.0) <= 1e-9);

  const std::vector<SweepRow> rows = sweep_fwhm({2, 10, 100}, {1}, 0.0);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].fwhm > rows[1].fwhm);
  CHECK(rows[1].fwhm > rows[2].fwhm);
  // Large-N limit: width * N / pi settles near 0.886.
  CHECK(rows[2].fwhm * 100.0 / kPi >= 0.85);
  CHECK(rows[2].fwhm * 100.0 / kPi <= 0.95);

  const std::vector<SweepRow> grid = sweep_fwhm({4, 2}, {3, 1}, 0.0);
  REQUIRE(grid.size() == 4);  // input ordering, N-major
  CHECK(grid[0].n_slits == 4);
  CHECK(grid[0].order == 3);
  CHECK(grid[3].n_slits == 2);
  CHECK(grid[3].order == 1);

  CHECK_THROWS_AS(sweep_fwhm({}, {1}, 0.0), DomainError);
  CHECK_THROWS_AS(sweep_fwhm({2}, {}, 0.0), DomainError);
}

TEST_CASE("scaling fit recovers exact power laws") {
  const ScalingFit exact = snl_fit({{1, 1.0}, {4, 0.5}, {16, 0.25}});
  CHECK(exact.exponent == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(exact.amplitude == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact.max_relative_deviation <= 1e-12);

  const ScalingFit flat = snl_fit({{1, 0.7}, {10, 0.7}, {100, 0.7}});
  CHECK(std::abs(flat.exponent) <= 1e-12);

  std::vector<KWidthSample> widths;
  for (std::int64_t k = 1; k <= 100; ++k) widths.push_back({k, two_slit_fwhm(k)});
  const ScalingFit fit = snl_fit(widths);
  CHECK(fit.exponent >= 0.45);
  CHECK(fit.exponent <= 0.55);
}

TEST_CASE("scaling fit error paths") {
  CHECK_THROWS_AS(snl_fit({{1, 1.0}, {2, 0.7}}), FitError);
  CHECK_THROWS_AS(snl_fit({{1, 1.0}, {1, 0.9}, {2, 0.7}}), FitError);
  CHECK_THROWS_AS(snl_fit({{1, 1.0}, {2, -0.5}, {4, 0.2}}), FitError);
}

TEST_CASE("kth power never moves the peak and preserves order") {
  RandomStream rng = make_stream(41, 0, 0);
  for (int c = 0; c < 300; ++c) {
    const int n = 2 + static_cast<int>(rng.next_unit() * 99);
    const double span = kPi / n * (0.5 + rng.next_unit());
    const double offset = (rng.next_unit() - 0.5) * span * 0.5;
    const PhaseGrid grid{offset - span, offset + span, 301};
    const FringeCurve base = sample_curve({n, rng.next_unit() * 0.5 * n}, grid, true);
    const std::int64_t order = 1 + static_cast<std::int64_t>(rng.next_unit() * 9999);
    const FringeCurve powered = kth_power(base, {order});

    std::size_t argmax_base = 0;
    std::size_t argmax_powered = 0;
    for (std::size_t i = 1; i < base.values.size(); ++i) {
      if (base.values[i] > base.values[argmax_base]) argmax_base = i;
      if (powered.values[i] > powered.values[argmax_powered]) argmax_powered = i;
    }
    CHECK(argmax_base == argmax_powered);

    const std::size_t i = static_cast<std::size_t>(rng.next_unit() * 300);
    const std::size_t j = static_cast<std::size_t>(rng.next_unit() * 300);
    if (base.values[i] <= base.values[j]) CHECK(powered.values[i] <= powered.values[j]);
  }
}

TEST_CASE("width times N sqrt(K) approaches the small-angle limit") {
  // Small-angle oracle: I ~ exp(-(N^2-1) a^2 / 3), so
  // fwhm * N * sqrt(K) -> 2 sqrt(3 ln 2) * N / sqrt(N^2 - 1).
  for (const int n : {2, 10, 100}) {
    const double limit =
        2.0 * std::sqrt(3.0 * std::numbers::ln2) * n / std::sqrt(double(n) * n - 1.0);
    const double product = fwhm_exact({n, 0.0}, {10000}).fwhm * n * 100.0;
    CHECK(std::abs(product - limit) <= 0.02 * limit);
  }
}

TEST_CASE("grid and exact widths agree within two grid steps") {
  const PhaseGrid grid = default_grid();
  RandomStream rng = make_stream(43, 0, 0);
  std::vector<std::pair<int, std::int64_t>> cases = {
      {2, 1}, {2, 100}, {3, 7}, {10, 1}, {50, 7}, {100, 100}, {200, 1}, {200, 100}};
  for (int c = 0; c < 20; ++c)
    cases.push_back({2 + static_cast<int>(rng.next_unit() * 199),
                     1 + static_cast<std::int64_t>(rng.next_unit() * 99)});
  for (const auto& [n, k] : cases) {
    const FringeCurve curve = kth_power(sample_curve({n, 0.0}, grid, true), {k});
    const double grid_width = fwhm_grid(curve).fwhm;
    const double exact_width = fwhm_exact({n, 0.0}, {k}).fwhm;
    CHECK(std::abs(grid_width - exact_width) <= 2.0 * grid.step());
  }
}
