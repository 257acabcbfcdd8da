#pragma once

#include <cstdint>

namespace nslit {

namespace detail {

// splitmix64 finalizer; also used to hash stream keys together.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based random stream (splitmix64). Streams are cheap value types;
/// every Monte Carlo cell owns a stream keyed by (seed, trial, phase), so
/// results do not depend on the order cells are evaluated in.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return detail::mix64(state_);
  }

  /// Uniform double strictly inside (0, 1): (k + 1/2) / 2^53.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

/// Substream keyed by (seed, a, b); distinct keys give decorrelated streams.
inline RandomStream make_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = detail::mix64(seed + 0x9E3779B97F4A7C15ull);
  h = detail::mix64(h ^ (a + 0xD1B54A32D192ED03ull));
  h = detail::mix64(h ^ (b + 0x8CB92BA72F3D8DD7ull));
  return RandomStream(h);
}

}  // namespace nslit
