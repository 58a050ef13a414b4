#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

// Counter-based random draws. Every draw is a pure function of
// (seed, stream, index), so simulation kernels can be chunked across
// threads and still produce bit-identical output, and any slot can be
// re-derived without replaying the stream.
//
// Generator name: "splitmix64-counter" (recorded in output metadata).
// at(key, i) equals the i-th output of the classic splitmix64 engine
// seeded with `key`; stream keys are derived by mixing the user seed
// with a stream id, giving statistically independent substreams.

namespace dpsqkd::rng {

inline constexpr const char* kGeneratorName = "splitmix64-counter";

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

/// Named substreams; one per independent source of randomness.
enum class Stream : std::uint64_t {
  kPhase = 1,        // transmitter phase pattern
  kGate = 2,         // per-slot detection outcome
  kSignalError = 3,  // wrong-port flips of signal clicks
  kResolve = 4,      // winner among simultaneous click candidates
  kEvent = 5,        // event-driven kernel (gaps + classification)
  kToeplitz = 6,     // hash matrix diagonal bits
  kSample = 7,       // error-estimation sampling
};

constexpr std::uint64_t stream_key(std::uint64_t seed, Stream stream) noexcept {
  return mix64(seed + kGolden * (static_cast<std::uint64_t>(stream) + 1));
}

/// Draw `index` of the substream identified by `key`.
constexpr std::uint64_t at(std::uint64_t key, std::uint64_t index) noexcept {
  return mix64(key + kGolden * (index + 1));
}

/// Bernoulli trial evaluated by thresholding a raw 64-bit draw.
struct BernoulliGate {
  std::uint64_t threshold = 0;
  bool always = false;

  static BernoulliGate from_probability(double p) {
    if (!(p >= 0.0) || !(p <= 1.0))
      throw std::invalid_argument("bernoulli probability must lie in [0, 1]");
    if (p >= 1.0) return {0, true};
    // 2^64 * p, rounded toward zero in extended precision
    const long double scaled = static_cast<long double>(p) * 18446744073709551616.0L;
    return {static_cast<std::uint64_t>(scaled), false};
  }

  constexpr bool hit(std::uint64_t raw) const noexcept { return always || raw < threshold; }
};

/// Map a raw draw to (0, 1]; never returns 0, so log() is safe.
inline double uniform01(std::uint64_t raw) noexcept {
  return static_cast<double>((raw >> 11) + 1) * 0x1.0p-53;
}

/// Geometric gap in slots, support {1, 2, ...}: number of trials up to and
/// including the first success of a Bernoulli(p) sequence. `u01` in (0, 1].
inline std::uint64_t geometric_slots(double p, double u01) {
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("geometric probability must lie in (0, 1]");
  if (p >= 1.0) return 1;
  const double g = std::floor(std::log(u01) / std::log1p(-p));
  if (g >= 9.0e18) return std::numeric_limits<std::uint64_t>::max();
  return 1 + static_cast<std::uint64_t>(g);
}

}  // namespace dpsqkd::rng
