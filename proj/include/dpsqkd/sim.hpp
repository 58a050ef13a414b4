#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpsqkd/params.hpp"
#include "dpsqkd/rng.hpp"

// Stochastic protocol-level Monte Carlo. Two kernels produce statistically
// identical click streams:
//   * pulse-level: every clock slot is simulated (OpenMP-chunked, with a
//     slot-by-slot serial reference kept for testing);
//   * event-driven: inter-click gaps are drawn directly, O(#clicks).
// All randomness is slot-addressed (see rng.hpp), so results are
// bit-identical for any thread count and fully determined by the seed.

namespace dpsqkd {

enum class Detector : std::uint8_t { kD1 = 0, kD2 = 1 };
enum class ClickOrigin : std::uint8_t { kSignal = 0, kDark = 1 };

/// Lazily evaluated random 0/pi phase pattern; bit i is a pure function of
/// (seed, i), so multi-gigaslot sequences cost no memory.
class PhaseSequence {
 public:
  PhaseSequence() = default;
  PhaseSequence(std::uint64_t seed, std::uint64_t length)
      : seed_(seed), key_(rng::stream_key(seed, rng::Stream::kPhase)), length_(length) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t length() const noexcept { return length_; }

  /// Phase bit of slot i (0 -> phase 0, 1 -> phase pi).
  int bit(std::uint64_t slot) const noexcept {
    return static_cast<int>((rng::at(key_, slot >> 6) >> (slot & 63)) & 1);
  }

  /// Differential bit between slot and its predecessor; requires slot >= 1.
  int diff(std::uint64_t slot) const noexcept { return bit(slot) ^ bit(slot - 1); }

  /// Explicit bit vector, for tests and small runs only.
  std::vector<std::uint8_t> materialize() const;

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t key_ = 0;
  std::uint64_t length_ = 0;
};

struct ClickEvent {
  std::uint64_t slot = 0;
  Detector detector = Detector::kD1;
  ClickOrigin origin = ClickOrigin::kSignal;

  friend bool operator==(const ClickEvent&, const ClickEvent&) = default;
};

struct ClickStream {
  std::vector<ClickEvent> events;  // slots strictly increasing
  std::uint64_t duration_slots = 0;
  SystemParams params;   // snapshot of the generating configuration
  ChannelSpec channel;
  std::uint64_t seed = 0;
  std::string kernel;    // "pulse" or "event"
  std::string generator = rng::kGeneratorName;
  std::vector<std::string> warnings;

  double duration_s() const {
    return static_cast<double>(duration_slots) / params.clock_rate_hz;
  }
};

struct SiftedKeyPair {
  std::vector<std::uint8_t> alice_bits;
  std::vector<std::uint8_t> bob_bits;
  std::vector<std::uint64_t> slot_indices;
  std::optional<double> measured_qber;  // absent for an empty key

  std::size_t size() const noexcept { return alice_bits.size(); }
};

struct EmpiricalRates {
  double sifted_rate_bps = 0.0;
  std::optional<double> qber;
};

struct PulseLevelResult {
  ClickStream stream;
  PhaseSequence phases;
};

/// Pulse-level kernel, OpenMP-chunked. Detection starts at slot 1 (slot 0
/// has no differential predecessor).
PulseLevelResult simulate_pulse_level(const SystemParams& params, const ChannelSpec& channel,
                                      std::uint64_t n_slots, std::uint64_t seed);

/// Slot-by-slot serial reference for the pulse kernel; same draws, same
/// output, no chunking. Kept for testing and as executable documentation.
PulseLevelResult simulate_pulse_level_reference(const SystemParams& params,
                                                const ChannelSpec& channel,
                                                std::uint64_t n_slots, std::uint64_t seed);

/// Event-driven kernel: draws geometric inter-click gaps, enforces dead
/// time by re-drawing gaps shorter than the dead window, classifies each
/// click as signal or dark. O(#clicks) instead of O(#slots).
ClickStream simulate_event_driven(const SystemParams& params, const ChannelSpec& channel,
                                  double duration_s, std::uint64_t seed);

/// Phase sequence matching a stream's seed and duration.
PhaseSequence phase_sequence_for(const ClickStream& stream);

/// Key sifting: per click, Alice's bit is the differential phase of the
/// clicked slot, Bob's bit is the detector identity (D1 -> 0, D2 -> 1).
SiftedKeyPair sift(const ClickStream& stream, const PhaseSequence& phases);

EmpiricalRates empirical_rates(const SiftedKeyPair& pair, double duration_s);

}  // namespace dpsqkd
