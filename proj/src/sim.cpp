#include "dpsqkd/sim.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "dpsqkd/model.hpp"

namespace dpsqkd {

std::vector<std::uint8_t> PhaseSequence::materialize() const {
  if (length_ > (1ull << 27))
    throw std::length_error("refusing to materialize a phase sequence this long");
  std::vector<std::uint8_t> bits(length_);
  for (std::uint64_t i = 0; i < length_; ++i) bits[i] = static_cast<std::uint8_t>(bit(i));
  return bits;
}

namespace {

constexpr std::uint8_t kSignalBit = 1;
constexpr std::uint8_t kDark1Bit = 2;
constexpr std::uint8_t kDark2Bit = 4;

// Outcome regions of the single per-slot draw, empty subset first so the
// overwhelmingly common no-click case is one compare.
constexpr std::uint8_t kRegionMask[8] = {
    0,
    kSignalBit,
    kDark1Bit,
    kDark2Bit,
    kSignalBit | kDark1Bit,
    kSignalBit | kDark2Bit,
    kDark1Bit | kDark2Bit,
    kSignalBit | kDark1Bit | kDark2Bit,
};

std::uint64_t cumulative_threshold(long double cum) {
  if (cum >= 1.0L) return ~0ull;
  if (cum <= 0.0L) return 0;
  return static_cast<std::uint64_t>(cum * 18446744073709551616.0L);
}

// Per-slot outcome sampler shared by both pulse kernels. Each slot draws
// one gate word that selects which subset of {signal, dark1, dark2}
// candidates fired; simultaneous candidates are resolved uniformly.
class SlotSampler {
 public:
  SlotSampler(const SystemParams& params, const ChannelSpec& channel, std::uint64_t seed,
              std::uint64_t n_slots)
      : phases_(seed, n_slots),
        gate_key_(rng::stream_key(seed, rng::Stream::kGate)),
        error_key_(rng::stream_key(seed, rng::Stream::kSignalError)),
        resolve_key_(rng::stream_key(seed, rng::Stream::kResolve)),
        error_gate_(rng::BernoulliGate::from_probability(params.baseline_error)) {
    const ClickProbabilities cp = click_probability(params, channel);
    const long double ps = cp.p_signal;
    const long double pd1 = static_cast<long double>(params.detector1.dcr_cps) *
                            params.time_window_s;
    const long double pd2 = static_cast<long double>(params.detector2.dcr_cps) *
                            params.time_window_s;
    const long double qs = 1.0L - ps, qd1 = 1.0L - pd1, qd2 = 1.0L - pd2;
    const long double region_prob[8] = {
        qs * qd1 * qd2,  ps * qd1 * qd2,  qs * pd1 * qd2,  qs * qd1 * pd2,
        ps * pd1 * qd2,  ps * qd1 * pd2,  qs * pd1 * pd2,  ps * pd1 * pd2,
    };
    long double cum = 0.0L;
    for (int r = 0; r < 8; ++r) {
      cum += region_prob[r];
      threshold_[r] = cumulative_threshold(cum);
    }
    threshold_[7] = ~0ull;
    any_click_ = cp.p_click > 0.0;
  }

  bool any_click_possible() const noexcept { return any_click_; }
  const PhaseSequence& phases() const noexcept { return phases_; }

  /// Winning click candidate of a slot, if any. Pure in (seed, slot).
  std::optional<ClickEvent> candidate_at(std::uint64_t slot) const noexcept {
    const std::uint64_t raw = rng::at(gate_key_, slot);
    if (raw < threshold_[0]) return std::nullopt;
    int region = 1;
    while (region < 7 && raw >= threshold_[region]) ++region;
    std::uint8_t mask = kRegionMask[region];
    if ((mask & (mask - 1)) != 0) {
      // simultaneous candidates: uniform winner among them
      std::uint8_t which[3];
      int count = 0;
      if (mask & kSignalBit) which[count++] = kSignalBit;
      if (mask & kDark1Bit) which[count++] = kDark1Bit;
      if (mask & kDark2Bit) which[count++] = kDark2Bit;
      const std::uint64_t pick = rng::at(resolve_key_, slot) % static_cast<std::uint64_t>(count);
      mask = which[pick];
    }
    ClickEvent ev;
    ev.slot = slot;
    if (mask == kSignalBit) {
      ev.origin = ClickOrigin::kSignal;
      const bool flipped = error_gate_.hit(rng::at(error_key_, slot));
      const bool to_d1 = (phases_.diff(slot) == 0) != flipped;
      ev.detector = to_d1 ? Detector::kD1 : Detector::kD2;
    } else {
      ev.origin = ClickOrigin::kDark;
      ev.detector = (mask == kDark1Bit) ? Detector::kD1 : Detector::kD2;
    }
    return ev;
  }

 private:
  PhaseSequence phases_;
  std::uint64_t gate_key_;
  std::uint64_t error_key_;
  std::uint64_t resolve_key_;
  rng::BernoulliGate error_gate_;
  std::uint64_t threshold_[8] = {};
  bool any_click_ = false;
};

ClickStream make_stream(const SystemParams& params, const ChannelSpec& channel,
                        std::uint64_t duration_slots, std::uint64_t seed, const char* kernel) {
  ClickStream s;
  s.duration_slots = duration_slots;
  s.params = params;
  s.channel = channel;
  s.seed = seed;
  s.kernel = kernel;
  const ClickProbabilities cp = click_probability(params, channel);
  if (cp.p_click * params.clock_rate_hz * params.dead_time_s > 0.01)
    s.warnings.push_back(
        "dead-time occupancy p_click*nu*t_d exceeds 1%; rate model accuracy degrades");
  return s;
}

void check_slot_count(std::uint64_t n_slots) {
  if (n_slots < 2)
    throw std::invalid_argument("n_slots must be at least 2 (slot 0 has no predecessor)");
  if (n_slots >= (1ull << 62)) throw std::invalid_argument("n_slots is implausibly large");
}

}  // namespace

PulseLevelResult simulate_pulse_level_reference(const SystemParams& params,
                                                const ChannelSpec& channel,
                                                std::uint64_t n_slots, std::uint64_t seed) {
  check_slot_count(n_slots);
  ClickStream stream = make_stream(params, channel, n_slots, seed, "pulse");
  const SlotSampler sampler(params, channel, seed, n_slots);
  const std::uint64_t dead = params.dead_slots();
  if (sampler.any_click_possible()) {
    for (std::uint64_t slot = 1; slot < n_slots; ++slot) {
      const auto cand = sampler.candidate_at(slot);
      if (!cand) continue;
      if (!stream.events.empty() && slot - stream.events.back().slot < dead) continue;
      stream.events.push_back(*cand);
    }
  }
  return {std::move(stream), sampler.phases()};
}

PulseLevelResult simulate_pulse_level(const SystemParams& params, const ChannelSpec& channel,
                                      std::uint64_t n_slots, std::uint64_t seed) {
  check_slot_count(n_slots);
  ClickStream stream = make_stream(params, channel, n_slots, seed, "pulse");
  const SlotSampler sampler(params, channel, seed, n_slots);
  const std::uint64_t dead = params.dead_slots();
  if (sampler.any_click_possible()) {
    // Candidate collection is embarrassingly parallel because draws are
    // slot-addressed; the dead-time filter is inherently sequential but
    // only touches the (sparse) candidate list.
    constexpr std::uint64_t kChunkSlots = 1ull << 22;
    const std::uint64_t scan_slots = n_slots - 1;  // slots 1 .. n_slots-1
    const std::uint64_t n_chunks = (scan_slots + kChunkSlots - 1) / kChunkSlots;
    std::vector<std::vector<ClickEvent>> chunk_events(n_chunks);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(n_chunks); ++c) {
      const std::uint64_t begin = 1 + static_cast<std::uint64_t>(c) * kChunkSlots;
      const std::uint64_t end = std::min(n_slots, begin + kChunkSlots);
      auto& out = chunk_events[static_cast<std::size_t>(c)];
      for (std::uint64_t slot = begin; slot < end; ++slot) {
        if (const auto cand = sampler.candidate_at(slot)) out.push_back(*cand);
      }
    }
    for (const auto& chunk : chunk_events) {
      for (const ClickEvent& cand : chunk) {
        if (!stream.events.empty() && cand.slot - stream.events.back().slot < dead) continue;
        stream.events.push_back(cand);
      }
    }
  }
  return {std::move(stream), sampler.phases()};
}

ClickStream simulate_event_driven(const SystemParams& params, const ChannelSpec& channel,
                                  double duration_s, std::uint64_t seed) {
  if (!(duration_s > 0.0)) throw std::invalid_argument("duration_s must be positive");
  const double slots_fp = duration_s * params.clock_rate_hz;
  if (slots_fp >= 9.2e18) throw std::invalid_argument("duration is implausibly large");
  const std::uint64_t n_slots = static_cast<std::uint64_t>(std::floor(slots_fp + 1e-9));
  ClickStream stream = make_stream(params, channel, n_slots, seed, "event");
  const ClickProbabilities cp = click_probability(params, channel);
  if (cp.p_click <= 0.0 || n_slots < 2) return stream;

  const std::uint64_t dead = params.dead_slots();
  if (dead > 1) {
    // gap re-draws must terminate: P(gap >= dead) = (1-p)^(dead-1)
    const double log_survive = static_cast<double>(dead - 1) * std::log1p(-cp.p_click);
    if (log_survive < std::log(1e-12))
      throw std::invalid_argument(
          "dead time covers almost every gap; event-driven kernel needs p_click*nu*t_d << 1");
  }

  const PhaseSequence phases(seed, n_slots);
  const auto signal_gate =
      rng::BernoulliGate::from_probability(cp.p_signal / cp.p_click);
  const auto error_gate = rng::BernoulliGate::from_probability(params.baseline_error);
  const std::uint64_t event_key = rng::stream_key(seed, rng::Stream::kEvent);
  std::uint64_t counter = 0;
  const auto next_raw = [&]() { return rng::at(event_key, counter++); };

  std::uint64_t pos = 0;
  bool have_last = false;
  for (;;) {
    std::uint64_t gap;
    do {
      gap = rng::geometric_slots(cp.p_click, rng::uniform01(next_raw()));
    } while (have_last && dead > 0 && gap < dead);
    if (gap > n_slots - 1 - pos) break;  // next click would fall past the run
    pos += gap;
    ClickEvent ev;
    ev.slot = pos;
    if (signal_gate.hit(next_raw())) {
      ev.origin = ClickOrigin::kSignal;
      const bool flipped = error_gate.hit(next_raw());
      const bool to_d1 = (phases.diff(pos) == 0) != flipped;
      ev.detector = to_d1 ? Detector::kD1 : Detector::kD2;
    } else {
      ev.origin = ClickOrigin::kDark;
      ev.detector = (next_raw() & 1) ? Detector::kD2 : Detector::kD1;
    }
    stream.events.push_back(ev);
    have_last = true;
  }
  return stream;
}

PhaseSequence phase_sequence_for(const ClickStream& stream) {
  return PhaseSequence(stream.seed, stream.duration_slots);
}

SiftedKeyPair sift(const ClickStream& stream, const PhaseSequence& phases) {
  SiftedKeyPair pair;
  pair.alice_bits.reserve(stream.events.size());
  pair.bob_bits.reserve(stream.events.size());
  pair.slot_indices.reserve(stream.events.size());
  std::uint64_t errors = 0;
  for (const ClickEvent& ev : stream.events) {
    if (ev.slot == 0 || ev.slot >= phases.length())
      throw std::out_of_range("click slot lies outside the phase sequence");
    const std::uint8_t alice = static_cast<std::uint8_t>(phases.diff(ev.slot));
    const std::uint8_t bob = (ev.detector == Detector::kD2) ? 1 : 0;
    pair.alice_bits.push_back(alice);
    pair.bob_bits.push_back(bob);
    pair.slot_indices.push_back(ev.slot);
    errors += (alice != bob);
  }
  if (!pair.alice_bits.empty())
    pair.measured_qber =
        static_cast<double>(errors) / static_cast<double>(pair.alice_bits.size());
  return pair;
}

EmpiricalRates empirical_rates(const SiftedKeyPair& pair, double duration_s) {
  if (!(duration_s > 0.0)) throw std::invalid_argument("duration_s must be positive");
  EmpiricalRates r;
  r.sifted_rate_bps = static_cast<double>(pair.size()) / duration_s;
  r.qber = pair.measured_qber;
  return r;
}

}  // namespace dpsqkd
