#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dpsqkd {

/// How the two detector efficiencies combine into the single effective
/// efficiency used by the click-probability model.
enum class EtaComposition { kSumHalved, kMean, kSum };

const char* to_string(EtaComposition mode);
std::optional<EtaComposition> parse_eta_composition(std::string_view text);

struct DetectorParams {
  double eta_fitted = 0.0;  // quantum efficiency (fraction)
  double dcr_cps = 0.0;     // dark count rate, counts per second
  double window_efficiency_factor = 1.0;  // reduction from gating on the time window

  double effective_eta() const { return eta_fitted * window_efficiency_factor; }
};

struct SystemParams {
  double mu = 0.2;                // mean photon number per pulse
  double clock_rate_hz = 1e9;    // pulse repetition rate
  double time_window_s = 100e-12;  // detection time window
  double dead_time_s = 20e-9;    // detector dead time
  double baseline_error = 0.01;  // wrong-port probability (finite interferometer extinction)
  double ec_inefficiency = 1.2;  // error-correction cost factor relative to Shannon
  double system_loss_db = 2.0;   // receiver-internal loss
  DetectorParams detector1;
  DetectorParams detector2;
  EtaComposition eta_composition = EtaComposition::kSum;

  double effective_eta() const;
  /// Dead time expressed in clock slots, rounded up.
  std::uint64_t dead_slots() const;
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct ChannelSpec {
  double loss_db = 0.0;
  // Optional fiber provenance; when both are set, loss_db must equal their product.
  std::optional<double> length_km;
  std::optional<double> attenuation_db_per_km;

  static ChannelSpec from_loss(double loss_db);
  static ChannelSpec from_fiber(double length_km, double attenuation_db_per_km);
  void validate() const;
};

/// Built-in detector/parameter presets.
SystemParams preset_dcr004();  // eta 6.7% / 4.0%, DCR 0.04 cps
SystemParams preset_dcr001();  // eta 4.4% / 3.1%, DCR 0.01 cps
std::optional<SystemParams> find_preset(std::string_view name);
const std::vector<std::string>& preset_names();

}  // namespace dpsqkd
