#include "dpsqkd/params.hpp"

#include <cmath>
#include <stdexcept>

namespace dpsqkd {

const char* to_string(EtaComposition mode) {
  switch (mode) {
    case EtaComposition::kSumHalved: return "sum_halved";
    case EtaComposition::kMean: return "mean";
    case EtaComposition::kSum: return "sum";
  }
  return "unknown";
}

std::optional<EtaComposition> parse_eta_composition(std::string_view text) {
  if (text == "sum_halved") return EtaComposition::kSumHalved;
  if (text == "mean") return EtaComposition::kMean;
  if (text == "sum") return EtaComposition::kSum;
  return std::nullopt;
}

double SystemParams::effective_eta() const {
  const double e1 = detector1.effective_eta();
  const double e2 = detector2.effective_eta();
  switch (eta_composition) {
    case EtaComposition::kSumHalved: return 0.5 * (e1 + e2);
    case EtaComposition::kMean: return 0.5 * (e1 + e2);
    case EtaComposition::kSum: return e1 + e2;
  }
  return e1 + e2;
}

std::uint64_t SystemParams::dead_slots() const {
  const double x = dead_time_s * clock_rate_hz;
  if (x <= 0.0) return 0;
  // tolerate floating-point dust just below an integer slot count
  return static_cast<std::uint64_t>(std::ceil(x - 1e-9));
}

namespace {

void check(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

void validate_detector(const DetectorParams& d, const char* which) {
  if (!(d.eta_fitted >= 0.0 && d.eta_fitted <= 1.0))
    throw std::invalid_argument(std::string(which) + ".eta must lie in [0, 1]");
  if (!(d.dcr_cps >= 0.0))
    throw std::invalid_argument(std::string(which) + ".dcr must be nonnegative");
  if (!(d.window_efficiency_factor > 0.0 && d.window_efficiency_factor <= 1.0))
    throw std::invalid_argument(std::string(which) + ".window_factor must lie in (0, 1]");
}

}  // namespace

void SystemParams::validate() const {
  check(mu >= 0.0 && std::isfinite(mu), "system.mu must be nonnegative and finite");
  check(clock_rate_hz > 0.0 && std::isfinite(clock_rate_hz),
        "system.clock_rate_hz must be positive");
  check(time_window_s > 0.0 && std::isfinite(time_window_s),
        "system.time_window_s must be positive");
  check(dead_time_s >= 0.0 && std::isfinite(dead_time_s),
        "system.dead_time_s must be nonnegative");
  check(baseline_error >= 0.0 && baseline_error <= 0.5,
        "system.baseline_error must lie in [0, 0.5]");
  check(ec_inefficiency >= 1.0 && std::isfinite(ec_inefficiency),
        "system.ec_inefficiency must be at least 1");
  check(system_loss_db >= 0.0 && std::isfinite(system_loss_db),
        "system.system_loss_db must be nonnegative");
  validate_detector(detector1, "detector1");
  validate_detector(detector2, "detector2");
}

ChannelSpec ChannelSpec::from_loss(double loss_db) {
  ChannelSpec c;
  c.loss_db = loss_db;
  c.validate();
  return c;
}

ChannelSpec ChannelSpec::from_fiber(double length_km, double attenuation_db_per_km) {
  ChannelSpec c;
  c.length_km = length_km;
  c.attenuation_db_per_km = attenuation_db_per_km;
  c.loss_db = length_km * attenuation_db_per_km;
  c.validate();
  return c;
}

void ChannelSpec::validate() const {
  if (std::isnan(loss_db) || loss_db < 0.0)
    throw std::invalid_argument("channel.loss_db must be nonnegative");
  if (length_km.has_value() != attenuation_db_per_km.has_value())
    throw std::invalid_argument(
        "channel.length_km and channel.attenuation_db_per_km must be given together");
  if (length_km) {
    if (!(*length_km >= 0.0))
      throw std::invalid_argument("channel.length_km must be nonnegative");
    if (!(*attenuation_db_per_km > 0.0))
      throw std::invalid_argument("channel.attenuation_db_per_km must be positive");
    const double derived = *length_km * *attenuation_db_per_km;
    const double scale = std::max(1.0, std::abs(derived));
    if (std::abs(derived - loss_db) > 1e-9 * scale)
      throw std::invalid_argument(
          "channel.loss_db is inconsistent with length_km * attenuation_db_per_km");
  }
}

namespace {

SystemParams base_params() {
  SystemParams p;
  p.mu = 0.2;
  p.clock_rate_hz = 1e9;
  p.time_window_s = 100e-12;
  p.dead_time_s = 20e-9;
  p.baseline_error = 0.01;
  p.ec_inefficiency = 1.2;
  p.system_loss_db = 2.0;
  p.eta_composition = EtaComposition::kSum;
  return p;
}

}  // namespace

SystemParams preset_dcr004() {
  SystemParams p = base_params();
  p.detector1 = {0.067, 0.04, 0.5};
  p.detector2 = {0.040, 0.04, 0.5};
  return p;
}

SystemParams preset_dcr001() {
  SystemParams p = base_params();
  p.detector1 = {0.044, 0.01, 0.5};
  p.detector2 = {0.031, 0.01, 0.5};
  return p;
}

std::optional<SystemParams> find_preset(std::string_view name) {
  if (name == "paper-dcr004") return preset_dcr004();
  if (name == "paper-dcr001") return preset_dcr001();
  return std::nullopt;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"paper-dcr004", "paper-dcr001"};
  return names;
}

}  // namespace dpsqkd
