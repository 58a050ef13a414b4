#include "dpsqkd/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "dpsqkd/textfmt.hpp"

namespace dpsqkd {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "system.mu",
      "system.clock_rate_hz",
      "system.time_window_s",
      "system.dead_time_s",
      "system.baseline_error",
      "system.ec_inefficiency",
      "system.system_loss_db",
      "system.eta_composition",
      "detector1.eta",
      "detector1.dcr",
      "detector1.window_factor",
      "detector2.eta",
      "detector2.dcr",
      "detector2.window_factor",
      "channel.loss_db",
      "channel.length_km",
      "channel.attenuation_db_per_km",
      "sim.kernel",
      "sim.n_slots",
      "sim.duration_s",
      "sim.seed",
      "sim.seeds",
      "sweep.from_db",
      "sweep.to_db",
      "sweep.step_db",
      "distill.sample_fraction",
      "distill.hash_seed",
      "reproduce.duration_s",
      "output.format",
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void write_system_keys(std::map<std::string, std::string>& values, const SystemParams& p) {
  values["system.mu"] = format_shortest(p.mu);
  values["system.clock_rate_hz"] = format_shortest(p.clock_rate_hz);
  values["system.time_window_s"] = format_shortest(p.time_window_s);
  values["system.dead_time_s"] = format_shortest(p.dead_time_s);
  values["system.baseline_error"] = format_shortest(p.baseline_error);
  values["system.ec_inefficiency"] = format_shortest(p.ec_inefficiency);
  values["system.system_loss_db"] = format_shortest(p.system_loss_db);
  values["system.eta_composition"] = to_string(p.eta_composition);
  values["detector1.eta"] = format_shortest(p.detector1.eta_fitted);
  values["detector1.dcr"] = format_shortest(p.detector1.dcr_cps);
  values["detector1.window_factor"] = format_shortest(p.detector1.window_efficiency_factor);
  values["detector2.eta"] = format_shortest(p.detector2.eta_fitted);
  values["detector2.dcr"] = format_shortest(p.detector2.dcr_cps);
  values["detector2.window_factor"] = format_shortest(p.detector2.window_efficiency_factor);
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig cfg;
  write_system_keys(cfg.values_, preset_dcr001());
  cfg.values_["channel.loss_db"] = "0";
  cfg.values_["channel.length_km"] = "";
  cfg.values_["channel.attenuation_db_per_km"] = "";
  cfg.values_["sim.kernel"] = "event";
  cfg.values_["sim.n_slots"] = "100000000";
  cfg.values_["sim.duration_s"] = "10000";
  cfg.values_["sim.seed"] = "1";
  cfg.values_["sim.seeds"] = "3";
  cfg.values_["sweep.from_db"] = "40";
  cfg.values_["sweep.to_db"] = "80";
  cfg.values_["sweep.step_db"] = "1";
  cfg.values_["distill.sample_fraction"] = "1";
  cfg.values_["distill.hash_seed"] = "1";
  cfg.values_["reproduce.duration_s"] = "10000";
  cfg.values_["output.format"] = "csv";
  return cfg;
}

void RunConfig::apply_preset(const std::string& name) {
  const auto preset = find_preset(name);
  if (!preset) {
    std::string names;
    for (const auto& n : preset_names()) {
      if (!names.empty()) names += ", ";
      names += n;
    }
    throw ConfigError("unknown preset: " + name + " (available: " + names + ")");
  }
  write_system_keys(values_, *preset);
  preset_ = name;
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw ConfigError("malformed line " + std::to_string(lineno) + " in " + path +
                        " (expected key = value)");
    set(trim(trimmed.substr(0, eq)), trim(trimmed.substr(eq + 1)));
  }
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (known_keys().count(key) == 0)
    throw ConfigError("unknown configuration key: " + key);
  values_[key] = value;
  explicit_.insert(key);
}

void RunConfig::set_pair(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("expected key=value, got: " + assignment);
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

bool RunConfig::is_set(const std::string& key) const { return explicit_.count(key) > 0; }

const std::string& RunConfig::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown configuration key: " + key);
  return it->second;
}

double RunConfig::get_double(const std::string& key) const {
  const std::string& text = raw(key);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
    throw ConfigError("invalid numeric value for " + key + ": '" + text + "'");
  return v;
}

std::uint64_t RunConfig::get_u64(const std::string& key) const {
  const std::string& text = raw(key);
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE ||
      text.find('-') != std::string::npos)
    throw ConfigError("invalid integer value for " + key + ": '" + text + "'");
  return static_cast<std::uint64_t>(v);
}

int RunConfig::get_int(const std::string& key) const {
  const std::uint64_t v = get_u64(key);
  if (v > 1000000000ull)
    throw ConfigError("value out of range for " + key + ": '" + raw(key) + "'");
  return static_cast<int>(v);
}

const std::string& RunConfig::get_string(const std::string& key) const { return raw(key); }

SystemParams RunConfig::system_params() const {
  SystemParams p;
  p.mu = get_double("system.mu");
  p.clock_rate_hz = get_double("system.clock_rate_hz");
  p.time_window_s = get_double("system.time_window_s");
  p.dead_time_s = get_double("system.dead_time_s");
  p.baseline_error = get_double("system.baseline_error");
  p.ec_inefficiency = get_double("system.ec_inefficiency");
  p.system_loss_db = get_double("system.system_loss_db");
  const std::string& mode = get_string("system.eta_composition");
  const auto parsed = parse_eta_composition(mode);
  if (!parsed)
    throw ConfigError("invalid value for system.eta_composition: '" + mode +
                      "' (expected sum_halved, mean, or sum)");
  p.eta_composition = *parsed;
  p.detector1.eta_fitted = get_double("detector1.eta");
  p.detector1.dcr_cps = get_double("detector1.dcr");
  p.detector1.window_efficiency_factor = get_double("detector1.window_factor");
  p.detector2.eta_fitted = get_double("detector2.eta");
  p.detector2.dcr_cps = get_double("detector2.dcr");
  p.detector2.window_efficiency_factor = get_double("detector2.window_factor");
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

ChannelSpec RunConfig::channel() const {
  const bool has_length = !raw("channel.length_km").empty();
  const bool has_att = !raw("channel.attenuation_db_per_km").empty();
  if (has_length != has_att)
    throw ConfigError(
        "channel.length_km and channel.attenuation_db_per_km must be given together");
  try {
    if (has_length) {
      const double length = get_double("channel.length_km");
      const double att = get_double("channel.attenuation_db_per_km");
      ChannelSpec c = ChannelSpec::from_fiber(length, att);
      if (is_set("channel.loss_db")) {
        // explicit loss must agree with the fiber product
        const double loss = get_double("channel.loss_db");
        const double scale = std::max(1.0, std::abs(c.loss_db));
        if (std::abs(loss - c.loss_db) > 1e-9 * scale)
          throw ConfigError(
              "channel.loss_db is inconsistent with length_km * attenuation_db_per_km");
      }
      return c;
    }
    return ChannelSpec::from_loss(get_double("channel.loss_db"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(values_.size());
  for (const auto& [k, v] : values_) out.emplace_back(k, v);
  // keep headers replayable: when the channel comes from a fiber pair,
  // report the loss it derives to instead of the untouched default
  try {
    if (!raw("channel.length_km").empty() &&
        !raw("channel.attenuation_db_per_km").empty()) {
      const std::string loss = format_shortest(channel().loss_db);
      for (auto& [k, v] : out)
        if (k == "channel.loss_db") v = loss;
    }
  } catch (const ConfigError&) {
    // inconsistent channel settings surface when the channel is built
  }
  return out;  // std::map iterates in key order
}

}  // namespace dpsqkd
