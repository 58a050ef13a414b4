#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpsqkd/params.hpp"

// Flat dotted-key run configuration. Sources compose in order
// defaults -> preset -> config file -> explicit sets; later wins.
// Unknown keys are rejected by name.

namespace dpsqkd {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RunConfig {
 public:
  /// All known keys populated with their default values (the DCR 0.01
  /// detector preset plus standard run settings).
  static RunConfig defaults();

  void apply_preset(const std::string& name);
  void load_file(const std::string& path);
  /// Throws ConfigError naming the key when it is unknown.
  void set(const std::string& key, const std::string& value);
  /// Parses "key=value".
  void set_pair(const std::string& assignment);

  bool is_set(const std::string& key) const;  // explicitly, beyond defaults
  const std::string& raw(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  int get_int(const std::string& key) const;
  const std::string& get_string(const std::string& key) const;

  SystemParams system_params() const;
  ChannelSpec channel() const;

  const std::string& preset() const { return preset_; }
  /// Sorted key/value view for metadata headers.
  std::vector<std::pair<std::string, std::string>> resolved() const;

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> explicit_;
  std::string preset_;
};

}  // namespace dpsqkd
