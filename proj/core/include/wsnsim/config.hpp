#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wsnsim/simulator.hpp"

namespace wsnsim {

/// Parse or validation failure in a config file. `line` is 0 when the error
/// is not tied to a single line (e.g. a missing required key).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

/// Parses `key = value` text with [radio], [energy], [topology], [routing]
/// and [sim] sections. `preset = name` replaces the whole config with the
/// preset, so it belongs before any override. Throws ConfigError.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::filesystem::path& path);

/// Writes every field explicitly, in SI units, so parse_config gives back an
/// identical SimConfig.
std::string serialize_config(const SimConfig& cfg);

std::optional<SimConfig> preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace wsnsim
