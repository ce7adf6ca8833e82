#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "geopic/simulation.hpp"

namespace geopic {

/// Malformed or out-of-range configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a configuration in the TOML layout
///   [case] [grid] [time] [particles] [output]
/// Keys missing from the file keep the preset of [case].name.
SimConfig parse_config(std::string_view toml_text);
SimConfig load_config(const std::string& path);

/// Writes every field, so parse_config(serialize_config(c)) == c.
std::string serialize_config(const SimConfig& config);

}  // namespace geopic
