#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "zap/harness.hpp"

namespace zap {

/// Parses flat `key = value` text on top of `base`. Blank lines and `#`
/// comments are ignored; unknown keys, duplicate keys and malformed values
/// raise ConfigError with the line number.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});

/// Reads and parses a config file; relative out_dir stays relative to the CWD.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Sets one field from its textual value.
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Every accepted key, in documentation order.
const std::vector<std::string>& config_keys();

}  // namespace zap
