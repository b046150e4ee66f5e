#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "qrng/device.hpp"

namespace qrng {

/// A run as described by a config file: the device plus optional run settings.
struct RunConfig {
    DeviceConfig device;
    std::optional<std::uint64_t> pulses;
    std::optional<std::uint64_t> seed;
};

nlohmann::ordered_json to_json(const DeviceConfig& config);

/**
 * Parses a device config object. Missing keys keep their defaults; unknown
 * keys and wrongly typed values throw ConfigError whose message starts with
 * the JSON pointer of the offending value, e.g. "/detector/dark_rate_hz".
 * The parsed config is not validated; call DeviceConfig::validate().
 */
DeviceConfig device_config_from_json(const nlohmann::json& j);

/// Accepts either a bare device object or {"device": {...}, "pulses": n, "seed": s}.
RunConfig run_config_from_json(const nlohmann::json& j);

/// Reads and parses a config file. IoError when unreadable, ConfigError when malformed.
RunConfig load_run_config(const std::filesystem::path& path);

} // namespace qrng
