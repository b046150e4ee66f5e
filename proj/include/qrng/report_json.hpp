#pragma once

#include <filesystem>

#include <json.hpp>

#include "qrng/extract.hpp"
#include "qrng/simulate.hpp"
#include "qrng/stattest.hpp"

namespace qrng {

/// {"zeros", "ones", "noise", "ambiguous", "rejected_adjacent", "pulses", "adjacent"}
nlohmann::ordered_json counters_to_json(const SimulationResult& result);

nlohmann::ordered_json to_json(const ExtractionReport& report);

/// {"mean", "sigma", "analytic_sigma", "gamma_1", "outliers": [[lag, sigma_dev], ...], ...}
nlohmann::ordered_json to_json(const LagScan& scan);

/// {"alpha", "overall", "tests": [...], "lag_scan": {...}} plus bookkeeping keys.
nlohmann::ordered_json to_json(const TestReport& report);

/// Pretty-prints to a file with a trailing newline. Throws IoError.
void write_json_file(const std::filesystem::path& path, const nlohmann::ordered_json& j);

} // namespace qrng
