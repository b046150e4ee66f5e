#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qrng/autocorr.hpp"
#include "qrng/simulate.hpp"

namespace qrng {

/// Pulses per run for the lag-scan scenarios: about 3.8e7 raw bits at the defaults.
inline constexpr std::uint64_t scenario_pulses = 400'000'000;
/// Pulses for noise-budget.
inline constexpr std::uint64_t noise_budget_pulses = 10'000'000;

struct ScenarioOptions {
    std::uint64_t seed = 7;
    std::optional<std::uint64_t> pulses; ///< scenario default when empty
    std::size_t max_lag = 2000;
    double flag_sigma = 5.0;
};

struct ScenarioOutcome {
    std::string name;
    bool property_holds = false;
    nlohmann::ordered_json report;
};

/// Lag-1 view of a lag scan.
struct LagOneSummary {
    double gamma_1 = 0.0;
    double scan_mean = 0.0;
    double scan_sigma = 0.0;
    double deviation = 0.0;       ///< gamma_1 - scan_mean
    double sigma_deviation = 0.0; ///< deviation / scan_sigma
    std::vector<LagOutlier> outliers;
};

LagOneSummary summarize_lag_one(const LagScan& scan);

const std::vector<std::string>& scenario_names();

/// Runs deadtime-anomaly, two-detector, rejection, pulse-rate-sweep or noise-budget.
/// Throws DomainError for an unknown name.
ScenarioOutcome run_scenario(std::string_view name, const ScenarioOptions& options = {});

} // namespace qrng
