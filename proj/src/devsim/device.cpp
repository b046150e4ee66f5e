#include "qrng/device.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qrng/errors.hpp"

namespace qrng {

std::string_view to_string(Scheme scheme) noexcept {
    return scheme == Scheme::two_detector ? "two_detector" : "one_detector";
}

Scheme scheme_from_string(std::string_view text) {
    if (text == "one_detector") return Scheme::one_detector;
    if (text == "two_detector") return Scheme::two_detector;
    throw ConfigError("scheme must be one_detector or two_detector, got '" + std::string(text) + "'");
}

namespace {

void require(bool ok, const char* invariant) {
    if (!ok) throw ConfigError(std::string("invalid device config: ") + invariant);
}

bool overlap(double a, double b, double width) { return std::abs(a - b) < width; }

} // namespace

void DeviceConfig::validate() const {
    const auto finite = [](double v) { return std::isfinite(v); };
    require(finite(pulse_rate_hz) && pulse_rate_hz > 0.0, "pulse_rate_hz > 0");
    require(finite(mean_photons_per_pulse) && mean_photons_per_pulse >= 0.0, "mean_photons_per_pulse >= 0");
    require(mean_photons_per_pulse <= 30.0, "mean_photons_per_pulse <= 30");
    require(finite(split_to_one) && split_to_one >= 0.0 && split_to_one <= 1.0, "0 <= split_to_one <= 1");
    require(finite(window_width_ns) && window_width_ns > 0.0, "window_width_ns > 0");
    require(finite(path_delay_ns) && path_delay_ns >= window_width_ns,
            "path_delay_ns >= window_width_ns (windows 0 and 1 must not overlap)");
    require(finite(window0_offset_ns) && window0_offset_ns >= 0.0, "window0_offset_ns >= 0");
    require(finite(noise_window_offset_ns), "noise_window_offset_ns finite");
    require(period_ns() >= noise_window_offset_ns + window_width_ns,
            "1/pulse_rate_hz >= noise_window_offset_ns + window_width_ns (windows fit inside one frame)");
    require(!overlap(noise_window_offset_ns, window0_offset_ns, window_width_ns) &&
                !overlap(noise_window_offset_ns, window1_offset_ns(), window_width_ns),
            "noise window must not overlap windows 0 and 1");
    const double lo = std::min({window0_offset_ns, noise_window_offset_ns}) - window_width_ns / 2;
    const double hi = std::max({window1_offset_ns(), noise_window_offset_ns}) + window_width_ns / 2;
    require(hi - lo <= period_ns(), "all windows span at most one pulse period");
    require(finite(arrival_jitter_sigma_ns) && arrival_jitter_sigma_ns >= 0.0, "arrival_jitter_sigma_ns >= 0");
    const auto& d = detector;
    require(finite(d.base_efficiency) && d.base_efficiency >= 0.0 && d.base_efficiency <= 1.0,
            "0 <= detector.base_efficiency <= 1");
    require(finite(d.recovery_time_ns) && d.recovery_time_ns > 0.0, "detector.recovery_time_ns > 0");
    require(finite(d.dark_rate_hz) && d.dark_rate_hz >= 0.0, "detector.dark_rate_hz >= 0");
    require(finite(d.afterpulse_prob) && d.afterpulse_prob >= 0.0 && d.afterpulse_prob <= 1.0,
            "0 <= detector.afterpulse_prob <= 1");
    require(finite(d.afterpulse_tau_ns) && d.afterpulse_tau_ns > 0.0, "detector.afterpulse_tau_ns > 0");
}

double detector_efficiency(double dt_ns, const DetectorParams& params) {
    if (!(dt_ns >= 0.0)) throw DomainError("detector_efficiency: dt_ns must be >= 0");
    return params.base_efficiency * std::min(dt_ns / params.recovery_time_ns, 1.0);
}

} // namespace qrng
