#pragma once

#include <cstdint>
#include <string_view>

namespace qrng {

/// Geiger-mode avalanche photodiode parameters.
struct DetectorParams {
    double base_efficiency = 1.0;     ///< eta0, efficiency once fully recovered
    double recovery_time_ns = 1000.0; ///< linear ramp length from 0 back to eta0
    double dark_rate_hz = 3000.0;
    double afterpulse_prob = 0.0;
    double afterpulse_tau_ns = 100.0; ///< mean of the exponential afterpulse delay
};

enum class Scheme { one_detector, two_detector };

std::string_view to_string(Scheme scheme) noexcept;
Scheme scheme_from_string(std::string_view text);

/**
 * Physical and electronic parameters of the simulated generator.
 *
 * Times are relative to the start of a pulse frame. The '0' window is
 * centred on the short-path arrival at window0_offset_ns, the '1' window on
 * window0_offset_ns + path_delay_ns, and the noise window on
 * noise_window_offset_ns. All windows are window_width_ns wide.
 */
struct DeviceConfig {
    double pulse_rate_hz = 1e6;
    double mean_photons_per_pulse = 0.1;
    double split_to_one = 0.411;
    double path_delay_ns = 60.0;
    double window_width_ns = 10.0;
    double window0_offset_ns = 0.0;
    double noise_window_offset_ns = 200.0;
    double arrival_jitter_sigma_ns = 1.0;
    DetectorParams detector;
    Scheme scheme = Scheme::one_detector;
    bool reject_adjacent = false;

    double period_ns() const noexcept { return 1e9 / pulse_rate_hz; }
    double window1_offset_ns() const noexcept { return window0_offset_ns + path_delay_ns; }

    /// Throws ConfigError naming the first violated invariant.
    void validate() const;
};

/// eta0 * min(dt / tau_rec, 1). Throws DomainError for negative dt.
double detector_efficiency(double dt_ns, const DetectorParams& params);

} // namespace qrng
