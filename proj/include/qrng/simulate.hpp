#pragma once

#include <cstdint>
#include <vector>

#include "qrng/bitstream.hpp"
#include "qrng/device.hpp"

namespace qrng {

enum class EventLabel { zero, one, noise, outside };
enum class EventCause { photon, dark, afterpulse };

/// One avalanche that actually fired.
struct DetectionEvent {
    std::uint64_t pulse_index = 0;
    double time_ns = 0.0; ///< absolute, pulse_index * period + offset in frame
    EventLabel label = EventLabel::outside;
    EventCause cause = EventCause::photon;
    int detector = 0;
};

struct CounterBank {
    std::uint64_t zeros = 0;
    std::uint64_t ones = 0;
    std::uint64_t noise = 0;
    std::uint64_t ambiguous = 0;
    std::uint64_t rejected_adjacent = 0;
};

struct SimulationResult {
    BitStream raw_bits;
    CounterBank counters;
    std::uint64_t pulses_simulated = 0;
    /// Bits (emitted or rejected) whose preceding frame also yielded a bit.
    std::uint64_t adjacent_bits = 0;
    /// Bits that have a preceding frame at all (every bit except one from frame 0).
    std::uint64_t bits_with_predecessor = 0;
    DeviceConfig config_echo;
    std::uint64_t seed = 0;
};

/// Largest pulse count simulate() accepts.
inline constexpr std::uint64_t max_pulses = std::uint64_t{1} << 40;

/**
 * Runs n_pulses frames of the generator. Deterministic in (config, seed).
 * When `event_log` is given, every fired avalanche is appended to it.
 * Throws ConfigError on invalid config, CapacityError when n_pulses is too large.
 */
SimulationResult simulate(const DeviceConfig& config, std::uint64_t seed, std::uint64_t n_pulses,
                          std::vector<DetectionEvent>* event_log = nullptr);

/// noise / (zeros + ones). Throws EmptyInputError when no bits were counted.
double noise_fraction(const CounterBank& counters);

/// Fraction of bits whose preceding frame also yielded a bit. Needs at least 2 bits.
double adjacent_detection_fraction(const SimulationResult& result);

} // namespace qrng
