#include "qrng/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "qrng/errors.hpp"
#include "qrng/rng.hpp"

namespace qrng {

namespace {

constexpr double never = std::numeric_limits<double>::infinity();

struct Candidate {
    double time;      // relative to the current frame origin
    std::uint32_t order;
    EventCause cause;
    int detector;
};

// Min-heap on (time, order).
struct Later {
    bool operator()(const Candidate& a, const Candidate& b) const noexcept {
        return a.time != b.time ? a.time > b.time : a.order > b.order;
    }
};

// Frame k owns [k*T + begin, k*T + begin + T); the windows sit in the middle.
struct FrameGeometry {
    double period;
    double begin;
    double half_width;
    double center0;
    double center1;
    double center_noise;

    explicit FrameGeometry(const DeviceConfig& c)
        : period(c.period_ns()),
          half_width(c.window_width_ns / 2),
          center0(c.window0_offset_ns),
          center1(c.window1_offset_ns()),
          center_noise(c.noise_window_offset_ns) {
        const double lo = std::min(center0, center_noise) - half_width;
        const double hi = std::max(center1, center_noise) + half_width;
        begin = lo - (period - (hi - lo)) / 2;
    }

    double end() const noexcept { return begin + period; }

    bool inside(double t, double center) const noexcept {
        return t >= center - half_width && t < center + half_width;
    }

    EventLabel classify(double t) const noexcept {
        if (inside(t, center0)) return EventLabel::zero;
        if (inside(t, center1)) return EventLabel::one;
        if (inside(t, center_noise)) return EventLabel::noise;
        return EventLabel::outside;
    }
};

} // namespace

SimulationResult simulate(const DeviceConfig& config, std::uint64_t seed, std::uint64_t n_pulses,
                          std::vector<DetectionEvent>* event_log) {
    config.validate();
    if (n_pulses < 1) throw ConfigError("simulate: n_pulses must be >= 1");
    if (n_pulses > max_pulses) throw CapacityError("simulate: n_pulses exceeds " + std::to_string(max_pulses));

    const FrameGeometry geo(config);
    const DetectorParams& det = config.detector;
    const bool two = config.scheme == Scheme::two_detector;
    const int n_detectors = two ? 2 : 1;
    const double mu = config.mean_photons_per_pulse;
    const double sigma = config.arrival_jitter_sigma_ns;
    const double dark_mean_gap = det.dark_rate_hz > 0.0 ? 1e9 / det.dark_rate_hz : never;

    RngEngine rng(seed);

    // Per-detector state, times relative to the current frame origin.
    std::array<double, 2> last_fire{-never, -never};
    std::array<double, 2> next_dark{never, never};
    for (int d = 0; d < n_detectors; ++d) {
        if (dark_mean_gap < never) next_dark[d] = geo.begin + rng.exponential(dark_mean_gap);
    }
    std::vector<Candidate> pending_afterpulses;
    std::vector<Candidate> heap;
    heap.reserve(16);

    SimulationResult result;
    result.config_echo = config;
    result.seed = seed;
    result.pulses_simulated = n_pulses;
    CounterBank& counters = result.counters;

    BitStreamBuilder bits;
    bits.reserve(static_cast<std::size_t>(static_cast<double>(n_pulses) * (1.0 - std::exp(-mu)) * 1.05) + 64);

    bool previous_frame_had_bit = false;
    const double frame_end = geo.end();

    for (std::uint64_t k = 0; k < n_pulses; ++k) {
        heap.clear();
        std::uint32_t order = 0;

        const std::uint32_t photons = sample_poisson(rng, mu);
        for (std::uint32_t i = 0; i < photons; ++i) {
            const bool long_path = rng.uniform() < config.split_to_one;
            double t = long_path ? geo.center1 : geo.center0;
            if (sigma > 0.0) t += sigma * rng.normal();
            t = std::clamp(t, geo.begin, std::nextafter(frame_end, geo.begin));
            heap.push_back({t, order++, EventCause::photon, two && long_path ? 1 : 0});
        }
        for (int d = 0; d < n_detectors; ++d) {
            while (next_dark[d] < frame_end) {
                heap.push_back({next_dark[d], order++, EventCause::dark, d});
                next_dark[d] += rng.exponential(dark_mean_gap);
            }
        }
        if (!pending_afterpulses.empty()) {
            auto split = std::partition(pending_afterpulses.begin(), pending_afterpulses.end(),
                                        [&](const Candidate& c) { return c.time >= frame_end; });
            for (auto it = split; it != pending_afterpulses.end(); ++it) {
                Candidate c = *it;
                c.order = order++;
                heap.push_back(c);
            }
            pending_afterpulses.erase(split, pending_afterpulses.end());
        }

        bool fired_zero = false;
        bool fired_one = false;
        if (!heap.empty()) {
            std::make_heap(heap.begin(), heap.end(), Later{});
            while (!heap.empty()) {
                std::pop_heap(heap.begin(), heap.end(), Later{});
                const Candidate c = heap.back();
                heap.pop_back();

                const int d = c.detector;
                const double eff = detector_efficiency(c.time - last_fire[d], det);
                const bool fires = eff >= 1.0 || (eff > 0.0 && rng.uniform() < eff);
                if (!fires) continue;
                last_fire[d] = c.time;

                const EventLabel label = geo.classify(c.time);
                if (label == EventLabel::zero && (!two || d == 0)) fired_zero = true;
                if (label == EventLabel::one && (!two || d == 1)) fired_one = true;
                if (label == EventLabel::noise) ++counters.noise;
                if (event_log != nullptr) {
                    event_log->push_back({k, static_cast<double>(k) * geo.period + c.time, label, c.cause, d});
                }

                if (det.afterpulse_prob > 0.0 && rng.uniform() < det.afterpulse_prob) {
                    Candidate ap{c.time + rng.exponential(det.afterpulse_tau_ns), 0, EventCause::afterpulse, d};
                    if (ap.time < frame_end) {
                        ap.order = order++;
                        heap.push_back(ap);
                        std::push_heap(heap.begin(), heap.end(), Later{});
                    } else {
                        pending_afterpulses.push_back(ap);
                    }
                }
            }
        }

        bool frame_has_bit = false;
        if (fired_zero && fired_one) {
            ++counters.ambiguous;
        } else if (fired_zero || fired_one) {
            frame_has_bit = true;
            if (fired_one) {
                ++counters.ones;
            } else {
                ++counters.zeros;
            }
            if (k > 0) ++result.bits_with_predecessor;
            if (previous_frame_had_bit) ++result.adjacent_bits;
            if (config.reject_adjacent && previous_frame_had_bit) {
                ++counters.rejected_adjacent;
            } else {
                bits.push_back(fired_one);
            }
        }
        previous_frame_had_bit = frame_has_bit;

        // Shift every stored time into the next frame's coordinates.
        for (int d = 0; d < n_detectors; ++d) {
            last_fire[d] -= geo.period;
            next_dark[d] -= geo.period;
        }
        for (auto& c : pending_afterpulses) c.time -= geo.period;
    }

    result.raw_bits = std::move(bits).build(Origin::simulated);
    return result;
}

double noise_fraction(const CounterBank& counters) {
    const std::uint64_t bits = counters.zeros + counters.ones;
    if (bits == 0) throw EmptyInputError("noise_fraction: no bits counted");
    return static_cast<double>(counters.noise) / static_cast<double>(bits);
}

double adjacent_detection_fraction(const SimulationResult& result) {
    const std::uint64_t bits = result.counters.zeros + result.counters.ones;
    if (bits < 2 || result.bits_with_predecessor == 0) {
        throw EmptyInputError("adjacent_detection_fraction: needs at least 2 bits");
    }
    return static_cast<double>(result.adjacent_bits) / static_cast<double>(result.bits_with_predecessor);
}

} // namespace qrng
