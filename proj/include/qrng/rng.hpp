#pragma once

#include <array>
#include <cstdint>

namespace qrng {

/// One step of the splitmix64 sequence. Advances `state` and returns the mixed output.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/**
 * Deterministic engine driving the simulator: xoshiro256** draws from a
 * state filled by four consecutive splitmix64 outputs of the seed.
 *
 * Output is identical across runs and platforms for a given seed. Not
 * cryptographically secure. Single owner; give each thread its own engine.
 */
class RngEngine {
public:
    using result_type = std::uint64_t;

    explicit RngEngine(std::uint64_t seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    /// Next raw 64-bit output.
    result_type next() noexcept;
    result_type operator()() noexcept { return next(); }

    /// Uniform double in [0,1) with 53 significant bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard normal deviate (Box-Muller, two uniforms per call).
    double normal() noexcept;

    /// Exponential deviate with the given mean (one uniform per call).
    double exponential(double mean) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    const std::array<std::uint64_t, 4>& state() const noexcept { return state_; }

private:
    std::array<std::uint64_t, 4> state_{};
    std::uint64_t seed_;
};

inline RngEngine rng_new(std::uint64_t seed) noexcept { return RngEngine(seed); }

/// Poisson(mu) by inversion with sequential search; consumes exactly one uniform.
/// Throws DomainError unless 0 <= mu <= 30.
std::uint32_t sample_poisson(RngEngine& rng, double mu);

} // namespace qrng
