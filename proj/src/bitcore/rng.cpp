#include "qrng/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "qrng/errors.hpp"

namespace qrng {

RngEngine::RngEngine(std::uint64_t seed) noexcept : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
}

RngEngine::result_type RngEngine::next() noexcept {
    auto& s = state_;
    const std::uint64_t result = std::rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = std::rotl(s[3], 45);
    return result;
}

double RngEngine::normal() noexcept {
    // 1 - u keeps the log argument in (0,1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RngEngine::exponential(double mean) noexcept {
    return -mean * std::log(1.0 - uniform());
}

std::uint32_t sample_poisson(RngEngine& rng, double mu) {
    if (!(mu >= 0.0 && mu <= 30.0)) {
        throw DomainError("sample_poisson: mean must lie in [0, 30]");
    }
    const double u = rng.uniform();
    double term = std::exp(-mu);
    double cdf = term;
    std::uint32_t k = 0;
    while (u >= cdf && term > 0.0) {
        ++k;
        term *= mu / k;
        cdf += term;
    }
    return k;
}

} // namespace qrng
