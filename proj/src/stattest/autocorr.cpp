#include "qrng/autocorr.hpp"

#include <bit>
#include <cstdint>

#include "qrng/errors.hpp"

namespace qrng {

namespace {

// Bits [pos, pos+64) of the stream; positions past the last word read as zero.
inline std::uint64_t window64(std::span<const std::uint64_t> w, std::size_t pos) noexcept {
    const std::size_t idx = pos >> 6;
    const unsigned shift = pos & 63;
    if (idx >= w.size()) return 0;
    std::uint64_t lo = w[idx] >> shift;
    if (shift != 0 && idx + 1 < w.size()) lo |= w[idx + 1] << (64 - shift);
    return lo;
}

// sum_{t < count} X_{a+t} xor X_{b+t}, with a word-aligned.
std::size_t xor_count_range(std::span<const std::uint64_t> w, std::size_t a, std::size_t b,
                            std::size_t count) noexcept {
    std::size_t total = 0;
    const std::size_t full = count >> 6;
    const std::size_t a_word = a >> 6;
    for (std::size_t q = 0; q < full; ++q) {
        total += static_cast<std::size_t>(std::popcount(w[a_word + q] ^ window64(w, b + 64 * q)));
    }
    const unsigned rest = count & 63;
    if (rest != 0) {
        const std::uint64_t mask = (std::uint64_t{1} << rest) - 1;
        const std::uint64_t x = window64(w, a + 64 * full) ^ window64(w, b + 64 * full);
        total += static_cast<std::size_t>(std::popcount(x & mask));
    }
    return total;
}

void check_lag(const BitStream& stream, std::size_t lag) {
    if (stream.size() < 2) throw DomainError("autocorrelation: stream needs at least 2 bits");
    if (lag < 1 || lag >= stream.size()) {
        throw DomainError("autocorrelation: lag " + std::to_string(lag) + " outside [1, " +
                          std::to_string(stream.size() - 1) + "]");
    }
}

} // namespace

std::size_t circular_xor_count(const BitStream& stream, std::size_t lag) {
    check_lag(stream, lag);
    const auto w = stream.words();
    const std::size_t n = stream.size();
    // i in [0, n-lag) pairs with i+lag; i in [n-lag, n) wraps to i+lag-n.
    return xor_count_range(w, 0, lag, n - lag) + xor_count_range(w, 0, n - lag, lag);
}

double autocorrelation(const BitStream& stream, std::size_t lag) {
    return static_cast<double>(circular_xor_count(stream, lag)) / static_cast<double>(stream.size());
}

double autocorrelation_naive(const BitStream& stream, std::size_t lag) {
    check_lag(stream, lag);
    const std::size_t n = stream.size();
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total += stream[i] != stream[(i + lag) % n];
    }
    return static_cast<double>(total) / static_cast<double>(n);
}

} // namespace qrng
