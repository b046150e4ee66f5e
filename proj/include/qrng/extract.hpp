#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "qrng/bitstream.hpp"

namespace qrng {

enum class ExtractorMethod { von_neumann, peres };

std::string_view to_string(ExtractorMethod method) noexcept;
/// Accepts "vn", "von_neumann" and "peres".
ExtractorMethod extractor_from_string(std::string_view text);

struct ExtractionReport {
    ExtractorMethod method = ExtractorMethod::von_neumann;
    std::size_t input_length = 0;
    std::size_t output_length = 0;
    double yield_per_input_bit = 0.0;
    double input_one_fraction = 0.0;
    double entropy_bound = 0.0;         ///< h(input_one_fraction)
    double efficiency_vs_entropy = 0.0; ///< yield / entropy_bound, 0 when the bound is 0
    std::size_t chunk_bits = 0;         ///< 0 for whole-stream extraction
};

struct Extraction {
    BitStream bits;
    ExtractionReport report;
};

/// Non-overlapping pairs: 01 -> 0, 10 -> 1, equal pairs dropped, odd tail dropped.
Extraction von_neumann(const BitStream& input);

/**
 * Peres' iterated extractor: VN(x) ++ peres(u) ++ peres(v), where u holds the
 * XOR of every pair and v the value of every equal pair. Recursion stops once
 * max_depth levels have run (unbounded when empty) or fewer than 2 bits remain.
 */
Extraction peres(const BitStream& input, std::optional<unsigned> max_depth = std::nullopt);

Extraction extract(const BitStream& input, ExtractorMethod method,
                   std::optional<unsigned> max_depth = std::nullopt);

/// Extracts each chunk_bits-long slice independently and concatenates; loses yield at chunk edges.
Extraction extract_chunked(const BitStream& input, ExtractorMethod method, std::size_t chunk_bits = 1U << 16,
                           std::optional<unsigned> max_depth = std::nullopt);

/// Exact expected output length over all 2^n inputs of i.i.d. bits with P(1) = p. n <= 20.
double exact_yield_oracle(ExtractorMethod method, unsigned n, double p);

} // namespace qrng
