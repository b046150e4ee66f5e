#include "qrng/extract.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "qrng/errors.hpp"
#include "qrng/numeric.hpp"

namespace qrng {

std::string_view to_string(ExtractorMethod method) noexcept {
    return method == ExtractorMethod::peres ? "peres" : "von_neumann";
}

ExtractorMethod extractor_from_string(std::string_view text) {
    if (text == "vn" || text == "von_neumann") return ExtractorMethod::von_neumann;
    if (text == "peres") return ExtractorMethod::peres;
    throw DomainError("unknown extraction method '" + std::string(text) + "' (expected vn|peres)");
}

namespace {

using Bits = std::vector<std::uint8_t>;

void peres_into(const Bits& x, unsigned depth_left, BitStreamBuilder& out) {
    if (depth_left == 0 || x.size() < 2) return;
    const std::size_t pairs = x.size() / 2;
    Bits u;
    Bits v;
    u.reserve(pairs);
    v.reserve(pairs / 2 + 1);
    for (std::size_t i = 0; i < pairs; ++i) {
        const std::uint8_t a = x[2 * i];
        const std::uint8_t b = x[2 * i + 1];
        if (a != b) {
            out.push_back(a);
        } else {
            v.push_back(a);
        }
        u.push_back(a ^ b);
    }
    peres_into(u, depth_left - 1, out);
    peres_into(v, depth_left - 1, out);
}

ExtractionReport make_report(ExtractorMethod method, const BitStream& input, const BitStream& output) {
    ExtractionReport r;
    r.method = method;
    r.input_length = input.size();
    r.output_length = output.size();
    if (!input.empty()) {
        r.yield_per_input_bit = static_cast<double>(output.size()) / static_cast<double>(input.size());
        r.input_one_fraction = bit_fraction(input);
    }
    r.entropy_bound = binary_entropy(r.input_one_fraction);
    r.efficiency_vs_entropy = r.entropy_bound > 0.0 ? r.yield_per_input_bit / r.entropy_bound : 0.0;
    return r;
}

void von_neumann_into(const BitStream& input, BitStreamBuilder& out) {
    const std::size_t pairs = input.size() / 2;
    for (std::size_t i = 0; i < pairs; ++i) {
        const bool a = input[2 * i];
        if (a != input[2 * i + 1]) out.push_back(a);
    }
}

void extract_into(const BitStream& input, ExtractorMethod method, std::optional<unsigned> max_depth,
                  BitStreamBuilder& out) {
    if (method == ExtractorMethod::von_neumann) {
        von_neumann_into(input, out);
        return;
    }
    // Each level at least halves the input, so 64 levels is unbounded in practice.
    const unsigned depth = max_depth.value_or(64);
    if (depth == 0) throw DomainError("peres: max_depth must be >= 1");
    peres_into(input.to_bits(), depth, out);
}

} // namespace

Extraction von_neumann(const BitStream& input) { return extract(input, ExtractorMethod::von_neumann); }

Extraction peres(const BitStream& input, std::optional<unsigned> max_depth) {
    return extract(input, ExtractorMethod::peres, max_depth);
}

Extraction extract(const BitStream& input, ExtractorMethod method, std::optional<unsigned> max_depth) {
    BitStreamBuilder out;
    out.reserve(input.size() / 2);
    extract_into(input, method, max_depth, out);
    Extraction result{std::move(out).build(Origin::extracted), {}};
    result.report = make_report(method, input, result.bits);
    return result;
}

Extraction extract_chunked(const BitStream& input, ExtractorMethod method, std::size_t chunk_bits,
                           std::optional<unsigned> max_depth) {
    if (chunk_bits < 2) throw DomainError("extract_chunked: chunk_bits must be >= 2");
    BitStreamBuilder out;
    out.reserve(input.size() / 2);
    for (std::size_t first = 0; first < input.size(); first += chunk_bits) {
        const std::size_t count = std::min(chunk_bits, input.size() - first);
        extract_into(input.slice(first, count), method, max_depth, out);
    }
    Extraction result{std::move(out).build(Origin::extracted), {}};
    result.report = make_report(method, input, result.bits);
    result.report.chunk_bits = chunk_bits;
    return result;
}

} // namespace qrng
