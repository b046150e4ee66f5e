#include "qrng/bitstream.hpp"

#include <bit>

#include "qrng/errors.hpp"

namespace qrng {

std::string_view to_string(Origin origin) noexcept {
    switch (origin) {
    case Origin::simulated: return "simulated";
    case Origin::file: return "file";
    case Origin::extracted: return "extracted";
    }
    return "file";
}

Origin origin_from_string(std::string_view text) {
    if (text == "simulated") return Origin::simulated;
    if (text == "file") return Origin::file;
    if (text == "extracted") return Origin::extracted;
    throw FormatError("unknown origin '" + std::string(text) + "'");
}

BitStream::BitStream(std::vector<std::uint64_t> words, std::size_t length, Origin origin)
    : words_(std::move(words)), length_(length) {
    const std::size_t needed = (length + 63) / 64;
    if (words_.size() < needed) throw DomainError("BitStream: fewer words than length requires");
    words_.resize(needed);
    if (length & 63) words_.back() &= (std::uint64_t{1} << (length & 63)) - 1;
    for (auto w : words_) ones_ += static_cast<std::size_t>(std::popcount(w));
    meta_.origin = origin;
    if (length_ > 0) meta_.one_fraction = static_cast<double>(ones_) / static_cast<double>(length_);
}

BitStream BitStream::from_string(std::string_view text, Origin origin) {
    BitStreamBuilder builder;
    builder.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') throw DomainError("BitStream: expected only '0' and '1' characters");
        builder.push_back(c == '1');
    }
    return std::move(builder).build(origin);
}

BitStream BitStream::from_bits(std::span<const std::uint8_t> bits, Origin origin) {
    BitStreamBuilder builder;
    builder.reserve(bits.size());
    for (auto b : bits) builder.push_back(b != 0);
    return std::move(builder).build(origin);
}

BitStream BitStream::from_packed_bytes(std::span<const std::uint8_t> bytes, std::size_t length,
                                       Origin origin) {
    if (bytes.size() * 8 < length) throw DomainError("BitStream: fewer bytes than length requires");
    std::vector<std::uint64_t> words((length + 63) / 64, 0);
    const std::size_t used = (length + 7) / 8;
    for (std::size_t i = 0; i < used; ++i) {
        words[i >> 3] |= static_cast<std::uint64_t>(bytes[i]) << (8 * (i & 7));
    }
    return BitStream(std::move(words), length, origin);
}

std::vector<std::uint8_t> BitStream::to_packed_bytes() const {
    std::vector<std::uint8_t> bytes((length_ + 7) / 8);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        bytes[i] = static_cast<std::uint8_t>(words_[i >> 3] >> (8 * (i & 7)));
    }
    return bytes;
}

std::string BitStream::to_string() const {
    std::string out(length_, '0');
    for (std::size_t i = 0; i < length_; ++i) {
        if ((*this)[i]) out[i] = '1';
    }
    return out;
}

std::vector<std::uint8_t> BitStream::to_bits() const {
    std::vector<std::uint8_t> out(length_);
    for (std::size_t i = 0; i < length_; ++i) out[i] = (*this)[i];
    return out;
}

BitStream BitStream::slice(std::size_t first, std::size_t count) const {
    if (first > length_ || count > length_ - first) throw DomainError("BitStream::slice out of range");
    std::vector<std::uint64_t> words((count + 63) / 64, 0);
    const std::size_t shift = first & 63;
    const std::size_t base = first >> 6;
    for (std::size_t w = 0; w < words.size(); ++w) {
        std::uint64_t lo = words_[base + w] >> shift;
        if (shift != 0 && base + w + 1 < words_.size()) lo |= words_[base + w + 1] << (64 - shift);
        words[w] = lo;
    }
    return BitStream(std::move(words), count, meta_.origin);
}

BitStream BitStream::with_origin(Origin origin) const {
    BitStream copy = *this;
    copy.meta_.origin = origin;
    return copy;
}

void BitStreamBuilder::append(const BitStream& other) {
    const auto src = other.words();
    const std::size_t n = other.size();
    if ((length_ & 63) == 0) {
        words_.insert(words_.end(), src.begin(), src.end());
        length_ += n;
        return;
    }
    for (std::size_t i = 0; i < n; ++i) push_back(other[i]);
}

BitStream BitStreamBuilder::build(Origin origin) && {
    return BitStream(std::move(words_), length_, origin);
}

double bit_fraction(const BitStream& stream) {
    if (stream.empty()) throw EmptyInputError("bit_fraction: empty stream");
    return static_cast<double>(stream.count_ones()) / static_cast<double>(stream.size());
}

} // namespace qrng
