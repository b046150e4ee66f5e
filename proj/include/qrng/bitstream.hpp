#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qrng {

enum class Origin { simulated, file, extracted };

std::string_view to_string(Origin origin) noexcept;
Origin origin_from_string(std::string_view text);

/// Provenance carried alongside a bit sequence.
struct StreamMeta {
    Origin origin = Origin::simulated;
    /// (number of ones) / length; absent for empty streams.
    std::optional<double> one_fraction;
};

/**
 * Immutable, length-counted packed bit sequence.
 *
 * Bit i lives in bit (i mod 64) of word i/64, which is the same as bit
 * (i mod 8) of byte i/8 when the words are laid out little-endian. Bits past
 * length() are kept at zero and never observed.
 */
class BitStream {
public:
    BitStream() = default;

    /// Adopts packed words; bits at or past `length` are cleared.
    BitStream(std::vector<std::uint64_t> words, std::size_t length, Origin origin);

    /// Builds from a '0'/'1' string. Throws DomainError on any other character.
    static BitStream from_string(std::string_view text, Origin origin = Origin::file);
    /// Builds from one byte per bit (non-zero = 1).
    static BitStream from_bits(std::span<const std::uint8_t> bits, Origin origin = Origin::file);
    /// Builds from packed LSB-first bytes holding `length` bits.
    static BitStream from_packed_bytes(std::span<const std::uint8_t> bytes, std::size_t length,
                                       Origin origin = Origin::file);

    std::size_t size() const noexcept { return length_; }
    bool empty() const noexcept { return length_ == 0; }

    bool operator[](std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }

    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::size_t count_ones() const noexcept { return ones_; }
    const StreamMeta& meta() const noexcept { return meta_; }

    /// Packed bytes, LSB first, ceil(size/8) long.
    std::vector<std::uint8_t> to_packed_bytes() const;
    std::string to_string() const;
    std::vector<std::uint8_t> to_bits() const;

    /// Copy restricted to [first, first+count).
    BitStream slice(std::size_t first, std::size_t count) const;
    /// Same bits, different origin label.
    BitStream with_origin(Origin origin) const;

    friend bool operator==(const BitStream& a, const BitStream& b) noexcept {
        return a.length_ == b.length_ && a.words_ == b.words_;
    }

private:
    std::vector<std::uint64_t> words_;
    std::size_t length_ = 0;
    std::size_t ones_ = 0;
    StreamMeta meta_;
};

/// Appends bits one at a time, then freezes them into a BitStream.
class BitStreamBuilder {
public:
    void reserve(std::size_t bits) { words_.reserve((bits + 63) / 64); }

    void push_back(bool bit) {
        if ((length_ & 63) == 0) words_.push_back(0);
        words_.back() |= static_cast<std::uint64_t>(bit) << (length_ & 63);
        ++length_;
    }

    void append(const BitStream& other);

    std::size_t size() const noexcept { return length_; }

    BitStream build(Origin origin) &&;

private:
    std::vector<std::uint64_t> words_;
    std::size_t length_ = 0;
};

/// (number of ones) / length. Throws EmptyInputError on an empty stream.
double bit_fraction(const BitStream& stream);

} // namespace qrng
