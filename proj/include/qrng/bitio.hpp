#pragma once

#include <filesystem>
#include <string>

#include "qrng/bitstream.hpp"

namespace qrng {

enum class BitFormat { packed, ascii };

BitFormat bit_format_from_string(const std::string& text);

/// Sidecar path for a packed bit file: "<path>.meta.json".
std::filesystem::path meta_path_for(const std::filesystem::path& bits_path);

/**
 * Packed format: raw LSB-first bytes plus a sidecar JSON
 * {"length_bits": N, "origin": "...", "one_fraction": x}.
 * ASCII format: one '0'/'1' character per bit, no sidecar.
 */
void write_bit_file(const std::filesystem::path& path, const BitStream& stream,
                    BitFormat format = BitFormat::packed);

/// Throws IoError when the file cannot be read, FormatError when contents and sidecar disagree.
BitStream read_bit_file(const std::filesystem::path& path, BitFormat format = BitFormat::packed);

} // namespace qrng
