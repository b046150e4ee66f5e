#include "qrng/bitio.hpp"

#include <fstream>
#include <iterator>

#include <json.hpp>

#include "qrng/errors.hpp"

namespace qrng {

namespace {

std::vector<char> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed for " + path.string());
    return data;
}

void spill(const std::filesystem::path& path, const char* data, std::size_t size) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(data, static_cast<std::streamsize>(size));
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace

BitFormat bit_format_from_string(const std::string& text) {
    if (text == "packed") return BitFormat::packed;
    if (text == "ascii") return BitFormat::ascii;
    throw DomainError("unknown bit format '" + text + "' (expected packed|ascii)");
}

std::filesystem::path meta_path_for(const std::filesystem::path& bits_path) {
    return std::filesystem::path(bits_path.string() + ".meta.json");
}

void write_bit_file(const std::filesystem::path& path, const BitStream& stream, BitFormat format) {
    if (format == BitFormat::ascii) {
        const std::string text = stream.to_string();
        spill(path, text.data(), text.size());
        return;
    }
    const auto bytes = stream.to_packed_bytes();
    spill(path, reinterpret_cast<const char*>(bytes.data()), bytes.size());

    nlohmann::ordered_json meta;
    meta["length_bits"] = stream.size();
    meta["origin"] = std::string(to_string(stream.meta().origin));
    if (stream.meta().one_fraction) {
        meta["one_fraction"] = *stream.meta().one_fraction;
    } else {
        meta["one_fraction"] = nullptr;
    }
    const std::string text = meta.dump(2) + "\n";
    spill(meta_path_for(path), text.data(), text.size());
}

BitStream read_bit_file(const std::filesystem::path& path, BitFormat format) {
    const auto data = slurp(path);
    if (format == BitFormat::ascii) {
        BitStreamBuilder builder;
        builder.reserve(data.size());
        for (char c : data) {
            if (c == '0' || c == '1') {
                builder.push_back(c == '1');
            } else if (c != '\n' && c != '\r' && c != ' ' && c != '\t') {
                throw FormatError(path.string() + ": unexpected character in ascii bit file");
            }
        }
        return std::move(builder).build(Origin::file);
    }

    const auto meta_file = meta_path_for(path);
    const auto meta_text = slurp(meta_file);
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(meta_text.begin(), meta_text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(meta_file.string() + ": " + e.what());
    }
    if (!meta.is_object() || !meta.contains("length_bits") || !meta["length_bits"].is_number_unsigned()) {
        throw FormatError(meta_file.string() + ": /length_bits must be a non-negative integer");
    }
    const auto length = meta["length_bits"].get<std::size_t>();
    if (data.size() != (length + 7) / 8) {
        throw FormatError(path.string() + ": length mismatch, metadata says " + std::to_string(length) +
                          " bits but file holds " + std::to_string(data.size()) + " bytes");
    }
    Origin origin = Origin::file;
    if (meta.contains("origin") && meta["origin"].is_string()) {
        origin = origin_from_string(meta["origin"].get<std::string>());
    }
    const auto* bytes = reinterpret_cast<const std::uint8_t*>(data.data());
    return BitStream::from_packed_bytes({bytes, data.size()}, length, origin);
}

} // namespace qrng
