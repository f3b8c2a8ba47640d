#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spix/image.hpp"
#include "spix/png_io.hpp"

namespace spix {

enum class LabelFormat { png16, csv };

inline LabelFormat label_format_from_extension(const std::string& ext) {
    if (ext == ".png") return LabelFormat::png16;
    if (ext == ".csv") return LabelFormat::csv;
    throw std::runtime_error("unknown label map extension: " + ext);
}

// CSV form: one text line per pixel row, comma-separated non-negative integers.
// The encoder emits the canonical form (no spaces, '\n' endings, trailing
// newline); decoding then encoding a canonical payload reproduces its bytes,
// and the LabelMap round-trip is lossless for both formats.
inline std::string encode_label_csv(const LabelMap& map) {
    std::string out;
    out.reserve(map.labels.size() * 3);
    char buf[16];
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            auto [p, ec] = std::to_chars(buf, buf + sizeof buf, map.at(x, y));
            out.append(buf, p);
            out.push_back(x + 1 == map.width ? '\n' : ',');
        }
    }
    return out;
}

inline LabelMap decode_label_csv(std::string_view text) {
    std::vector<std::uint32_t> labels;
    int width = -1;
    int height = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        if (line.empty() && pos >= text.size()) break;  // trailing newline

        int cols = 0;
        std::size_t cell = 0;
        while (cell <= line.size()) {
            std::size_t comma = line.find(',', cell);
            std::string_view tok = line.substr(cell, comma == std::string_view::npos
                                                         ? std::string_view::npos
                                                         : comma - cell);
            if (!tok.empty() && tok.front() == '-')
                throw std::runtime_error("csv label map: negative label");
            std::uint64_t value = 0;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
            if (ec != std::errc() || p != tok.data() + tok.size())
                throw std::runtime_error("csv label map: malformed integer '" + std::string(tok) + "'");
            if (value > UINT32_MAX)
                throw std::runtime_error("csv label map: label out of range");
            labels.push_back(static_cast<std::uint32_t>(value));
            ++cols;
            if (comma == std::string_view::npos) break;
            cell = comma + 1;
        }
        if (width < 0) width = cols;
        else if (cols != width)
            throw std::runtime_error("csv label map: ragged rows");
        ++height;
    }
    if (width <= 0 || height <= 0)
        throw std::runtime_error("csv label map: empty payload");
    return LabelMap(width, height, std::move(labels));
}

inline LabelMap decode_label_map(const std::vector<std::uint8_t>& bytes, LabelFormat format) {
    if (format == LabelFormat::png16) return decode_label_png(bytes);
    return decode_label_csv(
        std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

inline std::vector<std::uint8_t> encode_label_map(const LabelMap& map, LabelFormat format) {
    if (format == LabelFormat::png16) return encode_label_png16(map);
    std::string text = encode_label_csv(map);
    return std::vector<std::uint8_t>(text.begin(), text.end());
}

}  // namespace spix
