#pragma once

#include <png.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spix/image.hpp"

namespace spix {

namespace detail {

struct PngReadBuffer {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos;
};

inline void png_mem_read(png_structp png, png_bytep out, png_size_t n) {
    auto* buf = static_cast<PngReadBuffer*>(png_get_io_ptr(png));
    if (buf->pos + n > buf->size) png_error(png, "read past end of buffer");
    std::memcpy(out, buf->data + buf->pos, n);
    buf->pos += n;
}

inline void png_mem_write(png_structp png, png_bytep in, png_size_t n) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), in, in + n);
}

inline void png_mem_flush(png_structp) {}

struct PngDecoded {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 or 3
    int bit_depth = 0; // 8 or 16
    std::vector<std::uint16_t> samples;  // channel-interleaved
};

inline PngDecoded decode_png(const std::vector<std::uint8_t>& bytes, bool want_16bit) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
        throw std::runtime_error("png: not a PNG stream");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png: read struct allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("png: info struct allocation failed");
    }

    PngDecoded out;
    std::vector<png_bytep> rows;
    std::vector<std::uint8_t> raw;
    PngReadBuffer buf{bytes.data(), bytes.size(), 0};

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("png: malformed stream");
    }

    png_set_read_fn(png, &buf, png_mem_read);
    png_read_info(png, info);

    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (!want_16bit && bit_depth == 16) png_set_strip_16(png);
#if PNG_LIBPNG_VER >= 10504
    if (want_16bit && bit_depth == 16) png_set_swap(png);  // PNG is big-endian on the wire
#endif
    png_read_update_info(png, info);

    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.bit_depth = png_get_bit_depth(png, info);
    out.channels = png_get_channels(png, info);

    const std::size_t stride = png_get_rowbytes(png, info);
    raw.resize(stride * out.height);
    rows.resize(out.height);
    for (int y = 0; y < out.height; ++y) rows[y] = raw.data() + y * stride;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    const std::size_t n = static_cast<std::size_t>(out.width) * out.height * out.channels;
    out.samples.resize(n);
    if (out.bit_depth == 16) {
        // png_set_swap gave us little-endian 16-bit samples
        const auto* p = reinterpret_cast<const std::uint16_t*>(raw.data());
        std::copy(p, p + n, out.samples.begin());
    } else {
        std::copy(raw.begin(), raw.begin() + n, out.samples.begin());
    }
    return out;
}

inline std::vector<std::uint8_t> encode_png(const void* samples, int width, int height,
                                            int channels, int bit_depth) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png: write struct allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("png: info struct allocation failed");
    }

    std::vector<std::uint8_t> out;
    std::vector<png_bytep> rows(height);

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("png: encode failed");
    }

    png_set_write_fn(png, &out, png_mem_write, png_mem_flush);
    const int color_type = channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    if (bit_depth == 16) png_set_swap(png);

    const std::size_t stride = static_cast<std::size_t>(width) * channels * (bit_depth / 8);
    auto* base = static_cast<std::uint8_t*>(const_cast<void*>(samples));
    for (int y = 0; y < height; ++y) rows[y] = base + y * stride;
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

}  // namespace detail

// 8-bit PNG (gray or RGB; palette expanded, alpha stripped) -> Image
inline Image decode_image_png(const std::vector<std::uint8_t>& bytes) {
    auto dec = detail::decode_png(bytes, /*want_16bit=*/false);
    if (dec.channels != 1 && dec.channels != 3)
        throw std::runtime_error("png: expected gray or RGB image");
    std::vector<std::uint8_t> data(dec.samples.begin(), dec.samples.end());
    return Image(dec.width, dec.height, dec.channels, std::move(data));
}

inline std::vector<std::uint8_t> encode_image_png(const Image& image) {
    return detail::encode_png(image.data.data(), image.width, image.height, image.channels, 8);
}

// grayscale PNG (8- or 16-bit) -> LabelMap with exact integer labels
inline LabelMap decode_label_png(const std::vector<std::uint8_t>& bytes) {
    auto dec = detail::decode_png(bytes, /*want_16bit=*/true);
    if (dec.channels != 1)
        throw std::runtime_error("png: label map must be single-channel grayscale");
    std::vector<std::uint32_t> labels(dec.samples.begin(), dec.samples.end());
    return LabelMap(dec.width, dec.height, std::move(labels));
}

// LabelMap -> 16-bit grayscale PNG; labels must fit 16 bits
inline std::vector<std::uint8_t> encode_label_png16(const LabelMap& map) {
    std::vector<std::uint16_t> samples(map.labels.size());
    for (std::size_t i = 0; i < map.labels.size(); ++i) {
        if (map.labels[i] > 65535)
            throw std::runtime_error("png: label exceeds 16-bit range");
        samples[i] = static_cast<std::uint16_t>(map.labels[i]);
    }
    return detail::encode_png(samples.data(), map.width, map.height, 1, 16);
}

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

// Write via temp-then-rename so a failed run leaves no partial file behind.
inline void write_file_atomic(const std::filesystem::path& path,
                              const void* data, std::size_t size) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline void write_file_atomic(const std::filesystem::path& path,
                              const std::vector<std::uint8_t>& bytes) {
    write_file_atomic(path, bytes.data(), bytes.size());
}

inline void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
    write_file_atomic(path, text.data(), text.size());
}

}  // namespace spix
