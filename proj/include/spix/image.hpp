#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spix {

// 8-bit raster, row-major, channel-interleaved. channels is 1 (gray) or 3 (RGB).
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> data;

    Image() = default;
    Image(int w, int h, int c, std::uint8_t fill = 0)
        : width(w), height(h), channels(c),
          data(static_cast<std::size_t>(w) * h * c, fill) {
        validate();
    }
    Image(int w, int h, int c, std::vector<std::uint8_t> d)
        : width(w), height(h), channels(c), data(std::move(d)) {
        validate();
        if (data.size() != static_cast<std::size_t>(width) * height * channels)
            throw std::invalid_argument("Image: data length != width*height*channels");
    }

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    std::uint8_t at(int x, int y, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t& at(int x, int y, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

private:
    void validate() const {
        if (width < 1 || height < 1)
            throw std::invalid_argument("Image: width and height must be >= 1");
        if (channels != 1 && channels != 3)
            throw std::invalid_argument("Image: channels must be 1 or 3");
    }
};

// Floating point raster with the same layout, used for color-converted views.
struct FloatImage {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<double> data;

    FloatImage() = default;
    FloatImage(int w, int h, int c)
        : width(w), height(h), channels(c),
          data(static_cast<std::size_t>(w) * h * c, 0.0) {}

    double at(int x, int y, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    double& at(int x, int y, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
};

// H x W grid of non-negative superpixel/segment labels. Values need not be
// contiguous; canonicalize() renumbers them 0..K-1 in raster order of first
// appearance and returns K.
struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint32_t> labels;

    LabelMap() = default;
    LabelMap(int w, int h, std::uint32_t fill = 0)
        : width(w), height(h), labels(static_cast<std::size_t>(w) * h, fill) {
        validate();
    }
    LabelMap(int w, int h, std::vector<std::uint32_t> l)
        : width(w), height(h), labels(std::move(l)) {
        validate();
        if (labels.size() != static_cast<std::size_t>(width) * height)
            throw std::invalid_argument("LabelMap: labels length != width*height");
    }

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    std::uint32_t at(int x, int y) const {
        return labels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint32_t& at(int x, int y) {
        return labels[static_cast<std::size_t>(y) * width + x];
    }

    bool same_dimensions(const LabelMap& other) const {
        return width == other.width && height == other.height;
    }

    std::uint32_t canonicalize();

private:
    void validate() const {
        if (width < 1 || height < 1)
            throw std::invalid_argument("LabelMap: width and height must be >= 1");
    }
};

inline std::uint32_t LabelMap::canonicalize() {
    std::vector<std::uint32_t> remap;
    std::uint32_t next = 0;
    // dense remap table sized on demand; labels are usually small integers
    for (auto& l : labels) {
        if (l >= remap.size()) remap.resize(l + 1, UINT32_MAX);
        if (remap[l] == UINT32_MAX) remap[l] = next++;
        l = remap[l];
    }
    return next;
}

// Number of distinct labels present.
inline std::uint32_t count_labels(const LabelMap& map) {
    LabelMap copy = map;
    return copy.canonicalize();
}

// One image plus at least one ground-truth partition of it.
struct DatasetEntry {
    std::string id;
    Image image;
    std::vector<LabelMap> ground_truths;

    void check() const {
        if (ground_truths.empty())
            throw std::invalid_argument("DatasetEntry: needs at least one ground truth");
        for (const auto& gt : ground_truths)
            if (gt.width != image.width || gt.height != image.height)
                throw std::invalid_argument("DatasetEntry: ground truth dimensions mismatch");
    }
};

// Parameters of the synthetic dataset generator.
struct SyntheticSpec {
    int width = 160;
    int height = 120;
    int num_segments = 20;
    double color_contrast = 100.0;  // minimum per-channel separation of adjacent segments
    double noise_sigma = 5.0;
    std::uint64_t seed = 1;
};

}  // namespace spix
