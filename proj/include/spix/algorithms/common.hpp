#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "spix/color.hpp"
#include "spix/image.hpp"

namespace spix {

enum class ColorSpace { rgb, lab, gray };

inline ColorSpace color_space_from_string(const std::string& s) {
    if (s == "rgb") return ColorSpace::rgb;
    if (s == "lab") return ColorSpace::lab;
    if (s == "gray") return ColorSpace::gray;
    throw std::invalid_argument("unknown color space: " + s);
}

inline const char* to_string(ColorSpace cs) {
    switch (cs) {
        case ColorSpace::rgb: return "rgb";
        case ColorSpace::lab: return "lab";
        default: return "gray";
    }
}

struct AlgorithmParams {
    int k_desired = 400;
    double compactness = 10.0;  // m for clustering, lambda for watershed
    int iterations = 10;        // clustering only
    ColorSpace color_space = ColorSpace::lab;
    std::map<std::string, double> extra;  // e.g. fh_k, fh_sigma, fh_min_size

    double extra_or(const std::string& key, double fallback) const {
        auto it = extra.find(key);
        return it == extra.end() ? fallback : it->second;
    }

    void check() const {
        if (k_desired < 1) throw std::invalid_argument("params: k_desired must be >= 1");
        if (iterations < 1) throw std::invalid_argument("params: iterations must be >= 1");
        if (compactness < 0) throw std::invalid_argument("params: compactness must be >= 0");
    }
};

struct SegmentationResult {
    LabelMap labels;                 // post connectivity enforcement
    std::uint32_t k_generated = 0;   // distinct labels after enforcement
    std::uint32_t k_raw = 0;         // distinct labels before enforcement
    std::int64_t runtime_ns = 0;     // raw algorithm incl. color conversion
};

namespace detail {

// Feature raster in the requested working color space, one pixel per row of
// `channels` doubles. Gray requests on gray input pass through unchanged.
inline FloatImage feature_raster(const Image& image, ColorSpace cs) {
    FloatImage out;
    if (cs == ColorSpace::lab) {
        if (image.channels != 3)
            throw std::invalid_argument("lab color space needs a 3-channel image");
        return rgb_to_lab(image);
    }
    if (cs == ColorSpace::gray) {
        const Image gray = image.channels == 1 ? image : rgb_to_gray(image);
        out = FloatImage(gray.width, gray.height, 1);
        for (std::size_t i = 0; i < gray.data.size(); ++i) out.data[i] = gray.data[i];
        return out;
    }
    out = FloatImage(image.width, image.height, image.channels);
    for (std::size_t i = 0; i < image.data.size(); ++i) out.data[i] = image.data[i];
    return out;
}

using Clock = std::chrono::steady_clock;

}  // namespace detail

struct SeedPoint {
    int x = 0;
    int y = 0;
};

namespace detail {

struct GridDims {
    int kx = 1, ky = 1;
};

// kx/ky tracks the aspect ratio, kx*ky >= k_desired with the row count fixed
// first (half-up), then the minimal column count.
inline GridDims grid_dims(int width, int height, int k_desired) {
    GridDims g;
    g.ky = static_cast<int>(std::floor(
        std::sqrt(static_cast<double>(k_desired) * height / width) + 0.5));
    g.ky = std::clamp(g.ky, 1, std::min(height, k_desired));
    g.kx = (k_desired + g.ky - 1) / g.ky;
    if (g.kx > width) {
        g.kx = width;
        g.ky = std::min(height, (k_desired + g.kx - 1) / g.kx);
    }
    return g;
}

inline int grid_cell_lo(int i, int extent, int cells) {
    return static_cast<int>(static_cast<long long>(i) * extent / cells);
}

}  // namespace detail

// Deterministic grid initialization: seeds at the integer centers of the
// grid_dims cells, listed row-major.
inline std::vector<SeedPoint> grid_seeds(int width, int height, int k_desired) {
    if (k_desired < 1 || static_cast<long long>(k_desired) >
                             static_cast<long long>(width) * height)
        throw std::invalid_argument("grid_seeds: impossible superpixel count");

    const auto dims = detail::grid_dims(width, height, k_desired);
    std::vector<SeedPoint> seeds;
    seeds.reserve(static_cast<std::size_t>(dims.kx) * dims.ky);
    for (int j = 0; j < dims.ky; ++j) {
        const int y = (detail::grid_cell_lo(j, height, dims.ky) +
                       detail::grid_cell_lo(j + 1, height, dims.ky)) / 2;
        for (int i = 0; i < dims.kx; ++i) {
            const int x = (detail::grid_cell_lo(i, width, dims.kx) +
                           detail::grid_cell_lo(i + 1, width, dims.kx)) / 2;
            seeds.push_back({x, y});
        }
    }
    return seeds;
}

}  // namespace spix
