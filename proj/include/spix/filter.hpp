#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "spix/image.hpp"

namespace spix {
namespace detail {

// Horizontal then vertical pass with edge replication; kernel must sum to 1.
inline std::vector<double> convolve_separable(const std::vector<double>& plane, int w, int h,
                                              const std::vector<double>& kernel) {
    const int radius = static_cast<int>(kernel.size()) / 2;
    std::vector<double> tmp(plane.size()), out(plane.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0;
            for (int k = -radius; k <= radius; ++k) {
                const int xx = std::clamp(x + k, 0, w - 1);
                acc += kernel[k + radius] * plane[static_cast<std::size_t>(y) * w + xx];
            }
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0;
            for (int k = -radius; k <= radius; ++k) {
                const int yy = std::clamp(y + k, 0, h - 1);
                acc += kernel[k + radius] * tmp[static_cast<std::size_t>(yy) * w + x];
            }
            out[static_cast<std::size_t>(y) * w + x] = acc;
        }
    return out;
}

inline std::vector<double> gaussian_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0;
    for (int k = -radius; k <= radius; ++k) {
        kernel[k + radius] = std::exp(-0.5 * (k / sigma) * (k / sigma));
        sum += kernel[k + radius];
    }
    for (auto& v : kernel) v /= sum;
    return kernel;
}

inline std::vector<double> channel_plane(const Image& image, int c) {
    std::vector<double> plane(image.pixel_count());
    for (std::size_t i = 0; i < plane.size(); ++i)
        plane[i] = image.data[i * image.channels + c];
    return plane;
}

}  // namespace detail
}  // namespace spix
