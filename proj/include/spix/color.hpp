#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spix/image.hpp"

namespace spix {

namespace detail {

inline double srgb_to_linear(double u) {
    return u > 0.04045 ? std::pow((u + 0.055) / 1.055, 2.4) : u / 12.92;
}

inline double lab_f(double t) {
    // CIE threshold (6/29)^3
    constexpr double eps = 216.0 / 24389.0;
    constexpr double kappa = 24389.0 / 27.0;
    return t > eps ? std::cbrt(t) : (kappa * t + 16.0) / 116.0;
}

}  // namespace detail

// One pixel sRGB (0..255) -> CIE Lab under D65. L in [0,100], a/b roughly [-128,127].
inline void rgb_to_lab_pixel(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8,
                             double& L, double& a, double& b) {
    const double r = detail::srgb_to_linear(r8 / 255.0);
    const double g = detail::srgb_to_linear(g8 / 255.0);
    const double bl = detail::srgb_to_linear(b8 / 255.0);

    // sRGB -> XYZ, D65 white point
    const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * bl;
    const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * bl;
    const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * bl;

    const double fx = detail::lab_f(x / 0.95047);
    const double fy = detail::lab_f(y / 1.00000);
    const double fz = detail::lab_f(z / 1.08883);

    L = 116.0 * fy - 16.0;
    a = 500.0 * (fx - fy);
    b = 200.0 * (fy - fz);
}

inline FloatImage rgb_to_lab(const Image& image) {
    if (image.channels != 3)
        throw std::invalid_argument("rgb_to_lab: image must have 3 channels");
    FloatImage out(image.width, image.height, 3);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            double L, a, b;
            rgb_to_lab_pixel(image.at(x, y, 0), image.at(x, y, 1), image.at(x, y, 2), L, a, b);
            out.at(x, y, 0) = L;
            out.at(x, y, 1) = a;
            out.at(x, y, 2) = b;
        }
    }
    return out;
}

// luma = round(0.299 R + 0.587 G + 0.114 B), clamped to [0,255]
inline Image rgb_to_gray(const Image& image) {
    if (image.channels != 3)
        throw std::invalid_argument("rgb_to_gray: image must have 3 channels");
    Image out(image.width, image.height, 1);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const double luma = 0.299 * image.at(x, y, 0) + 0.587 * image.at(x, y, 1) +
                                0.114 * image.at(x, y, 2);
            out.at(x, y) = static_cast<std::uint8_t>(
                std::clamp<long>(std::llround(luma), 0, 255));
        }
    }
    return out;
}

}  // namespace spix
