#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace spix {

namespace detail {

// Large finite "no source" value; keeps the envelope intersection math free
// of inf-inf NaNs while still dominating any real squared distance.
inline constexpr double kEdtFar = 1e20;

// 1-D squared distance transform (Felzenszwalb & Huttenlocher lower envelope).
inline void edt_1d(const std::vector<double>& f, std::vector<double>& d, int n,
                   std::vector<int>& v, std::vector<double>& z) {
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
        while (s <= z[k]) {
            --k;
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace detail

// Exact squared Euclidean distance to the nearest true pixel. Pixels with no
// source anywhere in the mask come back >= detail::kEdtFar.
inline std::vector<double> squared_distance_transform(const std::vector<bool>& mask,
                                                      int width, int height) {
    std::vector<double> dist(static_cast<std::size_t>(width) * height);
    for (std::size_t i = 0; i < dist.size(); ++i) dist[i] = mask[i] ? 0.0 : detail::kEdtFar;

    const int n = std::max(width, height);
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);

    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) f[x] = dist[static_cast<std::size_t>(y) * width + x];
        detail::edt_1d(f, d, width, v, z);
        for (int x = 0; x < width; ++x) dist[static_cast<std::size_t>(y) * width + x] = d[x];
    }
    for (int x = 0; x < width; ++x) {
        for (int y = 0; y < height; ++y) f[y] = dist[static_cast<std::size_t>(y) * width + x];
        detail::edt_1d(f, d, height, v, z);
        for (int y = 0; y < height; ++y) dist[static_cast<std::size_t>(y) * width + x] = d[y];
    }
    return dist;
}

}  // namespace spix
