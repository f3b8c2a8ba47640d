#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "spix/algorithms/common.hpp"
#include "spix/connectivity.hpp"

namespace spix {

// Optional per-iteration record of the k-means objective sum(D^2), appended
// after every assignment step and every center update.
struct SlicTrace {
    std::vector<double> objective;
};

namespace detail {

inline double seed_gradient(const FloatImage& f, int x, int y) {
    const int xl = std::max(x - 1, 0), xr = std::min(x + 1, f.width - 1);
    const int yu = std::max(y - 1, 0), yd = std::min(y + 1, f.height - 1);
    double g = 0;
    for (int c = 0; c < f.channels; ++c) {
        const double dx = f.at(xr, y, c) - f.at(xl, y, c);
        const double dy = f.at(x, yd, c) - f.at(x, yu, c);
        g += dx * dx + dy * dy;
    }
    return g;
}

}  // namespace detail

// k-means color-spatial clustering over a regular grid: D^2 = d_color^2 +
// (m/S)^2 d_spatial^2 with S = sqrt(W*H/K), a 2S x 2S search window around
// each center, assignment ties to the lower center index.
inline SegmentationResult slic_segment(const Image& image, const AlgorithmParams& params,
                                       SlicTrace* trace = nullptr) {
    params.check();
    const int w = image.width, h = image.height;
    const std::size_t n = image.pixel_count();

    const auto t0 = detail::Clock::now();
    const FloatImage feat = detail::feature_raster(image, params.color_space);
    const int fc = feat.channels;

    const auto dims = detail::grid_dims(w, h, params.k_desired);
    const double S = std::sqrt(static_cast<double>(w) * h / params.k_desired);
    const double inv_s2 = (params.compactness / S) * (params.compactness / S);

    struct Center {
        double x, y;
        std::vector<double> color;
    };
    std::vector<Center> centers;
    centers.reserve(static_cast<std::size_t>(dims.kx) * dims.ky);
    for (int j = 0; j < dims.ky; ++j) {
        const int y_lo = detail::grid_cell_lo(j, h, dims.ky);
        const int y_hi = detail::grid_cell_lo(j + 1, h, dims.ky);
        for (int i = 0; i < dims.kx; ++i) {
            const int x_lo = detail::grid_cell_lo(i, w, dims.kx);
            const int x_hi = detail::grid_cell_lo(i + 1, w, dims.kx);
            // sample color at the lowest-gradient pixel in the 3x3 patch
            // around the seed; the center position is the cell centroid
            int sx = (x_lo + x_hi) / 2, sy = (y_lo + y_hi) / 2;
            double best = detail::seed_gradient(feat, sx, sy);
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int px = sx + dx, py = sy + dy;
                    if (px < 0 || px >= w || py < 0 || py >= h) continue;
                    const double g = detail::seed_gradient(feat, px, py);
                    if (g < best) {
                        best = g;
                        sx = px;
                        sy = py;
                    }
                }
            Center c;
            c.x = (x_lo + x_hi - 1) / 2.0;
            c.y = (y_lo + y_hi - 1) / 2.0;
            c.color.resize(fc);
            for (int ch = 0; ch < fc; ++ch) c.color[ch] = feat.at(sx, sy, ch);
            centers.push_back(std::move(c));
        }
    }
    const std::uint32_t k = static_cast<std::uint32_t>(centers.size());

    std::vector<std::uint32_t> assignment(n, UINT32_MAX);
    std::vector<std::uint32_t> previous(n, UINT32_MAX);
    std::vector<double> dist(n);

    auto dist2 = [&](std::size_t p, const Center& c) {
        const int px = static_cast<int>(p % w), py = static_cast<int>(p / w);
        double dc = 0;
        for (int ch = 0; ch < fc; ++ch) {
            const double d = feat.data[p * fc + ch] - c.color[ch];
            dc += d * d;
        }
        const double dx = px - c.x, dy = py - c.y;
        return dc + inv_s2 * (dx * dx + dy * dy);
    };

    for (int iter = 0; iter < params.iterations; ++iter) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::max());
        previous.swap(assignment);
        std::fill(assignment.begin(), assignment.end(), UINT32_MAX);

        for (std::uint32_t ci = 0; ci < k; ++ci) {
            const Center& c = centers[ci];
            const int x0 = std::max(0, static_cast<int>(std::floor(c.x - S)));
            const int x1 = std::min(w - 1, static_cast<int>(std::ceil(c.x + S)));
            const int y0 = std::max(0, static_cast<int>(std::floor(c.y - S)));
            const int y1 = std::min(h - 1, static_cast<int>(std::ceil(c.y + S)));
            for (int y = y0; y <= y1; ++y)
                for (int x = x0; x <= x1; ++x) {
                    const std::size_t p = static_cast<std::size_t>(y) * w + x;
                    const double d = dist2(p, c);
                    if (d < dist[p]) {
                        dist[p] = d;
                        assignment[p] = ci;
                    }
                }
        }
        // a pixel keeps its previous center when no drifted window beats it
        for (std::size_t p = 0; p < n; ++p) {
            if (previous[p] == UINT32_MAX) continue;
            const double d = dist2(p, centers[previous[p]]);
            if (d < dist[p] || (d == dist[p] && previous[p] < assignment[p])) {
                dist[p] = d;
                assignment[p] = previous[p];
            }
        }
        // orphans outside every window: nearest center spatially
        for (std::size_t p = 0; p < n; ++p) {
            if (assignment[p] != UINT32_MAX) continue;
            const int px = static_cast<int>(p % w), py = static_cast<int>(p / w);
            double best = std::numeric_limits<double>::max();
            std::uint32_t best_c = 0;
            for (std::uint32_t ci = 0; ci < k; ++ci) {
                const double dx = px - centers[ci].x, dy = py - centers[ci].y;
                const double d = dx * dx + dy * dy;
                if (d < best) {
                    best = d;
                    best_c = ci;
                }
            }
            assignment[p] = best_c;
            dist[p] = dist2(p, centers[best_c]);
        }
        if (trace) {
            double obj = 0;
            for (std::size_t p = 0; p < n; ++p) obj += dist[p];
            trace->objective.push_back(obj);
        }

        // center update: mean position and color of the assigned pixels
        std::vector<double> acc(static_cast<std::size_t>(k) * (fc + 2), 0.0);
        std::vector<std::size_t> cnt(k, 0);
        for (std::size_t p = 0; p < n; ++p) {
            const std::uint32_t ci = assignment[p];
            auto* a = &acc[static_cast<std::size_t>(ci) * (fc + 2)];
            a[0] += static_cast<double>(p % w);
            a[1] += static_cast<double>(p / w);
            for (int ch = 0; ch < fc; ++ch) a[2 + ch] += feat.data[p * fc + ch];
            cnt[ci]++;
        }
        for (std::uint32_t ci = 0; ci < k; ++ci) {
            if (cnt[ci] == 0) continue;  // empty cluster keeps its center
            const auto* a = &acc[static_cast<std::size_t>(ci) * (fc + 2)];
            centers[ci].x = a[0] / static_cast<double>(cnt[ci]);
            centers[ci].y = a[1] / static_cast<double>(cnt[ci]);
            for (int ch = 0; ch < fc; ++ch)
                centers[ci].color[ch] = a[2 + ch] / static_cast<double>(cnt[ci]);
        }
        if (trace) {
            double obj = 0;
            for (std::size_t p = 0; p < n; ++p) obj += dist2(p, centers[assignment[p]]);
            trace->objective.push_back(obj);
        }
    }
    const auto t1 = detail::Clock::now();

    LabelMap raw(w, h);
    for (std::size_t p = 0; p < n; ++p) raw.labels[p] = assignment[p];

    SegmentationResult result;
    result.k_raw = count_labels(raw);
    const std::size_t min_size = n / static_cast<std::size_t>(params.k_desired) / 4;
    result.labels = enforce_connectivity(raw, min_size);
    result.k_generated = count_labels(result.labels);
    result.runtime_ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    return result;
}

}  // namespace spix
