#pragma once

#include <cmath>
#include <cstdint>
#include <queue>
#include <set>
#include <vector>

#include "spix/algorithms/common.hpp"
#include "spix/connectivity.hpp"

namespace spix {

namespace detail {

// max channel difference over existing 4-neighbors
inline std::vector<double> gradient_magnitude(const FloatImage& f) {
    std::vector<double> grad(static_cast<std::size_t>(f.width) * f.height, 0.0);
    for (int y = 0; y < f.height; ++y)
        for (int x = 0; x < f.width; ++x) {
            double g = 0;
            const int nx[4] = {x - 1, x + 1, x, x};
            const int ny[4] = {y, y, y - 1, y + 1};
            for (int k = 0; k < 4; ++k) {
                if (nx[k] < 0 || nx[k] >= f.width || ny[k] < 0 || ny[k] >= f.height) continue;
                for (int c = 0; c < f.channels; ++c)
                    g = std::max(g, std::abs(f.at(x, y, c) - f.at(nx[k], ny[k], c)));
            }
            grad[static_cast<std::size_t>(y) * f.width + x] = g;
        }
    return grad;
}

}  // namespace detail

// Marker-controlled priority flood on the gradient image. Priority is
// gradient + compactness * distance to the claiming region's marker, with
// FIFO tie-breaking; compactness 0 gives the classic watershed, > 0 the
// compact variant. Every flood keeps its marker, so k_generated equals the
// marker count and the regions are 4-connected by construction.
inline SegmentationResult watershed_segment(const Image& image, const AlgorithmParams& params) {
    params.check();
    const int w = image.width, h = image.height;
    const std::size_t n = image.pixel_count();
    const double lambda = params.compactness;

    const auto t0 = detail::Clock::now();
    const FloatImage feat = detail::feature_raster(image, params.color_space);
    const auto grad = detail::gradient_magnitude(feat);
    auto markers = grid_seeds(w, h, params.k_desired);

    // standardized initialization, as for the clustering seeds: move each
    // marker to the strictly lowest-gradient pixel of its 3x3 patch. Marker
    // pixels stay pairwise distinct: a move is skipped if the target is
    // claimed or is another marker's home cell center.
    {
        std::set<std::pair<int, int>> homes, taken;
        for (const auto& m : markers) homes.insert({m.x, m.y});
        for (auto& m : markers) {
            int bx = m.x, by = m.y;
            double best = grad[static_cast<std::size_t>(m.y) * w + m.x];
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int px = m.x + dx, py = m.y + dy;
                    if (px < 0 || px >= w || py < 0 || py >= h) continue;
                    if ((px != m.x || py != m.y) &&
                        (homes.count({px, py}) || taken.count({px, py})))
                        continue;
                    const double g = grad[static_cast<std::size_t>(py) * w + px];
                    if (g < best) {
                        best = g;
                        bx = px;
                        by = py;
                    }
                }
            m.x = bx;
            m.y = by;
            taken.insert({bx, by});
        }
    }

    struct QItem {
        double priority;
        std::uint64_t order;
        std::uint32_t pixel;
        std::uint32_t label;
    };
    struct Later {
        bool operator()(const QItem& a, const QItem& b) const {
            if (a.priority != b.priority) return a.priority > b.priority;
            return a.order > b.order;
        }
    };
    std::priority_queue<QItem, std::vector<QItem>, Later> queue;
    std::vector<std::uint32_t> labels(n, UINT32_MAX);
    std::uint64_t order = 0;

    auto push_neighbors = [&](int x, int y, std::uint32_t label) {
        const int nx[4] = {x - 1, x + 1, x, x};
        const int ny[4] = {y, y, y - 1, y + 1};
        for (int k = 0; k < 4; ++k) {
            if (nx[k] < 0 || nx[k] >= w || ny[k] < 0 || ny[k] >= h) continue;
            const std::size_t q = static_cast<std::size_t>(ny[k]) * w + nx[k];
            if (labels[q] != UINT32_MAX) continue;
            const double dx = nx[k] - markers[label].x;
            const double dy = ny[k] - markers[label].y;
            queue.push({grad[q] + lambda * std::sqrt(dx * dx + dy * dy), order++,
                        static_cast<std::uint32_t>(q), label});
        }
    };

    for (std::uint32_t m = 0; m < markers.size(); ++m) {
        const std::size_t p = static_cast<std::size_t>(markers[m].y) * w + markers[m].x;
        labels[p] = m;
    }
    for (std::uint32_t m = 0; m < markers.size(); ++m)
        push_neighbors(markers[m].x, markers[m].y, m);

    while (!queue.empty()) {
        const QItem item = queue.top();
        queue.pop();
        if (labels[item.pixel] != UINT32_MAX) continue;
        labels[item.pixel] = item.label;
        push_neighbors(static_cast<int>(item.pixel % w), static_cast<int>(item.pixel / w),
                       item.label);
    }
    const auto t1 = detail::Clock::now();

    LabelMap raw(w, h, std::move(labels));
    SegmentationResult result;
    result.k_raw = count_labels(raw);
    result.labels = enforce_connectivity(raw, 0);
    result.k_generated = count_labels(result.labels);
    result.runtime_ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    return result;
}

}  // namespace spix
