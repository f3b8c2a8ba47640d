#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "spix/algorithms/common.hpp"
#include "spix/connectivity.hpp"
#include "spix/filter.hpp"

namespace spix {

namespace detail {

struct DisjointSet {
    std::vector<std::uint32_t> parent;
    std::vector<std::uint32_t> rank;
    std::vector<std::size_t> size;

    explicit DisjointSet(std::size_t n) : parent(n), rank(n, 0), size(n, 1) {
        std::iota(parent.begin(), parent.end(), 0u);
    }
    std::uint32_t find(std::uint32_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    std::uint32_t unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (rank[a] < rank[b]) std::swap(a, b);
        if (rank[a] == rank[b]) rank[a]++;
        parent[b] = a;
        size[a] += size[b];
        return a;
    }
};

}  // namespace detail

// Graph-based segmentation on the 4-neighbor grid: edges sorted ascending by
// Euclidean color distance (ties by construction index), components merged
// while the edge weight stays below both adaptive thresholds
// Int(C) + fh_k/|C|. Undersized components are then joined across their
// cheapest edges.
inline SegmentationResult fh_segment(const Image& image, const AlgorithmParams& params) {
    params.check();
    auto it = params.extra.find("fh_k");
    if (it == params.extra.end() || it->second <= 0)
        throw std::invalid_argument("fh: extra parameter fh_k > 0 is required");
    const double fh_k = it->second;
    const double fh_sigma = params.extra_or("fh_sigma", 0.0);
    const std::size_t fh_min_size =
        static_cast<std::size_t>(std::max(0.0, params.extra_or("fh_min_size", 0.0)));

    const int w = image.width, h = image.height;
    const std::size_t n = image.pixel_count();

    const auto t0 = detail::Clock::now();
    FloatImage feat = detail::feature_raster(image, params.color_space);
    if (fh_sigma > 0) {
        const auto kernel = detail::gaussian_kernel(fh_sigma);
        for (int c = 0; c < feat.channels; ++c) {
            std::vector<double> plane(n);
            for (std::size_t i = 0; i < n; ++i) plane[i] = feat.data[i * feat.channels + c];
            plane = detail::convolve_separable(plane, w, h, kernel);
            for (std::size_t i = 0; i < n; ++i) feat.data[i * feat.channels + c] = plane[i];
        }
    }

    struct Edge {
        double weight;
        std::uint32_t index;
        std::uint32_t a, b;
    };
    std::vector<Edge> edges;
    edges.reserve(2 * n);
    auto color_dist = [&](std::size_t p, std::size_t q) {
        double d = 0;
        for (int c = 0; c < feat.channels; ++c) {
            const double diff = feat.data[p * feat.channels + c] - feat.data[q * feat.channels + c];
            d += diff * diff;
        }
        return std::sqrt(d);
    };
    std::uint32_t index = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::size_t p = static_cast<std::size_t>(y) * w + x;
            if (x + 1 < w)
                edges.push_back({color_dist(p, p + 1), index++,
                                 static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(p + 1)});
            if (y + 1 < h)
                edges.push_back({color_dist(p, p + w), index++,
                                 static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(p + w)});
        }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.weight != b.weight) return a.weight < b.weight;
        return a.index < b.index;
    });

    detail::DisjointSet forest(n);
    std::vector<double> threshold(n, fh_k);  // Int(C) + fh_k/|C| with Int({p}) = 0
    for (const Edge& e : edges) {
        const std::uint32_t a = forest.find(e.a), b = forest.find(e.b);
        if (a == b) continue;
        if (e.weight <= threshold[a] && e.weight <= threshold[b]) {
            const std::uint32_t r = forest.unite(a, b);
            threshold[r] = e.weight + fh_k / static_cast<double>(forest.size[r]);
        }
    }
    if (fh_min_size > 0) {
        for (const Edge& e : edges) {
            const std::uint32_t a = forest.find(e.a), b = forest.find(e.b);
            if (a != b && (forest.size[a] < fh_min_size || forest.size[b] < fh_min_size))
                forest.unite(a, b);
        }
    }
    const auto t1 = detail::Clock::now();

    LabelMap raw(w, h);
    for (std::size_t p = 0; p < n; ++p)
        raw.labels[p] = forest.find(static_cast<std::uint32_t>(p));

    SegmentationResult result;
    result.k_raw = count_labels(raw);
    result.labels = enforce_connectivity(raw, 0);
    result.k_generated = count_labels(result.labels);
    result.runtime_ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    return result;
}

}  // namespace spix
