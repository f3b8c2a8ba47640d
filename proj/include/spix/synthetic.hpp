#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "spix/connectivity.hpp"
#include "spix/image.hpp"
#include "spix/rng.hpp"

namespace spix {

namespace detail {

// Voronoi cells on a pixel grid are not guaranteed to be 4-connected, so the
// generator keeps the largest component of every site and folds stray
// fragments into whichever neighboring component they touch the most.
inline LabelMap connected_voronoi(int width, int height,
                                  const std::vector<std::pair<int, int>>& sites) {
    LabelMap vor(width, height, 0);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            long best = -1;
            std::uint32_t best_site = 0;
            for (std::size_t s = 0; s < sites.size(); ++s) {
                const long dx = x - sites[s].first, dy = y - sites[s].second;
                const long d = dx * dx + dy * dy;
                if (best < 0 || d < best) {  // ties keep the lowest site index
                    best = d;
                    best_site = static_cast<std::uint32_t>(s);
                }
            }
            vor.at(x, y) = best_site;
        }
    }

    auto [comps, count] = connected_components(vor);
    auto stats = component_stats(comps, vor, count);

    // anchor of each site: its largest component, lowest component id on ties
    std::vector<std::uint32_t> anchor(sites.size(), UINT32_MAX);
    for (std::uint32_t c = 0; c < count; ++c) {
        const std::uint32_t site = stats[c].original_label;
        if (anchor[site] == UINT32_MAX || stats[c].size > stats[anchor[site]].size)
            anchor[site] = c;
    }
    std::vector<bool> is_anchor(count, false);
    for (std::uint32_t a : anchor) is_anchor[a] = true;

    std::vector<std::uint32_t> merged_into(count, UINT32_MAX);
    auto resolve = [&](std::uint32_t c) {
        while (merged_into[c] != UINT32_MAX) c = merged_into[c];
        return c;
    };

    std::set<std::pair<std::size_t, std::uint32_t>> pending;
    for (std::uint32_t c = 0; c < count; ++c)
        if (!is_anchor[c]) pending.insert({stats[c].size, c});

    while (!pending.empty()) {
        const auto [size, victim] = *pending.begin();
        pending.erase(pending.begin());
        std::uint32_t target = UINT32_MAX;
        std::size_t best_contact = 0;
        for (const auto& [n, contact] : stats[victim].neighbor_contact)
            if (contact > best_contact || (contact == best_contact && n < target)) {
                best_contact = contact;
                target = n;
            }
        if (target == UINT32_MAX) continue;

        merged_into[victim] = target;
        auto& tgt = stats[target];
        if (!is_anchor[target]) pending.erase({tgt.size, target});
        tgt.size += stats[victim].size;
        for (const auto& [n, contact] : stats[victim].neighbor_contact) {
            if (n == target) continue;
            stats[n].neighbor_contact.erase(victim);
            stats[n].neighbor_contact[target] += contact;
            tgt.neighbor_contact[n] += contact;
        }
        tgt.neighbor_contact.erase(victim);
        stats[victim].neighbor_contact.clear();
        if (!is_anchor[target]) pending.insert({tgt.size, target});
    }

    LabelMap gt(width, height, 0);
    for (std::size_t i = 0; i < gt.labels.size(); ++i)
        gt.labels[i] = stats[resolve(comps.labels[i])].original_label;
    return gt;
}

inline bool contrast_ok(const std::array<std::uint8_t, 3>& a,
                        const std::array<std::uint8_t, 3>& b, double contrast) {
    for (int c = 0; c < 3; ++c)
        if (std::abs(int(a[c]) - int(b[c])) >= contrast) return true;
    return false;
}

}  // namespace detail

// Deterministic synthetic dataset entry: a 4-connected Voronoi ground truth,
// per-segment colors separated by at least color_contrast in one channel
// between 4-adjacent segments, plus Gaussian pixel noise.
inline DatasetEntry generate_synthetic_entry(const SyntheticSpec& spec) {
    if (spec.num_segments < 2)
        throw std::invalid_argument("synthetic: num_segments must be >= 2");
    if (static_cast<long long>(spec.num_segments) >
        static_cast<long long>(spec.width) * spec.height)
        throw std::invalid_argument("synthetic: more segments than pixels");

    Rng rng(spec.seed);

    // distinct random sites
    std::vector<std::pair<int, int>> sites;
    std::set<std::pair<int, int>> used;
    while (static_cast<int>(sites.size()) < spec.num_segments) {
        const int x = static_cast<int>(rng.next_below(spec.width));
        const int y = static_cast<int>(rng.next_below(spec.height));
        if (used.insert({x, y}).second) sites.emplace_back(x, y);
    }

    LabelMap gt = detail::connected_voronoi(spec.width, spec.height, sites);

    // adjacency between final segments
    std::vector<std::set<std::uint32_t>> adjacent(spec.num_segments);
    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x) {
            const std::uint32_t l = gt.at(x, y);
            if (x + 1 < spec.width && gt.at(x + 1, y) != l) {
                adjacent[l].insert(gt.at(x + 1, y));
                adjacent[gt.at(x + 1, y)].insert(l);
            }
            if (y + 1 < spec.height && gt.at(x, y + 1) != l) {
                adjacent[l].insert(gt.at(x, y + 1));
                adjacent[gt.at(x, y + 1)].insert(l);
            }
        }

    // colors: rejection sampling in segment order, deterministic palette
    // search as the fallback for tight contrast constraints
    std::vector<std::array<std::uint8_t, 3>> colors(spec.num_segments);
    std::vector<bool> colored(spec.num_segments, false);
    for (int s = 0; s < spec.num_segments; ++s) {
        auto ok = [&](const std::array<std::uint8_t, 3>& cand) {
            for (std::uint32_t n : adjacent[s])
                if (colored[n] && !detail::contrast_ok(cand, colors[n], spec.color_contrast))
                    return false;
            return true;
        };
        bool done = false;
        for (int attempt = 0; attempt < 64 && !done; ++attempt) {
            std::array<std::uint8_t, 3> cand = {
                static_cast<std::uint8_t>(rng.next_below(256)),
                static_cast<std::uint8_t>(rng.next_below(256)),
                static_cast<std::uint8_t>(rng.next_below(256))};
            if (ok(cand)) {
                colors[s] = cand;
                done = true;
            }
        }
        if (!done) {
            // best-effort: maximize the smallest neighbor separation
            double best_sep = -1;
            for (int r = 0; r <= 255; r += 17)
                for (int g = 0; g <= 255; g += 17)
                    for (int b = 0; b <= 255; b += 17) {
                        const std::array<std::uint8_t, 3> cand = {
                            static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                            static_cast<std::uint8_t>(b)};
                        double sep = 256;
                        for (std::uint32_t nb : adjacent[s]) {
                            if (!colored[nb]) continue;
                            int diff = 0;
                            for (int c = 0; c < 3; ++c)
                                diff = std::max(diff,
                                                std::abs(int(cand[c]) - int(colors[nb][c])));
                            sep = std::min(sep, static_cast<double>(diff));
                        }
                        if (sep > best_sep) {
                            best_sep = sep;
                            colors[s] = cand;
                        }
                    }
        }
        colored[s] = true;
    }

    Image image(spec.width, spec.height, 3);
    for (std::size_t i = 0; i < gt.labels.size(); ++i) {
        const auto& col = colors[gt.labels[i]];
        for (int c = 0; c < 3; ++c) {
            double v = col[c];
            if (spec.noise_sigma > 0) v += spec.noise_sigma * rng.next_gaussian();
            image.data[i * 3 + c] =
                static_cast<std::uint8_t>(std::clamp<long>(std::llround(v), 0, 255));
        }
    }

    DatasetEntry entry;
    entry.id = "synth-" + std::to_string(spec.seed);
    entry.image = std::move(image);
    entry.ground_truths.push_back(std::move(gt));
    return entry;
}

}  // namespace spix
