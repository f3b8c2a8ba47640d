#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spix/image.hpp"

namespace spix {

// Per-component bookkeeping used by enforce_connectivity.
struct ComponentStats {
    std::uint32_t component_id = 0;
    std::size_t size = 0;
    std::uint32_t original_label = 0;
    // component id -> shared 4-adjacent border length in pixel edges
    std::map<std::uint32_t, std::size_t> neighbor_contact;
};

// Relabels each 4-connected run of equal input labels as its own component.
// Component ids are assigned in raster-scan order of each component's first
// pixel, so the output is canonical.
inline std::pair<LabelMap, std::uint32_t> connected_components(const LabelMap& map) {
    const int w = map.width, h = map.height;
    LabelMap out(w, h, 0);
    std::vector<bool> visited(map.pixel_count(), false);
    std::vector<std::size_t> stack;
    std::uint32_t next = 0;

    for (std::size_t start = 0; start < map.pixel_count(); ++start) {
        if (visited[start]) continue;
        const std::uint32_t label = map.labels[start];
        const std::uint32_t comp = next++;
        visited[start] = true;
        stack.assign(1, start);
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            out.labels[p] = comp;
            const int x = static_cast<int>(p % w);
            const int y = static_cast<int>(p / w);
            const int nx[4] = {x - 1, x + 1, x, x};
            const int ny[4] = {y, y, y - 1, y + 1};
            for (int k = 0; k < 4; ++k) {
                if (nx[k] < 0 || nx[k] >= w || ny[k] < 0 || ny[k] >= h) continue;
                const std::size_t q = static_cast<std::size_t>(ny[k]) * w + nx[k];
                if (!visited[q] && map.labels[q] == label) {
                    visited[q] = true;
                    stack.push_back(q);
                }
            }
        }
    }
    return {std::move(out), next};
}

inline std::vector<ComponentStats> component_stats(const LabelMap& components,
                                                   const LabelMap& original,
                                                   std::uint32_t count) {
    std::vector<ComponentStats> stats(count);
    for (std::uint32_t c = 0; c < count; ++c) stats[c].component_id = c;
    const int w = components.width, h = components.height;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::uint32_t c = components.at(x, y);
            stats[c].size++;
            stats[c].original_label = original.at(x, y);
            if (x + 1 < w) {
                const std::uint32_t d = components.at(x + 1, y);
                if (c != d) {
                    stats[c].neighbor_contact[d]++;
                    stats[d].neighbor_contact[c]++;
                }
            }
            if (y + 1 < h) {
                const std::uint32_t d = components.at(x, y + 1);
                if (c != d) {
                    stats[c].neighbor_contact[d]++;
                    stats[d].neighbor_contact[c]++;
                }
            }
        }
    }
    return stats;
}

// Splits every label into its 4-connected components, then repeatedly merges
// the smallest component below min_size (ties: lowest component id) into the
// 4-adjacent component it shares the longest border with (ties: lowest id).
// The result is canonicalized; every output label is 4-connected and at least
// min_size pixels unless the whole image collapses into one component.
inline LabelMap enforce_connectivity(const LabelMap& map, std::size_t min_size) {
    auto [comps, count] = connected_components(map);
    if (min_size > 0 && count > 1) {
        auto stats = component_stats(comps, map, count);

        // alive components, keyed for the smallest-first merge order
        std::set<std::pair<std::size_t, std::uint32_t>> undersized;
        std::vector<std::uint32_t> merged_into(count, UINT32_MAX);
        for (std::uint32_t c = 0; c < count; ++c)
            if (stats[c].size < min_size) undersized.insert({stats[c].size, c});

        auto resolve = [&](std::uint32_t c) {
            while (merged_into[c] != UINT32_MAX) c = merged_into[c];
            return c;
        };

        std::uint32_t alive = count;
        while (!undersized.empty() && alive > 1) {
            const auto [size, victim] = *undersized.begin();
            undersized.erase(undersized.begin());

            // pick the neighbor with the longest shared border, lowest id on ties
            std::uint32_t target = UINT32_MAX;
            std::size_t best_contact = 0;
            for (const auto& [n, contact] : stats[victim].neighbor_contact) {
                if (contact > best_contact || (contact == best_contact && n < target)) {
                    best_contact = contact;
                    target = n;
                }
            }
            if (target == UINT32_MAX) continue;  // isolated; nothing to merge into

            // fold victim into target
            merged_into[victim] = target;
            auto& tgt = stats[target];
            const bool target_was_undersized = tgt.size < min_size;
            if (target_was_undersized) undersized.erase({tgt.size, target});
            tgt.size += stats[victim].size;
            for (const auto& [n, contact] : stats[victim].neighbor_contact) {
                if (n == target) continue;
                stats[n].neighbor_contact.erase(victim);
                stats[n].neighbor_contact[target] += contact;
                tgt.neighbor_contact[n] += contact;
            }
            tgt.neighbor_contact.erase(victim);
            stats[victim].neighbor_contact.clear();
            --alive;
            if (tgt.size < min_size) undersized.insert({tgt.size, target});
        }

        for (auto& l : comps.labels) l = resolve(l);
    }
    comps.canonicalize();
    return comps;
}

}  // namespace spix
