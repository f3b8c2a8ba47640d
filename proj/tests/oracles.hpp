// Independent brute-force references for the evaluation metrics, plus random
// image/label-map generators. Everything here recomputes from first
// principles (no shared helpers with the library implementation) so the
// equivalence tests actually cross-check two code paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <vector>

#include "spix/image.hpp"
#include "spix/rng.hpp"

namespace oracle {

inline bool is_boundary(const spix::LabelMap& m, int x, int y) {
    const auto l = m.at(x, y);
    if (x > 0 && m.at(x - 1, y) != l) return true;
    if (x + 1 < m.width && m.at(x + 1, y) != l) return true;
    if (y > 0 && m.at(x, y - 1) != l) return true;
    if (y + 1 < m.height && m.at(x, y + 1) != l) return true;
    return false;
}

inline double boundary_recall(const spix::LabelMap& gt, const spix::LabelMap& sp, int r) {
    long tp = 0, total = 0;
    for (int y = 0; y < gt.height; ++y)
        for (int x = 0; x < gt.width; ++x) {
            if (!is_boundary(gt, x, y)) continue;
            ++total;
            bool hit = false;
            for (int dy = -r; dy <= r && !hit; ++dy)
                for (int dx = -r; dx <= r && !hit; ++dx) {
                    const int xx = x + dx, yy = y + dy;
                    if (xx < 0 || xx >= sp.width || yy < 0 || yy >= sp.height) continue;
                    if (is_boundary(sp, xx, yy)) hit = true;
                }
            if (hit) ++tp;
        }
    if (total == 0) return 1.0;
    return double(tp) / double(total);
}

// pixel index sets per label value
inline std::map<std::uint32_t, std::vector<std::size_t>> segments(const spix::LabelMap& m) {
    std::map<std::uint32_t, std::vector<std::size_t>> segs;
    for (std::size_t i = 0; i < m.labels.size(); ++i) segs[m.labels[i]].push_back(i);
    return segs;
}

inline std::size_t intersection_size(const std::vector<std::size_t>& a,
                                     const std::vector<std::size_t>& b) {
    std::size_t n = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else {
            ++n;
            ++ia;
            ++ib;
        }
    }
    return n;
}

inline double undersegmentation_np(const spix::LabelMap& gt, const spix::LabelMap& sp) {
    const auto g = segments(gt);
    const auto s = segments(sp);
    double sum = 0;
    for (const auto& [gl, gpix] : g)
        for (const auto& [sl, spix_] : s) {
            const std::size_t inter = intersection_size(gpix, spix_);
            if (inter == 0) continue;
            sum += std::min(inter, spix_.size() - inter);
        }
    return sum / double(gt.labels.size());
}

inline double undersegmentation_levin(const spix::LabelMap& gt, const spix::LabelMap& sp) {
    const auto g = segments(gt);
    const auto s = segments(sp);
    double sum = 0;
    for (const auto& [gl, gpix] : g) {
        double cover = 0;
        for (const auto& [sl, spix_] : s)
            if (intersection_size(gpix, spix_) > 0) cover += double(spix_.size());
        sum += (cover - double(gpix.size())) / double(gpix.size());
    }
    return sum / double(g.size());
}

inline double asa(const spix::LabelMap& gt, const spix::LabelMap& sp) {
    const auto g = segments(gt);
    const auto s = segments(sp);
    double sum = 0;
    for (const auto& [sl, spix_] : s) {
        std::size_t best = 0;
        for (const auto& [gl, gpix] : g)
            best = std::max(best, intersection_size(gpix, spix_));
        sum += double(best);
    }
    return sum / double(gt.labels.size());
}

inline double undersegmentation_bergh(const spix::LabelMap& gt, const spix::LabelMap& sp) {
    const auto g = segments(gt);
    const auto s = segments(sp);
    double sum = 0;
    for (const auto& [sl, spix_] : s) {
        std::size_t best = 0;
        for (const auto& [gl, gpix] : g)
            best = std::max(best, intersection_size(gpix, spix_));
        sum += double(spix_.size() - best);
    }
    return sum / double(gt.labels.size());
}

inline double explained_variation(const spix::Image& img, const spix::LabelMap& sp) {
    const int c = img.channels;
    const std::size_t n = img.pixel_count();
    std::vector<double> mean(c, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (int ch = 0; ch < c; ++ch) mean[ch] += img.data[i * c + ch];
    for (int ch = 0; ch < c; ++ch) mean[ch] /= double(n);

    double denom = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (int ch = 0; ch < c; ++ch) {
            const double d = img.data[i * c + ch] - mean[ch];
            denom += d * d;
        }
    if (denom == 0) return 1.0;

    double numer = 0;
    for (const auto& [sl, pixels] : segments(sp)) {
        for (int ch = 0; ch < c; ++ch) {
            double m = 0;
            for (auto p : pixels) m += img.data[p * c + ch];
            m /= double(pixels.size());
            numer += double(pixels.size()) * (m - mean[ch]) * (m - mean[ch]);
        }
    }
    return numer / denom;
}

inline double intra_cluster_variation(const spix::Image& img, const spix::LabelMap& sp) {
    const int c = img.channels;
    const auto segs = segments(sp);
    double sum = 0;
    for (const auto& [sl, pixels] : segs) {
        std::vector<double> m(c, 0);
        for (auto p : pixels)
            for (int ch = 0; ch < c; ++ch) m[ch] += img.data[p * c + ch];
        for (int ch = 0; ch < c; ++ch) m[ch] /= double(pixels.size());
        double var = 0;
        for (auto p : pixels)
            for (int ch = 0; ch < c; ++ch) {
                const double d = img.data[p * c + ch] - m[ch];
                var += d * d;
            }
        sum += std::sqrt(var) / double(pixels.size());
    }
    return sum / double(segs.size());
}

inline double compactness(const spix::LabelMap& sp) {
    const auto segs = segments(sp);
    const int w = sp.width, h = sp.height;
    double sum = 0;
    for (const auto& [sl, pixels] : segs) {
        double perimeter = 0;
        for (auto p : pixels) {
            const int x = int(p % w), y = int(p / w);
            if (x == 0 || sp.at(x - 1, y) != sl) perimeter += 1;
            if (x + 1 >= w || sp.at(x + 1, y) != sl) perimeter += 1;
            if (y == 0 || sp.at(x, y - 1) != sl) perimeter += 1;
            if (y + 1 >= h || sp.at(x, y + 1) != sl) perimeter += 1;
        }
        const double q = 4.0 * std::numbers::pi * double(pixels.size()) / (perimeter * perimeter);
        sum += double(pixels.size()) * std::min(1.0, q);
    }
    return sum / double(sp.labels.size());
}

inline double mean_distance_to_edge(const spix::LabelMap& gt, const spix::LabelMap& sp) {
    std::vector<std::pair<int, int>> sp_boundary;
    for (int y = 0; y < sp.height; ++y)
        for (int x = 0; x < sp.width; ++x)
            if (is_boundary(sp, x, y)) sp_boundary.emplace_back(x, y);

    const double diag = std::sqrt(double(gt.width) * gt.width + double(gt.height) * gt.height);
    double sum = 0;
    for (int y = 0; y < gt.height; ++y)
        for (int x = 0; x < gt.width; ++x) {
            if (!is_boundary(gt, x, y)) continue;
            if (sp_boundary.empty()) {
                sum += diag;
                continue;
            }
            double best = std::numeric_limits<double>::max();
            for (const auto& [bx, by] : sp_boundary) {
                const double d = double(x - bx) * (x - bx) + double(y - by) * (y - by);
                best = std::min(best, d);
            }
            sum += std::sqrt(best);
        }
    return sum / double(gt.labels.size());
}

// Independent 4-connectivity check by flood fill from each label's first pixel.
inline bool all_labels_connected(const spix::LabelMap& m) {
    std::map<std::uint32_t, std::size_t> first;
    std::map<std::uint32_t, std::size_t> count;
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
        if (!first.count(m.labels[i])) first[m.labels[i]] = i;
        count[m.labels[i]]++;
    }
    for (const auto& [label, start] : first) {
        std::set<std::size_t> seen{start};
        std::vector<std::size_t> stack{start};
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            const int x = int(p % m.width), y = int(p / m.width);
            const int nx[4] = {x - 1, x + 1, x, x};
            const int ny[4] = {y, y, y - 1, y + 1};
            for (int k = 0; k < 4; ++k) {
                if (nx[k] < 0 || nx[k] >= m.width || ny[k] < 0 || ny[k] >= m.height) continue;
                const std::size_t q = std::size_t(ny[k]) * m.width + nx[k];
                if (m.labels[q] == label && !seen.count(q)) {
                    seen.insert(q);
                    stack.push_back(q);
                }
            }
        }
        if (seen.size() != count[label]) return false;
    }
    return true;
}

// True iff pixel-pair co-membership is identical ("same partition").
inline bool same_partition(const spix::LabelMap& a, const spix::LabelMap& b) {
    if (a.width != b.width || a.height != b.height) return false;
    std::map<std::uint32_t, std::uint32_t> fwd, bwd;
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
        auto [fit, fnew] = fwd.try_emplace(a.labels[i], b.labels[i]);
        if (!fnew && fit->second != b.labels[i]) return false;
        auto [bit, bnew] = bwd.try_emplace(b.labels[i], a.labels[i]);
        if (!bnew && bit->second != a.labels[i]) return false;
    }
    return true;
}

// Random label map with contiguous labels and roughly `blobs` seeds grown by
// random BFS, so maps look segmentation-like rather than i.i.d. noise.
inline spix::LabelMap random_label_map(spix::Rng& rng, int w, int h, int blobs) {
    spix::LabelMap m(w, h, 0);
    std::vector<std::size_t> frontier;
    std::vector<bool> assigned(m.pixel_count(), false);
    for (int b = 0; b < blobs; ++b) {
        const std::size_t p = rng.next_below(m.pixel_count());
        if (assigned[p]) continue;
        m.labels[p] = std::uint32_t(b);
        assigned[p] = true;
        frontier.push_back(p);
    }
    while (!frontier.empty()) {
        const std::size_t idx = rng.next_below(frontier.size());
        const std::size_t p = frontier[idx];
        const int x = int(p % w), y = int(p / w);
        const int nx[4] = {x - 1, x + 1, x, x};
        const int ny[4] = {y, y, y - 1, y + 1};
        bool grew = false;
        for (int k = 0; k < 4; ++k) {
            if (nx[k] < 0 || nx[k] >= w || ny[k] < 0 || ny[k] >= h) continue;
            const std::size_t q = std::size_t(ny[k]) * w + nx[k];
            if (!assigned[q]) {
                m.labels[q] = m.labels[p];
                assigned[q] = true;
                frontier.push_back(q);
                grew = true;
                break;
            }
        }
        if (!grew) {
            frontier[idx] = frontier.back();
            frontier.pop_back();
        }
    }
    spix::LabelMap canon = m;
    canon.canonicalize();
    return canon;
}

inline spix::Image random_image(spix::Rng& rng, int w, int h, int channels) {
    spix::Image img(w, h, channels);
    for (auto& v : img.data) v = std::uint8_t(rng.next_below(256));
    return img;
}

}  // namespace oracle
