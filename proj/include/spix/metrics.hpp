#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spix/distance.hpp"
#include "spix/image.hpp"

namespace spix {

struct MetricConfig {
    double recall_radius_factor = 0.0025;
    enum class Rounding { nearest, ceil };
    Rounding radius_rounding = Rounding::nearest;
    // perimeter definition is fixed: boundary pixel-edge count
};

// All per-image metric values for one (algorithm, K, image) evaluation.
struct MetricRecord {
    double rec = 0, ue_np = 0, ue_levin = 0, ue_bergh = 0, asa = 0;
    double ev = 0, co = 0, icv = 0, mde = 0;
    std::uint32_t k_generated = 0;
    std::optional<std::int64_t> runtime_ns;
};

struct Stat {
    double mean = 0, min = 0, max = 0, std = 0;
};

struct AggregateStats {
    Stat rec, ue_np, ue_levin, ue_bergh, asa, ev, co, icv, mde;
    double k_mean = 0, k_std = 0;
    std::uint32_t k_max = 0;
    double runtime_ms_mean = 0;
    std::size_t count = 0;
};

namespace detail {

inline void require_same_dimensions(const LabelMap& a, const LabelMap& b) {
    if (!a.same_dimensions(b))
        throw std::invalid_argument("metrics: label map dimension mismatch");
}

// Contingency table between a ground truth and a superpixel partition, built
// on canonicalized labels so tie-breaking by "lowest label" is well defined.
struct OverlapTable {
    std::uint32_t gt_count = 0, sp_count = 0;
    std::vector<std::size_t> gt_sizes, sp_sizes;
    // per superpixel: (gt label, overlap) ascending in gt label
    std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> per_sp;
};

inline OverlapTable overlap_table(const LabelMap& gt, const LabelMap& sp) {
    LabelMap g = gt, s = sp;
    OverlapTable t;
    t.gt_count = g.canonicalize();
    t.sp_count = s.canonicalize();
    t.gt_sizes.assign(t.gt_count, 0);
    t.sp_sizes.assign(t.sp_count, 0);
    t.per_sp.assign(t.sp_count, {});

    // per-sp association lists stay short (few gt segments overlap one sp)
    for (std::size_t i = 0; i < g.labels.size(); ++i) {
        const std::uint32_t gi = g.labels[i], sj = s.labels[i];
        t.gt_sizes[gi]++;
        t.sp_sizes[sj]++;
        auto& row = t.per_sp[sj];
        auto it = std::find_if(row.begin(), row.end(),
                               [gi](const auto& p) { return p.first == gi; });
        if (it == row.end()) row.emplace_back(gi, 1);
        else it->second++;
    }
    for (auto& row : t.per_sp)
        std::sort(row.begin(), row.end());
    return t;
}

}  // namespace detail

// True iff any 4-neighbor carries a different label. The image border alone
// does not make a pixel a boundary pixel.
inline std::vector<bool> boundary_mask(const LabelMap& map) {
    const int w = map.width, h = map.height;
    std::vector<bool> mask(map.pixel_count(), false);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::uint32_t l = map.at(x, y);
            const bool b = (x > 0 && map.at(x - 1, y) != l) ||
                           (x + 1 < w && map.at(x + 1, y) != l) ||
                           (y > 0 && map.at(x, y - 1) != l) ||
                           (y + 1 < h && map.at(x, y + 1) != l);
            mask[static_cast<std::size_t>(y) * w + x] = b;
        }
    }
    return mask;
}

// Boundary matching tolerance: factor times the image diagonal, rounded
// half-up (or up, if configured).
inline int recall_radius(int width, int height, const MetricConfig& config = {}) {
    const double d = config.recall_radius_factor *
                     std::sqrt(static_cast<double>(width) * width +
                               static_cast<double>(height) * height);
    if (config.radius_rounding == MetricConfig::Rounding::ceil)
        return static_cast<int>(std::ceil(d));
    return static_cast<int>(std::floor(d + 0.5));
}

namespace detail {

// Chebyshev dilation by r, separable (row max then column max).
inline std::vector<bool> dilate_chebyshev(const std::vector<bool>& mask, int w, int h, int r) {
    if (r <= 0) return mask;
    std::vector<bool> tmp(mask.size(), false), out(mask.size(), false);
    for (int y = 0; y < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            bool any = false;
            for (int dx = -r; dx <= r && !any; ++dx) {
                const int xx = x + dx;
                if (xx >= 0 && xx < w && mask[row + xx]) any = true;
            }
            tmp[row + x] = any;
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            bool any = false;
            for (int dy = -r; dy <= r && !any; ++dy) {
                const int yy = y + dy;
                if (yy >= 0 && yy < h && tmp[static_cast<std::size_t>(yy) * w + x]) any = true;
            }
            out[static_cast<std::size_t>(y) * w + x] = any;
        }
    }
    return out;
}

}  // namespace detail

// Rec = TP / (TP + FN): a ground-truth boundary pixel is a true positive if a
// superpixel boundary pixel lies in the (2r+1)x(2r+1) window around it.
inline double boundary_recall(const LabelMap& gt, const LabelMap& sp, int r) {
    detail::require_same_dimensions(gt, sp);
    const auto gt_boundary = boundary_mask(gt);
    const auto sp_near = detail::dilate_chebyshev(boundary_mask(sp), gt.width, gt.height, r);
    std::size_t tp = 0, total = 0;
    for (std::size_t i = 0; i < gt_boundary.size(); ++i) {
        if (!gt_boundary[i]) continue;
        ++total;
        if (sp_near[i]) ++tp;
    }
    if (total == 0) return 1.0;
    return static_cast<double>(tp) / static_cast<double>(total);
}

// UE = (1/N) sum_Gi sum_{Sj overlapping Gi} min(|Sj ^ Gi|, |Sj - Gi|)
inline double undersegmentation_np(const LabelMap& gt, const LabelMap& sp) {
    detail::require_same_dimensions(gt, sp);
    const auto t = detail::overlap_table(gt, sp);
    std::size_t leak = 0;
    for (std::uint32_t sj = 0; sj < t.sp_count; ++sj)
        for (const auto& [gi, overlap] : t.per_sp[sj])
            leak += std::min(overlap, t.sp_sizes[sj] - overlap);
    return static_cast<double>(leak) / static_cast<double>(gt.pixel_count());
}

// UE_Levin = (1/|G|) sum_Gi [ (sum_{Sj overlapping Gi} |Sj|) - |Gi| ] / |Gi|
inline double undersegmentation_levin(const LabelMap& gt, const LabelMap& sp) {
    detail::require_same_dimensions(gt, sp);
    const auto t = detail::overlap_table(gt, sp);
    std::vector<std::size_t> covering(t.gt_count, 0);
    for (std::uint32_t sj = 0; sj < t.sp_count; ++sj)
        for (const auto& [gi, overlap] : t.per_sp[sj])
            covering[gi] += t.sp_sizes[sj];
    double sum = 0;
    for (std::uint32_t gi = 0; gi < t.gt_count; ++gi)
        sum += static_cast<double>(covering[gi] - t.gt_sizes[gi]) /
               static_cast<double>(t.gt_sizes[gi]);
    return sum / static_cast<double>(t.gt_count);
}

// UE_Bergh = (1/N) sum_Sj |Sj - argmax_Gi |Sj ^ Gi||; equals 1 - ASA.
inline double undersegmentation_bergh(const LabelMap& gt, const LabelMap& sp) {
    detail::require_same_dimensions(gt, sp);
    const auto t = detail::overlap_table(gt, sp);
    std::size_t leak = 0;
    for (std::uint32_t sj = 0; sj < t.sp_count; ++sj) {
        std::size_t best = 0;  // rows are sorted by gt label, so ties pick the lowest
        for (const auto& [gi, overlap] : t.per_sp[sj])
            if (overlap > best) best = overlap;
        leak += t.sp_sizes[sj] - best;
    }
    return static_cast<double>(leak) / static_cast<double>(gt.pixel_count());
}

// ASA = (1/N) sum_Sj max_Gi |Sj ^ Gi|
inline double asa(const LabelMap& gt, const LabelMap& sp) {
    detail::require_same_dimensions(gt, sp);
    const auto t = detail::overlap_table(gt, sp);
    std::size_t kept = 0;
    for (std::uint32_t sj = 0; sj < t.sp_count; ++sj) {
        std::size_t best = 0;
        for (const auto& [gi, overlap] : t.per_sp[sj])
            if (overlap > best) best = overlap;
        kept += best;
    }
    return static_cast<double>(kept) / static_cast<double>(gt.pixel_count());
}

// EV = sum_Sj |Sj| ||mu(Sj)-mu(I)||^2 / sum_n ||I(x_n)-mu(I)||^2, squared
// differences summed over channels; 1 for a constant image.
inline double explained_variation(const Image& image, const LabelMap& sp) {
    if (image.width != sp.width || image.height != sp.height)
        throw std::invalid_argument("metrics: image/label map dimension mismatch");
    LabelMap s = sp;
    const std::uint32_t k = s.canonicalize();
    const int c = image.channels;
    const std::size_t n = image.pixel_count();

    std::vector<double> seg_sum(static_cast<std::size_t>(k) * c, 0.0);
    std::vector<std::size_t> seg_size(k, 0);
    std::vector<double> img_mean(c, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t sj = s.labels[i];
        seg_size[sj]++;
        for (int ch = 0; ch < c; ++ch) {
            const double v = image.data[i * c + ch];
            seg_sum[sj * c + ch] += v;
            img_mean[ch] += v;
        }
    }
    for (int ch = 0; ch < c; ++ch) img_mean[ch] /= static_cast<double>(n);

    double denom = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (int ch = 0; ch < c; ++ch) {
            const double d = image.data[i * c + ch] - img_mean[ch];
            denom += d * d;
        }
    if (denom == 0.0) return 1.0;

    double numer = 0;
    for (std::uint32_t sj = 0; sj < k; ++sj)
        for (int ch = 0; ch < c; ++ch) {
            const double d = seg_sum[sj * c + ch] / static_cast<double>(seg_size[sj]) - img_mean[ch];
            numer += static_cast<double>(seg_size[sj]) * d * d;
        }
    return numer / denom;
}

// CO = (1/N) sum_Sj |Sj| * 4 pi A / P^2 with P counting pixel edges against
// differing labels or the image border; per-superpixel quotient clamped to 1.
inline double compactness(const LabelMap& sp) {
    LabelMap s = sp;
    const std::uint32_t k = s.canonicalize();
    const int w = s.width, h = s.height;
    std::vector<std::size_t> area(k, 0), perimeter(k, 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::uint32_t l = s.at(x, y);
            area[l]++;
            if (x == 0 || s.at(x - 1, y) != l) perimeter[l]++;
            if (x + 1 >= w || s.at(x + 1, y) != l) perimeter[l]++;
            if (y == 0 || s.at(x, y - 1) != l) perimeter[l]++;
            if (y + 1 >= h || s.at(x, y + 1) != l) perimeter[l]++;
        }
    }
    double co = 0;
    for (std::uint32_t j = 0; j < k; ++j) {
        const double q = 4.0 * std::numbers::pi * static_cast<double>(area[j]) /
                         (static_cast<double>(perimeter[j]) * static_cast<double>(perimeter[j]));
        co += static_cast<double>(area[j]) * std::min(1.0, q);
    }
    return co / static_cast<double>(s.pixel_count());
}

// ICV = (1/|S|) sum_Sj sqrt(sum_{x in Sj} ||I(x)-mu(Sj)||^2) / |Sj|
inline double intra_cluster_variation(const Image& image, const LabelMap& sp) {
    if (image.width != sp.width || image.height != sp.height)
        throw std::invalid_argument("metrics: image/label map dimension mismatch");
    LabelMap s = sp;
    const std::uint32_t k = s.canonicalize();
    const int c = image.channels;
    const std::size_t n = image.pixel_count();

    std::vector<double> seg_sum(static_cast<std::size_t>(k) * c, 0.0);
    std::vector<std::size_t> seg_size(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        seg_size[s.labels[i]]++;
        for (int ch = 0; ch < c; ++ch)
            seg_sum[s.labels[i] * c + ch] += image.data[i * c + ch];
    }
    std::vector<double> seg_var(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t sj = s.labels[i];
        for (int ch = 0; ch < c; ++ch) {
            const double d = image.data[i * c + ch] -
                             seg_sum[sj * c + ch] / static_cast<double>(seg_size[sj]);
            seg_var[sj] += d * d;
        }
    }
    double sum = 0;
    for (std::uint32_t j = 0; j < k; ++j)
        sum += std::sqrt(seg_var[j]) / static_cast<double>(seg_size[j]);
    return sum / static_cast<double>(k);
}

// MDE = (1/N) sum over ground-truth boundary pixels of the Euclidean distance
// to the nearest superpixel boundary pixel. A boundary-free superpixel map
// contributes the image diagonal for every ground-truth boundary pixel.
inline double mean_distance_to_edge(const LabelMap& gt, const LabelMap& sp) {
    detail::require_same_dimensions(gt, sp);
    const auto gt_boundary = boundary_mask(gt);
    const auto sp_boundary = boundary_mask(sp);
    const bool sp_has_boundary =
        std::find(sp_boundary.begin(), sp_boundary.end(), true) != sp_boundary.end();

    double sum = 0;
    if (!sp_has_boundary) {
        const double diag = std::sqrt(static_cast<double>(gt.width) * gt.width +
                                      static_cast<double>(gt.height) * gt.height);
        for (std::size_t i = 0; i < gt_boundary.size(); ++i)
            if (gt_boundary[i]) sum += diag;
    } else {
        const auto sq = squared_distance_transform(sp_boundary, gt.width, gt.height);
        for (std::size_t i = 0; i < gt_boundary.size(); ++i)
            if (gt_boundary[i]) sum += std::sqrt(sq[i]);
    }
    return sum / static_cast<double>(gt.pixel_count());
}

// Worst case over ground truths: minimum for quality metrics (Rec, ASA),
// maximum for error metrics (UE variants, MDE). EV/CO/ICV are ground-truth
// independent and computed once.
inline MetricRecord evaluate_entry(const Image& image,
                                   const std::vector<LabelMap>& ground_truths,
                                   const LabelMap& sp,
                                   const MetricConfig& config = {}) {
    if (ground_truths.empty())
        throw std::invalid_argument("evaluate_entry: empty ground-truth list");
    if (image.width != sp.width || image.height != sp.height)
        throw std::invalid_argument("evaluate_entry: image/superpixel dimension mismatch");

    const int r = recall_radius(image.width, image.height, config);
    MetricRecord rec;
    bool first = true;
    for (const auto& gt : ground_truths) {
        if (gt.width != image.width || gt.height != image.height)
            throw std::invalid_argument("evaluate_entry: ground-truth dimension mismatch");
        const double v_rec = boundary_recall(gt, sp, r);
        const double v_np = undersegmentation_np(gt, sp);
        const double v_levin = undersegmentation_levin(gt, sp);
        const double v_bergh = undersegmentation_bergh(gt, sp);
        const double v_asa = asa(gt, sp);
        const double v_mde = mean_distance_to_edge(gt, sp);
        if (first) {
            rec.rec = v_rec;
            rec.ue_np = v_np;
            rec.ue_levin = v_levin;
            rec.ue_bergh = v_bergh;
            rec.asa = v_asa;
            rec.mde = v_mde;
            first = false;
        } else {
            rec.rec = std::min(rec.rec, v_rec);
            rec.asa = std::min(rec.asa, v_asa);
            rec.ue_np = std::max(rec.ue_np, v_np);
            rec.ue_levin = std::max(rec.ue_levin, v_levin);
            rec.ue_bergh = std::max(rec.ue_bergh, v_bergh);
            rec.mde = std::max(rec.mde, v_mde);
        }
    }
    rec.ev = explained_variation(image, sp);
    rec.co = compactness(sp);
    rec.icv = intra_cluster_variation(image, sp);
    rec.k_generated = count_labels(sp);
    return rec;
}

namespace detail {

template <typename Get>
inline Stat stat_over(const std::vector<MetricRecord>& records, Get get) {
    Stat s;
    s.min = s.max = get(records.front());
    double sum = 0, sum_sq = 0;
    for (const auto& r : records) {
        const double v = get(r);
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        sum += v;
    }
    s.mean = sum / static_cast<double>(records.size());
    for (const auto& r : records) {
        const double d = get(r) - s.mean;
        sum_sq += d * d;
    }
    s.std = std::sqrt(sum_sq / static_cast<double>(records.size()));
    return s;
}

}  // namespace detail

// Population statistics (std divides by n) over a non-empty record set.
inline AggregateStats aggregate(const std::vector<MetricRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("aggregate: empty record list");
    AggregateStats a;
    a.count = records.size();
    a.rec = detail::stat_over(records, [](const MetricRecord& r) { return r.rec; });
    a.ue_np = detail::stat_over(records, [](const MetricRecord& r) { return r.ue_np; });
    a.ue_levin = detail::stat_over(records, [](const MetricRecord& r) { return r.ue_levin; });
    a.ue_bergh = detail::stat_over(records, [](const MetricRecord& r) { return r.ue_bergh; });
    a.asa = detail::stat_over(records, [](const MetricRecord& r) { return r.asa; });
    a.ev = detail::stat_over(records, [](const MetricRecord& r) { return r.ev; });
    a.co = detail::stat_over(records, [](const MetricRecord& r) { return r.co; });
    a.icv = detail::stat_over(records, [](const MetricRecord& r) { return r.icv; });
    a.mde = detail::stat_over(records, [](const MetricRecord& r) { return r.mde; });

    const Stat k = detail::stat_over(records, [](const MetricRecord& r) {
        return static_cast<double>(r.k_generated);
    });
    a.k_mean = k.mean;
    a.k_std = k.std;
    a.k_max = static_cast<std::uint32_t>(k.max);

    double rt = 0;
    std::size_t rt_n = 0;
    for (const auto& r : records)
        if (r.runtime_ns) {
            rt += static_cast<double>(*r.runtime_ns) / 1e6;
            ++rt_n;
        }
    a.runtime_ms_mean = rt_n ? rt / static_cast<double>(rt_n) : 0.0;
    return a;
}

}  // namespace spix
