#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spix/algorithms/segment.hpp"
#include "spix/filter.hpp"
#include "spix/image.hpp"
#include "spix/metrics.hpp"
#include "spix/rng.hpp"

namespace spix {

enum class PerturbationKind { salt_pepper, gaussian_noise, box_blur, gaussian_blur, affine };

inline PerturbationKind perturbation_from_string(const std::string& s) {
    if (s == "salt_pepper") return PerturbationKind::salt_pepper;
    if (s == "gaussian_noise") return PerturbationKind::gaussian_noise;
    if (s == "box_blur") return PerturbationKind::box_blur;
    if (s == "gaussian_blur") return PerturbationKind::gaussian_blur;
    if (s == "affine") return PerturbationKind::affine;
    throw std::invalid_argument("unknown perturbation: " + s);
}

inline const char* to_string(PerturbationKind kind) {
    switch (kind) {
        case PerturbationKind::salt_pepper: return "salt_pepper";
        case PerturbationKind::gaussian_noise: return "gaussian_noise";
        case PerturbationKind::box_blur: return "box_blur";
        case PerturbationKind::gaussian_blur: return "gaussian_blur";
        default: return "affine";
    }
}

// Each pixel is independently replaced with probability p; a replaced pixel
// becomes wholly salt (255) or wholly pepper (0) across all channels.
inline Image salt_pepper(const Image& image, double p, std::uint64_t seed) {
    if (p < 0 || p > 1) throw std::invalid_argument("salt_pepper: p must be in [0,1]");
    Image out = image;
    Rng rng(seed);
    for (std::size_t i = 0; i < image.pixel_count(); ++i) {
        if (rng.next_double() >= p) continue;
        const std::uint8_t v = rng.next_bool() ? 255 : 0;
        for (int c = 0; c < image.channels; ++c) out.data[i * image.channels + c] = v;
    }
    return out;
}

// Per-channel additive N(0, sigma^2), rounded and clamped.
inline Image gaussian_noise(const Image& image, double sigma, std::uint64_t seed) {
    if (sigma < 0) throw std::invalid_argument("gaussian_noise: sigma must be >= 0");
    if (sigma == 0) return image;
    Image out = image;
    Rng rng(seed);
    for (std::size_t i = 0; i < image.data.size(); ++i) {
        const double v = image.data[i] + sigma * rng.next_gaussian();
        out.data[i] = static_cast<std::uint8_t>(std::clamp<long>(std::llround(v), 0, 255));
    }
    return out;
}

// k x k mean filter with edge replication; k = 0 or 1 is the identity.
inline Image box_blur(const Image& image, int k) {
    if (k <= 1) {
        if (k < 0 || (k != 0 && k % 2 == 0))
            throw std::invalid_argument("box_blur: k must be odd");
        return image;
    }
    if (k % 2 == 0) throw std::invalid_argument("box_blur: k must be odd");
    const std::vector<double> kernel(k, 1.0 / k);
    Image out = image;
    for (int c = 0; c < image.channels; ++c) {
        auto plane = detail::channel_plane(image, c);
        plane = detail::convolve_separable(plane, image.width, image.height, kernel);
        for (std::size_t i = 0; i < plane.size(); ++i)
            out.data[i * image.channels + c] =
                static_cast<std::uint8_t>(std::clamp<long>(std::llround(plane[i]), 0, 255));
    }
    return out;
}

// Separable Gaussian with kernel radius ceil(3 sigma) and edge replication.
inline Image gaussian_blur(const Image& image, double sigma) {
    if (sigma < 0) throw std::invalid_argument("gaussian_blur: sigma must be >= 0");
    if (sigma == 0) return image;
    const auto kernel = detail::gaussian_kernel(sigma);
    Image out = image;
    for (int c = 0; c < image.channels; ++c) {
        auto plane = detail::channel_plane(image, c);
        plane = detail::convolve_separable(plane, image.width, image.height, kernel);
        for (std::size_t i = 0; i < plane.size(); ++i)
            out.data[i * image.channels + c] =
                static_cast<std::uint8_t>(std::clamp<long>(std::llround(plane[i]), 0, 255));
    }
    return out;
}

struct AffineSpec {
    double scale = 1.0;
    double rotation_deg = 0.0;
    double shear = 0.0;
    double tx = 0.0;
    double ty = 0.0;
};

namespace detail {

// Inverse map of a forward transform q = C + T + M (p - C) around the image
// center C, with M = R(theta) * shear * scale.
struct InverseAffine {
    double m00, m01, m10, m11;  // inverse of M
    double cx, cy, tx, ty;

    InverseAffine(const AffineSpec& spec, int width, int height) {
        if (spec.scale <= 0) throw std::invalid_argument("affine: scale must be > 0");
        const double rad = spec.rotation_deg * std::numbers::pi / 180.0;
        const double c = std::cos(rad), s = std::sin(rad);
        // M = R * K(shear) * scale with K = [[1, shear], [0, 1]]
        const double a = spec.scale * c;
        const double b = spec.scale * (c * spec.shear - s);
        const double d = spec.scale * s;
        const double e = spec.scale * (s * spec.shear + c);
        const double det = a * e - b * d;
        m00 = e / det;
        m01 = -b / det;
        m10 = -d / det;
        m11 = a / det;
        cx = (width - 1) / 2.0;
        cy = (height - 1) / 2.0;
        tx = spec.tx;
        ty = spec.ty;
    }

    void source(double qx, double qy, double& px, double& py) const {
        const double dx = qx - cx - tx, dy = qy - cy - ty;
        px = cx + m00 * dx + m01 * dy;
        py = cy + m10 * dx + m11 * dy;
    }
};

}  // namespace detail

// Inverse-mapped bilinear resampling around the image center; samples outside
// the raster clamp to the nearest edge pixel, output dimensions unchanged.
inline Image affine_transform(const Image& image, double scale, double rotation_deg,
                              double shear, double tx, double ty) {
    const detail::InverseAffine inv({scale, rotation_deg, shear, tx, ty},
                                    image.width, image.height);
    Image out(image.width, image.height, image.channels);
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x) {
            double px, py;
            inv.source(x, y, px, py);
            px = std::clamp(px, 0.0, image.width - 1.0);
            py = std::clamp(py, 0.0, image.height - 1.0);
            const int x0 = static_cast<int>(std::floor(px));
            const int y0 = static_cast<int>(std::floor(py));
            const int x1 = std::min(x0 + 1, image.width - 1);
            const int y1 = std::min(y0 + 1, image.height - 1);
            const double fx = px - x0, fy = py - y0;
            for (int c = 0; c < image.channels; ++c) {
                const double v =
                    (1 - fy) * ((1 - fx) * image.at(x0, y0, c) + fx * image.at(x1, y0, c)) +
                    fy * ((1 - fx) * image.at(x0, y1, c) + fx * image.at(x1, y1, c));
                out.at(x, y, c) =
                    static_cast<std::uint8_t>(std::clamp<long>(std::llround(v), 0, 255));
            }
        }
    return out;
}

// Label maps resample with nearest-neighbor so no fractional labels appear.
inline LabelMap affine_transform_labels(const LabelMap& map, double scale, double rotation_deg,
                                        double shear, double tx, double ty) {
    const detail::InverseAffine inv({scale, rotation_deg, shear, tx, ty}, map.width, map.height);
    LabelMap out(map.width, map.height);
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x) {
            double px, py;
            inv.source(x, y, px, py);
            const int sx = std::clamp(static_cast<int>(std::floor(px + 0.5)), 0, map.width - 1);
            const int sy = std::clamp(static_cast<int>(std::floor(py + 0.5)), 0, map.height - 1);
            out.at(x, y) = map.at(sx, sy);
        }
    return out;
}

struct Perturbation {
    PerturbationKind kind = PerturbationKind::salt_pepper;
    double magnitude = 0;  // p, sigma, kernel size or rotation degrees
    std::uint64_t seed = 0;
    AffineSpec affine;  // used when kind == affine; rotation_deg = magnitude
};

inline Image apply_perturbation(const Image& image, const Perturbation& p) {
    switch (p.kind) {
        case PerturbationKind::salt_pepper: return salt_pepper(image, p.magnitude, p.seed);
        case PerturbationKind::gaussian_noise: return gaussian_noise(image, p.magnitude, p.seed);
        case PerturbationKind::box_blur: return box_blur(image, static_cast<int>(p.magnitude));
        case PerturbationKind::gaussian_blur: return gaussian_blur(image, p.magnitude);
        case PerturbationKind::affine: {
            AffineSpec spec = p.affine;
            spec.rotation_deg = p.magnitude;
            return affine_transform(image, spec.scale, spec.rotation_deg, spec.shear,
                                    spec.tx, spec.ty);
        }
    }
    throw std::logic_error("unreachable");
}

struct RobustnessRow {
    double magnitude = 0;
    AggregateStats stats;
    double k_raw_mean = 0, k_raw_std = 0;
};

// For each magnitude: perturb every image, segment, evaluate against the
// original ground truth (transformed alongside the image in the affine case)
// and aggregate. k_raw columns report the superpixel count before
// connectivity enforcement, which is what the study plots.
inline std::vector<RobustnessRow> robustness_sweep(
    const std::string& algorithm_id, const AlgorithmParams& params,
    const std::vector<DatasetEntry>& entries, PerturbationKind kind,
    const std::vector<double>& magnitudes, std::uint64_t seed = 1,
    const MetricConfig& metric_config = {}) {
    if (magnitudes.empty())
        throw std::invalid_argument("robustness_sweep: no magnitudes");
    if (entries.empty()) throw std::invalid_argument("robustness_sweep: no entries");

    std::vector<RobustnessRow> rows;
    for (std::size_t mi = 0; mi < magnitudes.size(); ++mi) {
        RobustnessRow row;
        row.magnitude = magnitudes[mi];
        std::vector<MetricRecord> records;
        double k_raw_sum = 0, k_raw_sq = 0;
        std::size_t n = 0;
        for (std::size_t ei = 0; ei < entries.size(); ++ei) {
            const auto& entry = entries[ei];
            Perturbation p;
            p.kind = kind;
            p.magnitude = magnitudes[mi];
            p.seed = derive_seed(seed, ei, mi);
            try {
                const Image perturbed = apply_perturbation(entry.image, p);
                std::vector<LabelMap> gts;
                if (kind == PerturbationKind::affine) {
                    for (const auto& gt : entry.ground_truths)
                        gts.push_back(affine_transform_labels(gt, p.affine.scale, p.magnitude,
                                                              p.affine.shear, p.affine.tx,
                                                              p.affine.ty));
                }
                const auto& eval_gts =
                    kind == PerturbationKind::affine ? gts : entry.ground_truths;
                const SegmentationResult seg = segment(algorithm_id, perturbed, params);
                MetricRecord record =
                    evaluate_entry(perturbed, eval_gts, seg.labels, metric_config);
                record.runtime_ns = seg.runtime_ns;
                records.push_back(record);
                k_raw_sum += seg.k_raw;
                k_raw_sq += static_cast<double>(seg.k_raw) * seg.k_raw;
                ++n;
            } catch (const std::exception&) {
                // per-image failure: skip the row contribution
            }
        }
        if (!records.empty()) {
            row.stats = aggregate(records);
            row.k_raw_mean = k_raw_sum / static_cast<double>(n);
            const double var = k_raw_sq / static_cast<double>(n) - row.k_raw_mean * row.k_raw_mean;
            row.k_raw_std = std::sqrt(std::max(0.0, var));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace spix
