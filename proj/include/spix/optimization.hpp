#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "spix/algorithms/common.hpp"
#include "spix/image.hpp"
#include "spix/metrics.hpp"

namespace spix {

using ParamValue = std::variant<double, std::string>;

// Discrete search space: axis name -> ordered candidate values. Axes are kept
// sorted by name; enumeration is odometer order with the first axis slowest,
// which fixes the tie-breaking order of grid_search.
struct ParameterGrid {
    std::vector<std::pair<std::string, std::vector<ParamValue>>> axes;

    void add_axis(const std::string& name, std::vector<ParamValue> values) {
        if (values.empty()) throw std::invalid_argument("grid: empty axis " + name);
        auto pos = std::lower_bound(axes.begin(), axes.end(), name,
                                    [](const auto& a, const std::string& n) { return a.first < n; });
        axes.insert(pos, {name, std::move(values)});
    }

    std::size_t combinations() const {
        std::size_t n = 1;
        for (const auto& [name, values] : axes) n *= values.size();
        return n;
    }
};

namespace detail {

inline void apply_param(AlgorithmParams& params, const std::string& name, const ParamValue& v) {
    if (name == "color_space") {
        if (const auto* s = std::get_if<std::string>(&v)) {
            params.color_space = color_space_from_string(*s);
            return;
        }
        throw std::invalid_argument("grid: color_space candidates must be strings");
    }
    const auto* d = std::get_if<double>(&v);
    if (!d) throw std::invalid_argument("grid: non-numeric candidate for " + name);
    if (name == "compactness") params.compactness = *d;
    else if (name == "iterations") params.iterations = static_cast<int>(std::llround(*d));
    else params.extra[name] = *d;
}

}  // namespace detail

// Joint optimization target: minimize (1 - Rec) + UE. The additive form keeps
// algorithms from trading one term away entirely.
inline double objective(double rec_mean, double ue_mean) {
    return (1.0 - rec_mean) + ue_mean;
}

struct GridTraceRow {
    AlgorithmParams params;
    double rec_mean = 0, ue_mean = 0;
    double objective = std::numeric_limits<double>::infinity();
    bool feasible = false;
};

struct GridSearchOptions {
    // mean |k_generated - K| / K above this marks a combination infeasible
    double k_deviation_limit = 0.5;
    MetricConfig metric_config;
};

using Segmenter = std::function<SegmentationResult(const Image&, const AlgorithmParams&)>;

// Exhaustive evaluation of every grid combination on the training entries.
// Failing or K-degenerate combinations score +infinity instead of aborting
// the search. Ties keep the earliest combination in enumeration order.
inline std::pair<AlgorithmParams, double> grid_search(
    const Segmenter& segmenter, const ParameterGrid& grid,
    const std::vector<DatasetEntry>& train, int k_target,
    const GridSearchOptions& options = {}, std::vector<GridTraceRow>* trace = nullptr) {
    if (grid.axes.empty()) throw std::invalid_argument("grid_search: empty grid");
    if (train.empty()) throw std::invalid_argument("grid_search: empty training set");

    AlgorithmParams best;
    double best_objective = std::numeric_limits<double>::infinity();
    bool have_best = false;

    std::vector<std::size_t> odometer(grid.axes.size(), 0);
    while (true) {
        AlgorithmParams params;
        params.k_desired = k_target;
        for (std::size_t a = 0; a < grid.axes.size(); ++a)
            detail::apply_param(params, grid.axes[a].first, grid.axes[a].second[odometer[a]]);

        GridTraceRow row;
        row.params = params;
        try {
            double rec_sum = 0, ue_sum = 0, dev_sum = 0;
            for (const auto& entry : train) {
                const SegmentationResult seg = segmenter(entry.image, params);
                const MetricRecord record = evaluate_entry(
                    entry.image, entry.ground_truths, seg.labels, options.metric_config);
                rec_sum += record.rec;
                ue_sum += record.ue_np;
                dev_sum += std::abs(static_cast<double>(record.k_generated) - k_target) /
                           static_cast<double>(k_target);
            }
            const double inv = 1.0 / static_cast<double>(train.size());
            row.rec_mean = rec_sum * inv;
            row.ue_mean = ue_sum * inv;
            if (dev_sum * inv <= options.k_deviation_limit) {
                row.objective = objective(row.rec_mean, row.ue_mean);
                row.feasible = true;
            }
        } catch (const std::exception&) {
            // infeasible combination; keep searching
        }
        if (trace) trace->push_back(row);
        if (!have_best || row.objective < best_objective) {
            best = params;
            best_objective = row.objective;
            have_best = true;
        }

        std::size_t a = grid.axes.size();
        while (a > 0) {
            --a;
            if (++odometer[a] < grid.axes[a].second.size()) break;
            odometer[a] = 0;
            if (a == 0) return {best, best_objective};
        }
    }
}

// Per-anchor optimization result: K -> (best parameters, objective value).
struct OptimizationOutcome {
    std::map<int, std::pair<AlgorithmParams, double>> anchors;
    std::map<int, std::vector<GridTraceRow>> traces;
};

// Linear interpolation between the two bracketing anchors; integer parameters
// round half-up, categorical parameters come from the nearer anchor (ties to
// the lower K).
inline AlgorithmParams interpolate_params(const OptimizationOutcome& outcome, int k) {
    if (outcome.anchors.empty())
        throw std::invalid_argument("interpolate_params: no anchors");

    auto assemble = [&](const AlgorithmParams& p) {
        AlgorithmParams out = p;
        out.k_desired = k;
        return out;
    };

    const auto first = outcome.anchors.begin();
    const auto last = std::prev(outcome.anchors.end());
    if (k <= first->first) return assemble(first->second.first);
    if (k >= last->first) return assemble(last->second.first);

    auto hi = outcome.anchors.upper_bound(k);
    auto lo = std::prev(hi);
    if (hi == outcome.anchors.end()) return assemble(lo->second.first);

    const AlgorithmParams& a = lo->second.first;
    const AlgorithmParams& b = hi->second.first;
    const double t = static_cast<double>(k - lo->first) /
                     static_cast<double>(hi->first - lo->first);

    AlgorithmParams out;
    out.k_desired = k;
    out.compactness = a.compactness + t * (b.compactness - a.compactness);
    out.iterations = static_cast<int>(std::floor(
        a.iterations + t * (b.iterations - a.iterations) + 0.5));
    out.color_space = t > 0.5 ? b.color_space : a.color_space;
    for (const auto& [key, av] : a.extra) {
        auto itb = b.extra.find(key);
        out.extra[key] = itb == b.extra.end() ? av : av + t * (itb->second - av);
    }
    for (const auto& [key, bv] : b.extra)
        if (!a.extra.count(key)) out.extra[key] = bv;  // only one side defines it
    return out;
}

}  // namespace spix
