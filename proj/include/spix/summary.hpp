#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace spix {

// Ordered (K, value) samples; strictly increasing in K.
struct Curve {
    std::vector<std::pair<double, double>> samples;

    void check() const {
        if (samples.empty()) throw std::invalid_argument("curve: empty");
        for (std::size_t i = 1; i < samples.size(); ++i)
            if (samples[i].first <= samples[i - 1].first)
                throw std::invalid_argument("curve: K values must be strictly increasing");
    }
};

// Builds a curve from unordered samples; exact duplicate K positions are
// averaged so the strict monotonicity invariant holds.
inline Curve make_curve(std::vector<std::pair<double, double>> samples) {
    std::sort(samples.begin(), samples.end());
    Curve c;
    for (std::size_t i = 0; i < samples.size();) {
        std::size_t j = i;
        double sum = 0;
        while (j < samples.size() && samples[j].first == samples[i].first) sum += samples[j++].second;
        c.samples.emplace_back(samples[i].first, sum / static_cast<double>(j - i));
        i = j;
    }
    c.check();
    return c;
}

// Trapezoidal mean of the piecewise-linear curve over [k_min, k_max]. Samples
// straddling an interval boundary are interpolated at the boundary; a curve
// that never reaches a boundary is extended flat from its nearest sample,
// penalizing algorithms that cannot produce very few or very many segments.
inline double average_under_curve(const Curve& curve, double k_min = 200, double k_max = 5200) {
    curve.check();
    if (k_max <= k_min) throw std::invalid_argument("average_under_curve: empty interval");

    auto value_at = [&](double k) {
        const auto& s = curve.samples;
        if (k <= s.front().first) return s.front().second;  // flat extension
        if (k >= s.back().first) return s.back().second;
        for (std::size_t i = 1; i < s.size(); ++i)
            if (s[i].first >= k) {
                const auto& [k0, v0] = s[i - 1];
                const auto& [k1, v1] = s[i];
                return v0 + (v1 - v0) * (k - k0) / (k1 - k0);
            }
        return s.back().second;
    };

    std::vector<std::pair<double, double>> pts;
    pts.emplace_back(k_min, value_at(k_min));
    for (const auto& s : curve.samples)
        if (s.first > k_min && s.first < k_max) pts.push_back(s);
    pts.emplace_back(k_max, value_at(k_max));

    double integral = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        integral += 0.5 * (pts[i].second + pts[i - 1].second) * (pts[i].first - pts[i - 1].first);
    return integral / (k_max - k_min);
}

// K-independent summaries: average miss rate (1-Rec), average
// undersegmentation error and average unexplained variation (1-EV), all
// interval-averaged fractions in [0,1]; reports scale by 100 for display.
struct SummaryValues {
    double amr = 0, aue = 0, auv = 0;
};

inline SummaryValues amr_aue_auv(const Curve& rec_curve, const Curve& ue_curve,
                                 const Curve& ev_curve, double k_min = 200,
                                 double k_max = 5200) {
    auto complement = [](Curve c) {
        for (auto& s : c.samples) s.second = 1.0 - s.second;
        return c;
    };
    SummaryValues v;
    v.amr = average_under_curve(complement(rec_curve), k_min, k_max);
    v.aue = average_under_curve(ue_curve, k_min, k_max);
    v.auv = average_under_curve(complement(ev_curve), k_min, k_max);
    return v;
}

struct RankRow {
    std::string algorithm;
    double mean_amr = 0, mean_aue = 0;
    double average_rank = 0;
    std::map<int, int> rank_distribution;  // rank -> frequency across datasets
};

struct RankTable {
    std::vector<RankRow> rows;  // sorted ascending by average rank
};

// Ranks per dataset by AMR + AUE ascending (ties: algorithm id), then
// averages ranks over the datasets each algorithm was evaluated on.
inline RankTable rank_algorithms(
    const std::map<std::string, std::map<std::string, std::pair<double, double>>>& scores) {
    if (scores.empty()) throw std::invalid_argument("rank_algorithms: no datasets");

    struct Acc {
        double amr_sum = 0, aue_sum = 0, rank_sum = 0;
        int datasets = 0;
        std::map<int, int> distribution;
    };
    std::map<std::string, Acc> acc;

    for (const auto& [dataset, algos] : scores) {
        if (algos.empty())
            throw std::invalid_argument("rank_algorithms: dataset without algorithms");
        std::vector<std::pair<double, std::string>> order;
        for (const auto& [algo, s] : algos) order.emplace_back(s.first + s.second, algo);
        std::sort(order.begin(), order.end());
        for (std::size_t i = 0; i < order.size(); ++i) {
            const auto& algo = order[i].second;
            const auto& s = algos.at(algo);
            auto& a = acc[algo];
            a.amr_sum += s.first;
            a.aue_sum += s.second;
            a.rank_sum += static_cast<double>(i + 1);
            a.datasets++;
            a.distribution[static_cast<int>(i + 1)]++;
        }
    }

    RankTable table;
    for (const auto& [algo, a] : acc) {
        RankRow row;
        row.algorithm = algo;
        row.mean_amr = a.amr_sum / a.datasets;
        row.mean_aue = a.aue_sum / a.datasets;
        row.average_rank = a.rank_sum / a.datasets;
        row.rank_distribution = a.distribution;
        table.rows.push_back(std::move(row));
    }
    std::sort(table.rows.begin(), table.rows.end(), [](const RankRow& a, const RankRow& b) {
        if (a.average_rank != b.average_rank) return a.average_rank < b.average_rank;
        return a.algorithm < b.algorithm;
    });
    return table;
}

// Sample Pearson correlation coefficient.
inline double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("pearson: length mismatch");
    if (xs.size() < 2) throw std::invalid_argument("pearson: needs at least two samples");
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0 || syy == 0) throw std::invalid_argument("pearson: zero variance");
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace spix
