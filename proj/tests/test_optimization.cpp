#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "spix/algorithms/segment.hpp"
#include "spix/optimization.hpp"
#include "spix/synthetic.hpp"

using namespace spix;

namespace {

DatasetEntry small_entry(std::uint64_t seed) {
    SyntheticSpec spec;
    spec.width = 32;
    spec.height = 24;
    spec.num_segments = 4;
    spec.noise_sigma = 0;
    spec.seed = seed;
    return generate_synthetic_entry(spec);
}

}  // namespace

TEST_CASE("objective is the additive miss-rate/UE combination") {
    CHECK(objective(1.0, 0.0) == 0.0);
    CHECK(objective(0.9, 0.1) == Catch::Approx(0.2));
    CHECK(objective(1.0, 0.5) == Catch::Approx(0.5));  // additive, never collapses to 0
}

TEST_CASE("grid search returns a single-combination grid unchanged") {
    ParameterGrid grid;
    grid.add_axis("compactness", {ParamValue(7.0)});
    const std::vector<DatasetEntry> train = {small_entry(1)};

    const Segmenter ideal = [&](const Image&, const AlgorithmParams&) {
        SegmentationResult r;
        r.labels = train[0].ground_truths[0];
        r.k_generated = count_labels(r.labels);
        return r;
    };
    GridSearchOptions opt;
    opt.k_deviation_limit = 1e9;  // the stub ignores K entirely
    const auto [best, value] = grid_search(ideal, grid, train, 4, opt);
    CHECK(best.compactness == 7.0);
    CHECK(value == Catch::Approx(0.0));
}

TEST_CASE("grid search picks the combination that nails the partition") {
    const std::vector<DatasetEntry> train = {small_entry(2)};
    const LabelMap& gt = train[0].ground_truths[0];

    // quality switches on a single axis value
    ParameterGrid grid;
    grid.add_axis("quality", {ParamValue(0.0), ParamValue(1.0)});
    const Segmenter toggle = [&](const Image& image, const AlgorithmParams& p) {
        SegmentationResult r;
        if (p.extra.at("quality") > 0.5) {
            r.labels = gt;
        } else {
            r.labels = LabelMap(image.width, image.height, 0);  // one blob
        }
        r.k_generated = count_labels(r.labels);
        return r;
    };
    GridSearchOptions opt;
    opt.k_deviation_limit = 1e9;
    std::vector<GridTraceRow> trace;
    const auto [best, value] = grid_search(toggle, grid, train, 4, opt, &trace);
    CHECK(best.extra.at("quality") == 1.0);
    CHECK(value == Catch::Approx(0.0));
    REQUIRE(trace.size() == 2);
    CHECK(trace[0].objective > trace[1].objective);
}

TEST_CASE("grid search is exhaustive over a 3x3 grid") {
    const std::vector<DatasetEntry> train = {small_entry(3)};

    // deterministic stub whose quality depends on both axes
    ParameterGrid grid;
    grid.add_axis("a", {ParamValue(0.0), ParamValue(1.0), ParamValue(2.0)});
    grid.add_axis("b", {ParamValue(0.0), ParamValue(1.0), ParamValue(2.0)});
    const LabelMap& gt = train[0].ground_truths[0];
    const Segmenter stub = [&](const Image& image, const AlgorithmParams& p) {
        const int a = int(p.extra.at("a")), b = int(p.extra.at("b"));
        SegmentationResult r;
        // blend: the closer (a, b) to (1, 2), the closer the labels to gt
        LabelMap m = gt;
        const int damage = std::abs(a - 1) + std::abs(b - 2);
        for (int i = 0; i < damage * 40; ++i) m.labels[(i * 37) % m.labels.size()] = 0;
        r.labels = std::move(m);
        r.k_generated = count_labels(r.labels);
        return r;
    };
    GridSearchOptions opt;
    opt.k_deviation_limit = 1e9;
    std::vector<GridTraceRow> trace;
    const auto [best, value] = grid_search(stub, grid, train, 4, opt, &trace);
    REQUIRE(trace.size() == 9);
    double min_seen = std::numeric_limits<double>::infinity();
    for (const auto& row : trace) min_seen = std::min(min_seen, row.objective);
    CHECK(value == min_seen);
    CHECK(best.extra.at("a") == 1.0);
    CHECK(best.extra.at("b") == 2.0);
}

TEST_CASE("failing combinations are infeasible, not fatal") {
    const std::vector<DatasetEntry> train = {small_entry(4)};
    ParameterGrid grid;
    grid.add_axis("a", {ParamValue(0.0), ParamValue(1.0)});
    const Segmenter flaky = [&](const Image& image, const AlgorithmParams& p) {
        if (p.extra.at("a") < 0.5) throw std::runtime_error("boom");
        SegmentationResult r;
        r.labels = train[0].ground_truths[0];
        r.k_generated = count_labels(r.labels);
        return r;
    };
    GridSearchOptions opt;
    opt.k_deviation_limit = 1e9;
    std::vector<GridTraceRow> trace;
    const auto [best, value] = grid_search(flaky, grid, train, 4, opt, &trace);
    CHECK(best.extra.at("a") == 1.0);
    CHECK(trace[0].objective == std::numeric_limits<double>::infinity());
    CHECK_FALSE(trace[0].feasible);
}

TEST_CASE("K-degenerate combinations are filtered") {
    const std::vector<DatasetEntry> train = {small_entry(5)};
    ParameterGrid grid;
    grid.add_axis("a", {ParamValue(0.0), ParamValue(1.0)});
    // a=0 returns one blob (k=1, far from 100); a=1 matches gt but k is small
    const Segmenter stub = [&](const Image& image, const AlgorithmParams& p) {
        SegmentationResult r;
        if (p.extra.at("a") < 0.5) r.labels = LabelMap(image.width, image.height, 0);
        else r.labels = train[0].ground_truths[0];
        r.k_generated = count_labels(r.labels);
        return r;
    };
    std::vector<GridTraceRow> trace;
    GridSearchOptions opt;  // default 50% K window
    grid_search(stub, grid, train, 100, opt, &trace);
    CHECK_FALSE(trace[0].feasible);
    CHECK_FALSE(trace[1].feasible);  // 4 segments vs K=100 is also off
}

TEST_CASE("interpolation between anchors") {
    OptimizationOutcome outcome;
    AlgorithmParams p400, p1200, p3600;
    p400.compactness = 10;
    p400.iterations = 5;
    p400.color_space = ColorSpace::lab;
    p400.extra["fh_k"] = 500;
    p1200.compactness = 30;
    p1200.iterations = 5;
    p1200.color_space = ColorSpace::rgb;
    p1200.extra["fh_k"] = 200;
    p3600.compactness = 30;
    p3600.iterations = 10;
    p3600.color_space = ColorSpace::rgb;
    p3600.extra["fh_k"] = 100;
    outcome.anchors[400] = {p400, 0.1};
    outcome.anchors[1200] = {p1200, 0.2};
    outcome.anchors[3600] = {p3600, 0.3};

    const AlgorithmParams at400 = interpolate_params(outcome, 400);
    CHECK(at400.compactness == 10.0);
    CHECK(at400.iterations == 5);
    CHECK(at400.k_desired == 400);

    const AlgorithmParams at800 = interpolate_params(outcome, 800);
    CHECK(at800.compactness == Catch::Approx(20.0));
    CHECK(at800.extra.at("fh_k") == Catch::Approx(350.0));
    CHECK(at800.color_space == ColorSpace::lab);  // tie goes to the lower anchor

    const AlgorithmParams at2400 = interpolate_params(outcome, 2400);
    CHECK(at2400.iterations == 8);  // 7.5 rounds half-up
    CHECK(at2400.color_space == ColorSpace::rgb);

    CHECK(interpolate_params(outcome, 200).compactness == 10.0);   // clamped below
    CHECK(interpolate_params(outcome, 5200).compactness == 30.0);  // clamped above
}
