#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "spix/robustness.hpp"
#include "spix/synthetic.hpp"

using namespace spix;

TEST_CASE("salt and pepper basics") {
    Rng rng(1);
    const Image img = oracle::random_image(rng, 32, 32, 3);
    CHECK(salt_pepper(img, 0.0, 7).data == img.data);

    const Image drowned = salt_pepper(img, 1.0, 7);
    for (std::size_t i = 0; i < drowned.pixel_count(); ++i) {
        const std::uint8_t v = drowned.data[i * 3];
        CHECK((v == 0 || v == 255));
        CHECK(drowned.data[i * 3 + 1] == v);
        CHECK(drowned.data[i * 3 + 2] == v);
    }

    // binomial concentration at p = 0.08 on a 256x256 image
    const Image big(256, 256, 1, std::uint8_t(128));
    const Image noisy = salt_pepper(big, 0.08, 99);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < big.data.size(); ++i)
        if (noisy.data[i] != big.data[i]) ++changed;
    const double fraction = double(changed) / double(big.data.size());
    CHECK(fraction > 0.06);
    CHECK(fraction < 0.10);

    CHECK(salt_pepper(img, 0.3, 5).data == salt_pepper(img, 0.3, 5).data);
    CHECK(salt_pepper(img, 0.3, 5).data != salt_pepper(img, 0.3, 6).data);
    CHECK_THROWS(salt_pepper(img, 1.5, 0));
}

TEST_CASE("gaussian noise statistics and clamping") {
    const Image img(256, 256, 1, std::uint8_t(128));
    CHECK(gaussian_noise(img, 0.0, 3).data == img.data);

    const Image noisy = gaussian_noise(img, 10.0, 3);
    double mean = 0;
    for (auto v : noisy.data) mean += v;
    mean /= double(noisy.data.size());
    double var = 0;
    for (auto v : noisy.data) var += (v - mean) * (v - mean);
    const double stddev = std::sqrt(var / double(noisy.data.size()));
    CHECK(mean > 127.0);
    CHECK(mean < 129.0);
    CHECK(stddev > 8.5);
    CHECK(stddev < 11.5);

    const Image white(64, 64, 3, std::uint8_t(255));
    const Image clamped = gaussian_noise(white, 50.0, 4);
    for (auto v : clamped.data) CHECK(v <= 255);
}

TEST_CASE("box blur hand example and edge cases") {
    Image row(5, 1, 1);
    const std::uint8_t values[5] = {0, 0, 100, 0, 0};
    for (int x = 0; x < 5; ++x) row.at(x, 0) = values[x];
    const Image blurred = box_blur(row, 3);
    CHECK(blurred.at(0, 0) == 0);
    CHECK(blurred.at(1, 0) == 33);
    CHECK(blurred.at(2, 0) == 33);
    CHECK(blurred.at(3, 0) == 33);
    CHECK(blurred.at(4, 0) == 0);

    CHECK(box_blur(row, 1).data == row.data);
    CHECK(box_blur(row, 0).data == row.data);
    CHECK_THROWS(box_blur(row, 4));

    const Image constant(16, 16, 3, std::uint8_t(99));
    CHECK(box_blur(constant, 9).data == constant.data);
}

TEST_CASE("gaussian blur identity, constancy and normalization") {
    Rng rng(5);
    const Image img = oracle::random_image(rng, 24, 24, 3);
    CHECK(gaussian_blur(img, 0.0).data == img.data);

    const Image constant(16, 16, 1, std::uint8_t(57));
    CHECK(gaussian_blur(constant, 2.0).data == constant.data);

    // kernel normalization: the unquantized impulse response carries the
    // full mass; the u8 output keeps it to within rounding at small sigma
    Image impulse(33, 33, 1, std::uint8_t(0));
    impulse.at(16, 16) = 255;
    std::vector<double> plane(impulse.pixel_count(), 0.0);
    plane[16 * 33 + 16] = 255.0;
    plane = detail::convolve_separable(plane, 33, 33, detail::gaussian_kernel(1.5));
    double mass = 0;
    for (double v : plane) mass += v;
    CHECK(mass == Catch::Approx(255.0).margin(1e-9));

    const Image response = gaussian_blur(impulse, 0.5);
    long sum = 0;
    for (auto v : response.data) sum += v;
    CHECK(std::abs(sum - 255) <= 1);
}

TEST_CASE("affine transform identity and exact shifts") {
    Rng rng(6);
    const Image img = oracle::random_image(rng, 20, 15, 3);
    const Image same = affine_transform(img, 1.0, 0.0, 0.0, 0.0, 0.0);
    CHECK(same.data == img.data);

    const Image spun = affine_transform(img, 1.0, 360.0, 0.0, 0.0, 0.0);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        CHECK(std::abs(int(spun.data[i]) - int(img.data[i])) <= 1);

    Image tone(8, 4, 1);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 8; ++x) tone.at(x, y) = x < 4 ? 0 : 200;
    const Image shifted = affine_transform(tone, 1.0, 0.0, 0.0, 1.0, 0.0);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 8; ++x)
            CHECK(shifted.at(x, y) == (x < 5 ? 0 : 200));

    CHECK_THROWS(affine_transform(img, 0.0, 0.0, 0.0, 0.0, 0.0));
}

TEST_CASE("label maps transform with nearest neighbor") {
    LabelMap m(6, 6);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x) m.at(x, y) = x < 3 ? 4 : 9;
    const LabelMap shifted = affine_transform_labels(m, 1.0, 0.0, 0.0, 1.0, 0.0);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x) {
            CHECK((shifted.at(x, y) == 4 || shifted.at(x, y) == 9));
            CHECK(shifted.at(x, y) == (x < 4 ? 4 : 9));
        }
}

TEST_CASE("perturbations preserve geometry and are seed-reproducible") {
    Rng rng(8);
    const Image img = oracle::random_image(rng, 18, 12, 3);
    for (auto kind : {PerturbationKind::salt_pepper, PerturbationKind::gaussian_noise,
                      PerturbationKind::box_blur, PerturbationKind::gaussian_blur,
                      PerturbationKind::affine}) {
        Perturbation p;
        p.kind = kind;
        p.magnitude = kind == PerturbationKind::box_blur ? 3 : 0.1;
        p.seed = 77;
        const Image out = apply_perturbation(img, p);
        CHECK(out.width == img.width);
        CHECK(out.height == img.height);
        CHECK(out.channels == img.channels);
        CHECK(apply_perturbation(img, p).data == out.data);
    }
}

TEST_CASE("sweep at magnitude zero equals the clean benchmark") {
    std::vector<DatasetEntry> entries;
    for (std::uint64_t seed : {1, 2}) {
        SyntheticSpec spec;
        spec.width = 64;
        spec.height = 48;
        spec.seed = seed;
        entries.push_back(generate_synthetic_entry(spec));
    }
    AlgorithmParams params;
    params.k_desired = 60;

    const auto rows = robustness_sweep("slic", params, entries,
                                       PerturbationKind::salt_pepper, {0.0});
    REQUIRE(rows.size() == 1);

    std::vector<MetricRecord> clean;
    for (const auto& entry : entries) {
        const SegmentationResult seg = slic_segment(entry.image, params);
        clean.push_back(evaluate_entry(entry.image, entry.ground_truths, seg.labels));
    }
    const AggregateStats expected = aggregate(clean);
    CHECK(rows[0].stats.rec.mean == Catch::Approx(expected.rec.mean).margin(1e-12));
    CHECK(rows[0].stats.ue_np.mean == Catch::Approx(expected.ue_np.mean).margin(1e-12));
    CHECK(rows[0].stats.ev.mean == Catch::Approx(expected.ev.mean).margin(1e-12));
    CHECK(rows[0].k_raw_std >= 0.0);

    CHECK_THROWS(robustness_sweep("slic", params, entries,
                                  PerturbationKind::salt_pepper, {}));
}

TEST_CASE("sweep emits one row per magnitude in order") {
    std::vector<DatasetEntry> entries;
    SyntheticSpec spec;
    spec.width = 48;
    spec.height = 36;
    spec.seed = 9;
    entries.push_back(generate_synthetic_entry(spec));
    AlgorithmParams params;
    params.k_desired = 40;
    const std::vector<double> magnitudes = {0.0, 0.08, 0.16};
    const auto rows = robustness_sweep("slic", params, entries,
                                       PerturbationKind::salt_pepper, magnitudes);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(rows[i].magnitude == magnitudes[i]);
}
