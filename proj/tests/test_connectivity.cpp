#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "spix/connectivity.hpp"

using namespace spix;

TEST_CASE("connected_components on a constant map") {
    const LabelMap m(2, 2, 7);
    const auto [out, count] = connected_components(m);
    CHECK(count == 1);
    CHECK(out.labels == std::vector<std::uint32_t>{0, 0, 0, 0});
}

TEST_CASE("diagonals are not 4-connected") {
    LabelMap m(2, 2);
    m.labels = {1, 2, 2, 1};
    const auto [out, count] = connected_components(m);
    CHECK(count == 4);
    CHECK(out.labels == std::vector<std::uint32_t>{0, 1, 2, 3});
}

TEST_CASE("a label split by another becomes two components") {
    LabelMap m(3, 3);
    m.labels = {5, 5, 9,
                9, 9, 9,
                5, 5, 9};
    const auto [out, count] = connected_components(m);
    CHECK(count == 3);
    // raster order of first pixels: the top 5s, then the 9s, then the lower 5s
    CHECK(out.labels == std::vector<std::uint32_t>{0, 0, 1, 1, 1, 1, 2, 2, 1});
}

TEST_CASE("min_size 0 is exactly the component relabeling") {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const LabelMap m = oracle::random_label_map(rng, 12, 9, 7);
        const LabelMap enforced = enforce_connectivity(m, 0);
        const auto [cc, count] = connected_components(m);
        CHECK(enforced.labels == cc.labels);
    }
}

TEST_CASE("checkerboard of 2x2 blocks collapses under min_size 5") {
    LabelMap m(4, 4);
    m.labels = {7, 7, 3, 3,
                7, 7, 3, 3,
                3, 3, 7, 7,
                3, 3, 7, 7};
    const LabelMap out = enforce_connectivity(m, 5);
    CHECK(count_labels(out) == 1);
    CHECK(out.labels == std::vector<std::uint32_t>(16, 0));
}

TEST_CASE("stray fragment is absorbed by the neighbor with most contact") {
    // center pixel is its own label; 3 of its edges touch the 1-region and
    // only 1 touches the 0-region
    LabelMap m(3, 3);
    m.labels = {0, 0, 0,
                1, 8, 1,
                1, 1, 1};
    const LabelMap out = enforce_connectivity(m, 2);
    CHECK(count_labels(out) == 2);
    CHECK(out.at(1, 1) == out.at(2, 1));  // fragment joined the 1-region
    CHECK(out.at(0, 0) != out.at(1, 1));

    // contact ties resolve toward the lower component id (the raster-first 0s)
    LabelMap tie(3, 3);
    tie.labels = {0, 0, 0,
                  0, 8, 1,
                  0, 1, 1};
    const LabelMap tie_out = enforce_connectivity(tie, 2);
    CHECK(tie_out.at(1, 1) == tie_out.at(0, 0));
}

TEST_CASE("enforcement postconditions hold on random maps") {
    Rng rng(1234);
    for (int trial = 0; trial < 30; ++trial) {
        const int w = 6 + int(rng.next_below(12));
        const int h = 6 + int(rng.next_below(12));
        const LabelMap m = oracle::random_label_map(rng, w, h, 1 + int(rng.next_below(9)));
        for (std::size_t min_size : {std::size_t(0), std::size_t(3), std::size_t(9)}) {
            const LabelMap out = enforce_connectivity(m, min_size);
            REQUIRE(out.labels.size() == m.labels.size());
            CHECK(oracle::all_labels_connected(out));

            // second enforcement is a fixed point
            const LabelMap again = enforce_connectivity(out, min_size);
            CHECK(again.labels == out.labels);

            // relabeling the result splits nothing
            const auto [cc, count] = connected_components(out);
            CHECK(oracle::same_partition(out, cc));

            // all surviving components meet the size bound (or the image
            // collapsed into one label)
            std::map<std::uint32_t, std::size_t> sizes;
            for (auto l : out.labels) sizes[l]++;
            if (sizes.size() > 1)
                for (const auto& [label, size] : sizes) CHECK(size >= min_size);
        }
    }
}
