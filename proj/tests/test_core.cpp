#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "iforest/core.hpp"
#include "iforest/rng.hpp"

using namespace iforest;

namespace {

Dataset make_1d(std::vector<double> values, std::vector<std::uint8_t> labels) {
    return Dataset(std::move(values), std::move(labels), 1);
}

} // namespace

TEST_CASE("dataset validates its invariants") {
    CHECK_THROWS_AS(Dataset({}, {}, 1), InvalidInputError);
    CHECK_THROWS_AS(Dataset({1.0, 2.0}, {0}, 1), InvalidInputError);
    CHECK_THROWS_AS(Dataset({1.0}, {2}, 1), InvalidInputError);
    CHECK_THROWS_AS(make_1d({std::nan("")}, {0}), InvalidInputError);
    CHECK_THROWS_AS(make_1d({std::numeric_limits<double>::infinity()}, {1}), InvalidInputError);

    const Dataset data({1.0, 2.0, 3.0, 4.0}, {0, 1}, 2);
    CHECK(data.size() == 2);
    CHECK(data.dimension() == 2);
    CHECK(data.feature(1, 0) == 3.0);
    CHECK(data.label(1) == 1);
}

TEST_CASE("sample views must be strictly ascending") {
    CHECK_THROWS_AS(SampleView(std::vector<std::uint32_t>{1, 1}), InvalidInputError);
    CHECK_THROWS_AS(SampleView(std::vector<std::uint32_t>{2, 1}), InvalidInputError);
    CHECK(SampleView(std::vector<std::uint32_t>{}).empty());
    CHECK(SampleView(std::vector<std::uint32_t>{0, 3, 9}).size() == 3);
}

TEST_CASE("projection evaluation") {
    const std::vector<double> y{3.0, 7.0};

    CHECK(evaluate(Projection::on_axis(1), y) == 7.0);
    CHECK(evaluate(Projection::along({1.0, 0.0}), y) == 3.0);
    CHECK(evaluate(Projection::along({0.6, 0.8}), std::vector<double>{1.0, 1.0}) ==
          doctest::Approx(1.4).epsilon(1e-12));

    CHECK_THROWS_AS(evaluate(Projection::on_axis(2), y), InvalidInputError);
    CHECK_THROWS_AS(evaluate(Projection::along({1.0, 0.0, 0.0}), y), InvalidInputError);
    CHECK_THROWS_AS(Projection::along({0.0, 0.0}), InvalidInputError);
    CHECK_THROWS_AS(Projection::along({}), InvalidInputError);
}

TEST_CASE("linear projections are stored unit norm") {
    const Projection p = Projection::along({3.0, 4.0});
    CHECK(p.weights[0] == doctest::Approx(0.6));
    CHECK(p.weights[1] == doctest::Approx(0.8));
}

TEST_CASE("axis evaluation ignores untouched dimensions") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> y(4);
        for (double& v : y) v = rng.uniform(-5.0, 5.0);
        const double val = evaluate(Projection::on_axis(2), y);
        std::swap(y[0], y[3]);
        std::swap(y[1], y[0]);
        CHECK(evaluate(Projection::on_axis(2), y) == val);
    }
}

TEST_CASE("partition splits by the >= rule") {
    const Dataset data = make_1d({1.0, 5.0, 9.0}, {0, 1, 0});
    const SampleView view = SampleView::full(data);

    auto [ge, lt] = partition(data, view, axis_stump(0, 4.0));
    CHECK(ge.indices() == std::vector<std::uint32_t>{1, 2});
    CHECK(lt.indices() == std::vector<std::uint32_t>{0});

    auto [all, none] = partition(data, view, axis_stump(0, -10.0));
    CHECK(all.size() == 3);
    CHECK(none.empty());

    auto [empty, full] = partition(data, view, axis_stump(0, 100.0));
    CHECK(empty.empty());
    CHECK(full.size() == 3);
}

TEST_CASE("threshold ties land on the >= side") {
    const Dataset data = make_1d({2.0, 2.0, 3.0}, {0, 1, 0});
    auto [ge, lt] = partition(data, SampleView::full(data), axis_stump(0, 2.0));
    CHECK(ge.size() == 3);
    CHECK(lt.empty());
}

TEST_CASE("partition is an exhaustive partition for random stumps") {
    Rng rng(202);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + rng.below(60);
        std::vector<double> features(n * 3);
        std::vector<std::uint8_t> labels(n);
        for (double& v : features) v = rng.uniform(-2.0, 2.0);
        for (auto& l : labels) l = static_cast<std::uint8_t>(rng.below(2));
        const Dataset data(std::move(features), std::move(labels), 3);

        std::vector<std::uint32_t> subset;
        for (std::uint32_t i = 0; i < n; ++i)
            if (rng.below(2) == 0) subset.push_back(i);
        if (subset.empty()) continue;
        const SampleView view(subset);

        const Stump stump = trial % 2 == 0
                                ? axis_stump(static_cast<std::uint32_t>(rng.below(3)),
                                             rng.uniform(-2.0, 2.0))
                                : linear_stump({rng.gaussian(), rng.gaussian(), 1e-3},
                                               rng.uniform(-2.0, 2.0));
        auto [ge, lt] = partition(data, view, stump);

        CHECK(ge.size() + lt.size() == view.size());
        CHECK(std::is_sorted(ge.begin(), ge.end()));
        CHECK(std::is_sorted(lt.begin(), lt.end()));
        std::vector<std::uint32_t> merged(ge.begin(), ge.end());
        merged.insert(merged.end(), lt.begin(), lt.end());
        std::sort(merged.begin(), merged.end());
        CHECK(merged == view.indices());
    }
}

TEST_CASE("label distribution counts") {
    const Dataset data = make_1d({0.0, 1.0, 2.0}, {1, 1, 0});
    const LabelDistribution d = label_distribution(data, SampleView::full(data));
    CHECK(d.count0 == 1);
    CHECK(d.count1 == 2);
    CHECK(d.total() == 3);

    const LabelDistribution empty = label_distribution(data, SampleView(std::vector<std::uint32_t>{}));
    CHECK(empty.count0 == 0);
    CHECK(empty.count1 == 0);
    CHECK(empty.empty());
}

TEST_CASE("label distribution depends only on the index set") {
    const Dataset data = make_1d({0.0, 1.0, 2.0, 3.0, 4.0}, {1, 0, 1, 1, 0});
    // Same set, assembled two different ways.
    auto [ge, lt] = partition(data, SampleView::full(data), axis_stump(0, 2.5));
    const LabelDistribution via_partition = label_distribution(data, ge);
    const LabelDistribution direct = label_distribution(data, SampleView(std::vector<std::uint32_t>{3, 4}));
    CHECK(via_partition.count0 == direct.count0);
    CHECK(via_partition.count1 == direct.count1);
}

TEST_CASE("gather_rows copies rows with duplicates") {
    const Dataset data({1.0, 10.0, 2.0, 20.0, 3.0, 30.0}, {0, 1, 0}, 2);
    const std::vector<std::uint32_t> rows{1, 1, 2};
    const Dataset picked = gather_rows(data, rows);
    CHECK(picked.size() == 3);
    CHECK(picked.feature(0, 1) == 20.0);
    CHECK(picked.feature(1, 0) == 2.0);
    CHECK(picked.label(0) == 1);
    CHECK(picked.label(2) == 0);
}
