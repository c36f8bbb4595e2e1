#include <doctest.h>

#include <cmath>
#include <functional>

#include "iforest/datagen.hpp"
#include "iforest/tree.hpp"
#include "oracles.hpp"
#include "tree_checks.hpp"

using namespace iforest;

namespace {

TrainConfig axis_only_config() {
    TrainConfig cfg;
    cfg.pool = {2, 0, 8};
    cfg.resample = Resample::none;
    return cfg;
}

Dataset random_labeled(Rng& rng, std::size_t n, std::size_t dim) {
    std::vector<double> features(n * dim);
    std::vector<std::uint8_t> labels(n);
    for (double& v : features) v = rng.uniform(-2.0, 2.0);
    for (auto& l : labels) l = static_cast<std::uint8_t>(rng.below(2));
    labels[0] = 0;
    if (n > 1) labels[1] = 1; // both classes present
    return Dataset(std::move(features), std::move(labels), dim);
}

std::uint32_t count_kind(const Node& node, NodeKind kind) {
    if (node.is_leaf()) return node.kind == kind ? 1u : 0u;
    return (node.kind == kind ? 1u : 0u) + count_kind(*node.ge, kind) +
           count_kind(*node.lt, kind);
}

} // namespace

TEST_CASE("pure views become leaves immediately") {
    const Dataset data({1.0, 2.0, 3.0}, {1, 1, 1}, 1);
    Rng rng(1);
    const auto node = train_node(data, SampleView::full(data), axis_only_config(), rng);
    REQUIRE(node->is_leaf());
    CHECK(node->leaf_label == 1);
    CHECK(node->leaf_posterior == 1.0);
    CHECK_FALSE(node->stump.has_value());
    CHECK(node->diag.n_samples == 3);
}

TEST_CASE("empty views are rejected") {
    const Dataset data({1.0}, {1}, 1);
    Rng rng(1);
    CHECK_THROWS_AS(train_node(data, SampleView(std::vector<std::uint32_t>{}), axis_only_config(), rng),
                    InvalidInputError);
}

TEST_CASE("interleaved line under a large tau roots at a KL node") {
    // Four alternating points: the class-conditional histograms coincide at
    // the root, so the divergence test fails and the grouping rule picks the
    // threshold the exhaustive weighted-divergence search prefers.
    const Dataset data({0.0, 1.0, 2.0, 3.0}, {1, 0, 1, 0}, 1);
    TrainConfig cfg;
    cfg.tau = 10.0;
    cfg.delta = 0.0;
    cfg.pool = {1, 0, 3};
    cfg.divergence.bins = 2;
    cfg.resample = Resample::none;

    const FeaturePool pool{{Projection::on_axis(0)}, 0};
    double best_theta = 0.0, best_score = -1.0;
    for (double theta : {0.5, 1.5, 2.5}) {
        const double s = oracle::kl_split_score(data, SampleView::full(data).indices(),
                                                axis_stump(0, theta), pool.projections, 2, 1.0);
        if (s > best_score) {
            best_score = s;
            best_theta = theta;
        }
    }
    CHECK(best_theta == 1.5);

    Rng rng(3);
    const auto root = train_node(data, SampleView::full(data), cfg, rng);
    REQUIRE_FALSE(root->is_leaf());
    CHECK(root->kind == NodeKind::kl_node);
    CHECK(root->stump->threshold == best_theta);
    CHECK(*root->diag.split_score == doctest::Approx(best_score).epsilon(1e-12));
    CHECK(root->diag.divergence.has_value());
    CHECK(*root->diag.divergence <= 10.0);
}

TEST_CASE("tau zero grows entropy-only trees") {
    Rng data_rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const Dataset data = random_labeled(data_rng, 40 + data_rng.below(100), 2);
        TrainConfig cfg = axis_only_config();
        cfg.tau = 0.0;
        cfg.pool = {2, 1, 8};
        Rng rng(trial);
        const auto root = train_node(data, SampleView::full(data), cfg, rng);
        CHECK(count_kind(*root, NodeKind::kl_node) == 0);
    }
}

TEST_CASE("a tau above the smoothing ceiling grows grouping-only trees") {
    Rng data_rng(18);
    for (int trial = 0; trial < 10; ++trial) {
        const Dataset data = random_labeled(data_rng, 40 + data_rng.below(100), 2);
        TrainConfig cfg = axis_only_config();
        cfg.tau = 1e9;
        Rng rng(trial);
        const auto root = train_node(data, SampleView::full(data), cfg, rng);
        CHECK(count_kind(*root, NodeKind::h_node) == 0);
    }
}

TEST_CASE("prediction follows the stump cascade") {
    Node leaf;
    leaf.leaf_label = 0;
    leaf.leaf_posterior = 0.2;
    CHECK(predict_tree(leaf, std::vector<double>{5.0, -3.0}).label == 0);
    CHECK(predict_tree(leaf, std::vector<double>{5.0, -3.0}).posterior == 0.2);

    Node root;
    root.kind = NodeKind::h_node;
    root.stump = axis_stump(0, 0.0);
    root.ge = std::make_unique<Node>();
    root.ge->leaf_label = 1;
    root.ge->leaf_posterior = 1.0;
    root.lt = std::make_unique<Node>();
    root.lt->leaf_label = 0;
    root.lt->leaf_posterior = 0.0;

    CHECK(predict_tree(root, std::vector<double>{0.5, 9.0}).label == 1);
    CHECK(predict_tree(root, std::vector<double>{-1.0, 9.0}).label == 0);
    CHECK(predict_tree(root, std::vector<double>{0.0, 9.0}).label == 1); // tie -> ge side
}

TEST_CASE("an unconstrained tree replays its training data perfectly") {
    const Dataset data = gen_blobs(150, 6.0, 5);
    TrainConfig cfg;
    cfg.delta = 0.0;
    cfg.max_depth = 64;
    cfg.resample = Resample::none;
    Rng rng(9);
    const auto root = train_node(data, SampleView::full(data), cfg, rng);
    for (std::size_t i = 0; i < data.size(); ++i)
        CHECK(predict_tree(*root, data.row(i)).label == data.label(i));
}

TEST_CASE("tree statistics") {
    Node leaf;
    leaf.diag.n_samples = 10;
    const TreeStats single = tree_stats(leaf);
    CHECK(single.depth == 0);
    CHECK(single.n_kl_nodes == 0);
    CHECK(single.n_h_nodes == 0);
    CHECK(single.n_leaves == 1);
    CHECK(single.balance == 1.0);

    // Hand-built perfect depth-2 tree with equal splits.
    auto make_leaf_node = [](std::uint32_t n) {
        auto node = std::make_unique<Node>();
        node->diag.n_samples = n;
        return node;
    };
    auto make_internal = [](NodeKind kind, std::uint32_t n, std::unique_ptr<Node> ge,
                            std::unique_ptr<Node> lt) {
        auto node = std::make_unique<Node>();
        node->kind = kind;
        node->stump = axis_stump(0, 0.0);
        node->diag.n_samples = n;
        node->ge = std::move(ge);
        node->lt = std::move(lt);
        return node;
    };
    auto root = make_internal(
        NodeKind::kl_node, 8,
        make_internal(NodeKind::h_node, 4, make_leaf_node(2), make_leaf_node(2)),
        make_internal(NodeKind::h_node, 4, make_leaf_node(2), make_leaf_node(2)));

    const TreeStats stats = tree_stats(*root);
    CHECK(stats.depth == 2);
    CHECK(stats.n_kl_nodes == 1);
    CHECK(stats.n_h_nodes == 2);
    CHECK(stats.n_leaves == 4);
    CHECK(stats.balance == 1.0);
    CHECK(stats.n_leaves == stats.n_kl_nodes + stats.n_h_nodes + 1);
}

TEST_CASE("leaf count equals internal nodes plus one on trained trees") {
    Rng data_rng(23);
    for (int trial = 0; trial < 8; ++trial) {
        const Dataset data = random_labeled(data_rng, 30 + data_rng.below(80), 3);
        TrainConfig cfg;
        cfg.pool = {2, 2, 6};
        cfg.tau = trial % 2 == 0 ? 0.2 : 0.8;
        cfg.resample = Resample::none;
        Rng rng(trial * 7 + 1);
        const auto root = train_node(data, SampleView::full(data), cfg, rng);
        const TreeStats stats = tree_stats(*root);
        CHECK(stats.n_leaves == stats.n_kl_nodes + stats.n_h_nodes + 1);
        CHECK(stats.balance > 0.0);
        CHECK(stats.balance <= 1.0);
    }
}

TEST_CASE("training is deterministic in the generator seed") {
    Rng data_rng(29);
    const Dataset data = random_labeled(data_rng, 120, 2);
    TrainConfig cfg;
    cfg.resample = Resample::none;

    Rng r1(1234), r2(1234), r3(77);
    const auto a = train_node(data, SampleView::full(data), cfg, r1);
    const auto b = train_node(data, SampleView::full(data), cfg, r2);
    const auto c = train_node(data, SampleView::full(data), cfg, r3);

    const TreeStats sa = tree_stats(*a), sb = tree_stats(*b);
    CHECK(sa.depth == sb.depth);
    CHECK(sa.n_kl_nodes == sb.n_kl_nodes);
    CHECK(sa.n_leaves == sb.n_leaves);
    // Same structure all the way down.
    std::function<void(const Node&, const Node&)> compare = [&](const Node& x, const Node& y) {
        CHECK(x.kind == y.kind);
        CHECK(x.diag.n_samples == y.diag.n_samples);
        if (!x.is_leaf() && !y.is_leaf()) {
            CHECK(x.stump->threshold == y.stump->threshold);
            compare(*x.ge, *y.ge);
            compare(*x.lt, *y.lt);
        }
    };
    compare(*a, *b);
    (void)c;
}

TEST_CASE("depth and size guards hold") {
    Rng data_rng(31);
    const Dataset data = random_labeled(data_rng, 200, 2);

    TrainConfig shallow;
    shallow.max_depth = 3;
    shallow.delta = 0.0;
    shallow.resample = Resample::none;
    Rng rng(5);
    const auto root = train_node(data, SampleView::full(data), shallow, rng);
    CHECK(tree_stats(*root).depth <= 3);

    TrainConfig chunky;
    chunky.min_samples = 120;
    chunky.delta = 0.0;
    chunky.resample = Resample::none;
    Rng rng2(5);
    const auto coarse = train_node(data, SampleView::full(data), chunky, rng2);
    // Any node smaller than min_samples must be a leaf.
    std::function<void(const Node&)> check_sizes = [&](const Node& node) {
        if (node.is_leaf()) return;
        CHECK(node.diag.n_samples >= 120);
        check_sizes(*node.ge);
        check_sizes(*node.lt);
    };
    check_sizes(*coarse);
}

TEST_CASE("a forced leaf at an exact tie predicts label 0") {
    const Dataset data({1.0, 2.0}, {1, 0}, 1);
    TrainConfig cfg;
    cfg.max_depth = 1;
    cfg.min_samples = 3; // force the root into a leaf
    cfg.resample = Resample::none;
    Rng rng(1);
    const auto root = train_node(data, SampleView::full(data), cfg, rng);
    REQUIRE(root->is_leaf());
    CHECK(root->leaf_posterior == 0.5);
    CHECK(root->leaf_label == 0);
}

TEST_CASE("replay validates recorded gains, counts, and posteriors") {
    Rng data_rng(37);
    for (int trial = 0; trial < 12; ++trial) {
        const Dataset data = random_labeled(data_rng, 20 + data_rng.below(150), 2);
        TrainConfig cfg;
        cfg.tau = trial % 3 == 0 ? 0.0 : 0.4;
        cfg.delta = trial % 2 == 0 ? 0.0 : 0.05;
        cfg.max_depth = 16;
        cfg.resample = Resample::none;
        Rng rng(trial + 100);
        const auto root = train_node(data, SampleView::full(data), cfg, rng);
        const auto report = tree_checks::replay_tree(data, *root, cfg);
        INFO(report.failure);
        CHECK(report.ok);
        CHECK(report.leaves_visited == tree_stats(*root).n_leaves);
    }
}
