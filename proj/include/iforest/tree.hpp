#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>

#include "iforest/core.hpp"
#include "iforest/divergence.hpp"
#include "iforest/rng.hpp"
#include "iforest/stumps.hpp"

namespace iforest {

enum class NodeKind { leaf, h_node, kl_node };

/// Which rule picks internal nodes. divergence_gated is the full method:
/// entropy-split when the node divergence clears tau, otherwise group with a
/// KL split. entropy_only always entropy-splits (the plain random-forest
/// reference path); it still records node divergence for inspection so the
/// two rules produce comparable trees.
enum class SplitRule { divergence_gated, entropy_only };

enum class Resample { bootstrap, subsample, none };

/// Every training hyperparameter. One snapshot of this is stored in each
/// trained forest.
struct TrainConfig {
    double tau = 0.5;    // divergence confidence threshold, nats
    double delta = 0.01; // minimum information gain, nats
    std::uint32_t max_depth = 64;
    std::uint32_t min_samples = 2;
    PoolConfig pool;
    DivergenceConfig divergence;
    SplitRule rule = SplitRule::divergence_gated;
    Resample resample = Resample::bootstrap; // per-tree data resampling
    double subsample_fraction = 0.632;       // used when resample == subsample
};

void validate_config(const TrainConfig& cfg);

/// Filled in during training; serialized with the model.
struct NodeDiagnostics {
    std::optional<double> divergence;  // node divergence, when it was computed
    std::optional<double> split_score; // winning candidate's score
    std::uint32_t n_samples = 0;       // view size at training time
};

/// Tagged tree node. Exactly one of {leaf fields, stump+children} is active.
struct Node {
    NodeKind kind = NodeKind::leaf;
    std::optional<Stump> stump;  // internal nodes only
    std::unique_ptr<Node> ge;    // child for projection >= threshold
    std::unique_ptr<Node> lt;    // child for projection < threshold
    int leaf_label = 0;          // leaf only
    double leaf_posterior = 0.0; // P(label = 1 | node) at training time
    NodeDiagnostics diag;

    bool is_leaf() const { return kind == NodeKind::leaf; }
};

/// Grows one node (and recursively its subtree):
///   (a) forced leaf on a pure view, too few samples, depth cap, or no
///       candidate split;
///   (b) estimate the node divergence d over a fresh random pool;
///   (c) d > tau: pick the entropy-minimizing stump; leaf if the information
///       gain is at most delta, else an H-node;
///   (d) d <= tau: pick the divergence-maximizing stump and emit a KL-node.
/// Deterministic given (data, view, cfg, generator state, depth).
std::unique_ptr<Node> train_node(const Dataset& data, const SampleView& view,
                                 const TrainConfig& cfg, Rng& rng, std::uint32_t depth = 0);

struct TreePrediction {
    int label = 0;
    double posterior = 0.0;
};

/// Runs the cascade of stump tests; ">=" descends into the ge child.
TreePrediction predict_tree(const Node& root, std::span<const double> features);

/// Structural summary of one tree.
struct TreeStats {
    std::uint32_t depth = 0;
    std::uint32_t n_kl_nodes = 0;
    std::uint32_t n_h_nodes = 0;
    std::uint32_t n_leaves = 0;
    // Twice the smaller child fraction, minimized over internal nodes;
    // 1 for a perfectly balanced (or single-leaf) tree.
    double balance = 1.0;
};

TreeStats tree_stats(const Node& root);

} // namespace iforest
