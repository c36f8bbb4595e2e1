#pragma once

// Replays training data through a trained tree and verifies the recorded
// structure against freshly recomputed quantities.

#include <cmath>
#include <cstdint>
#include <string>

#include "iforest/divergence.hpp"
#include "iforest/tree.hpp"

namespace tree_checks {

struct ReplayReport {
    std::uint64_t leaves_visited = 0;
    std::uint64_t h_nodes = 0;
    std::uint64_t kl_nodes = 0;
    std::uint32_t max_depth_seen = 0;
    bool ok = true;
    std::string failure;
};

inline void fail(ReplayReport& report, const std::string& what) {
    if (report.ok) {
        report.ok = false;
        report.failure = what;
    }
}

// Routes the view down the tree exactly as training did and checks:
//  - every node's recorded sample count matches the replayed view,
//  - H-node information gain (recomputed entropy minus the recorded score)
//    exceeds delta, and the recorded score matches a recomputation,
//  - leaf posteriors equal the in-leaf label fraction,
//  - depth never exceeds the configured cap.
inline void replay(const iforest::Dataset& data, const iforest::SampleView& view,
                   const iforest::Node& node, const iforest::TrainConfig& cfg,
                   std::uint32_t depth, ReplayReport& report) {
    using namespace iforest;

    report.max_depth_seen = std::max(report.max_depth_seen, depth);
    if (depth > cfg.max_depth) fail(report, "depth cap exceeded");
    if (node.diag.n_samples != view.size()) fail(report, "recorded sample count mismatch");

    const LabelDistribution dist = label_distribution(data, view);
    if (node.is_leaf()) {
        ++report.leaves_visited;
        const double fraction = dist.empty() ? 0.0
                                             : static_cast<double>(dist.count1) /
                                                   static_cast<double>(dist.total());
        if (node.leaf_posterior != fraction) fail(report, "leaf posterior mismatch");
        const int expected_label = fraction > 0.5 ? 1 : 0;
        if (node.leaf_label != expected_label) fail(report, "leaf label mismatch");
        return;
    }

    if (!node.stump || !node.ge || !node.lt) {
        fail(report, "internal node missing stump or children");
        return;
    }
    if (node.kind == NodeKind::h_node) {
        ++report.h_nodes;
        if (!node.diag.split_score) {
            fail(report, "h-node missing split score");
        } else {
            const double recomputed = score_entropy_split(data, view, *node.stump);
            if (recomputed != *node.diag.split_score)
                fail(report, "h-node split score mismatch");
            if (!(entropy(dist) - *node.diag.split_score > cfg.delta))
                fail(report, "h-node gain not above delta");
        }
    } else {
        ++report.kl_nodes;
    }

    auto [ge, lt] = partition(data, view, *node.stump);
    if (ge.empty() || lt.empty()) fail(report, "internal node with an empty child");
    replay(data, ge, *node.ge, cfg, depth + 1, report);
    replay(data, lt, *node.lt, cfg, depth + 1, report);
}

inline ReplayReport replay_tree(const iforest::Dataset& data, const iforest::Node& root,
                                const iforest::TrainConfig& cfg) {
    ReplayReport report;
    replay(data, iforest::SampleView::full(data), root, cfg, 0, report);
    if (report.leaves_visited == 0) fail(report, "no leaves reached");
    return report;
}

} // namespace tree_checks
