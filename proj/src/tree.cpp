#include "iforest/tree.hpp"

#include <algorithm>
#include <cmath>

namespace iforest {

void validate_config(const TrainConfig& cfg) {
    if (!(cfg.tau >= 0.0) || !std::isfinite(cfg.tau))
        throw InvalidInputError("tau must be nonnegative and finite");
    if (!(cfg.delta >= 0.0) || !std::isfinite(cfg.delta))
        throw InvalidInputError("delta must be nonnegative and finite");
    if (cfg.max_depth == 0) throw InvalidInputError("max_depth must be at least 1");
    if (cfg.min_samples == 0) throw InvalidInputError("min_samples must be at least 1");
    if (cfg.pool.n_axis + cfg.pool.n_linear == 0)
        throw InvalidInputError("pool must request at least one projection");
    if (cfg.pool.n_thresholds == 0) throw InvalidInputError("n_thresholds must be at least 1");
    if (cfg.divergence.bins < 2) throw InvalidInputError("divergence needs at least 2 bins");
    if (!(cfg.divergence.smoothing > 0.0) || !std::isfinite(cfg.divergence.smoothing))
        throw InvalidInputError("smoothing must be positive and finite");
    if (cfg.resample == Resample::subsample &&
        !(cfg.subsample_fraction > 0.0 && cfg.subsample_fraction <= 1.0))
        throw InvalidInputError("subsample_fraction must be in (0, 1]");
}

namespace {

std::unique_ptr<Node> make_leaf(const LabelDistribution& dist, NodeDiagnostics diag) {
    auto node = std::make_unique<Node>();
    node->kind = NodeKind::leaf;
    node->leaf_posterior =
        dist.empty() ? 0.0
                     : static_cast<double>(dist.count1) / static_cast<double>(dist.total());
    node->leaf_label = node->leaf_posterior > 0.5 ? 1 : 0; // tie goes to 0
    node->diag = std::move(diag);
    return node;
}

struct BestSplit {
    bool found = false;
    std::size_t pool_index = 0;
    double threshold = 0.0;
    double score = 0.0;
};

// Per-node scratch: every pool projection evaluated once over the view, so
// the candidate search never re-projects samples. All scores computed from
// these columns are bit-identical to the public score functions.
struct NodeColumns {
    std::vector<std::vector<double>> values; // [projection][position in view]
    std::vector<std::uint8_t> labels;        // [position in view]
    std::vector<std::uint8_t> side;          // candidate membership scratch
    std::vector<double> class1, class0;      // gather scratch

    NodeColumns(const Dataset& data, const SampleView& view, const FeaturePool& pool) {
        const std::size_t n = view.size();
        values.resize(pool.projections.size());
        labels.resize(n);
        side.resize(n);
        for (std::size_t j = 0; j < n; ++j)
            labels[j] = static_cast<std::uint8_t>(data.label(view[j]));
        for (std::size_t p = 0; p < pool.projections.size(); ++p) {
            values[p].resize(n);
            for (std::size_t j = 0; j < n; ++j)
                values[p][j] = evaluate(pool.projections[p], data.row(view[j]));
        }
    }

    std::size_t size() const { return labels.size(); }

    double entropy_score(std::size_t p, double theta) {
        LabelDistribution ge, lt;
        for (std::size_t j = 0; j < size(); ++j) {
            LabelDistribution& bucket = values[p][j] >= theta ? ge : lt;
            if (labels[j] == 1)
                ++bucket.count1;
            else
                ++bucket.count0;
        }
        return split_entropy(ge, lt);
    }

    double kl_score(std::size_t p, double theta, const DivergenceConfig& cfg) {
        const std::size_t n = size();
        std::uint64_t counts[2][2] = {{0, 0}, {0, 0}}; // [side][label]
        for (std::size_t j = 0; j < n; ++j) {
            side[j] = values[p][j] >= theta ? 1 : 0;
            ++counts[side[j]][labels[j]];
        }
        double score = 0.0;
        for (std::uint8_t member : {std::uint8_t{1}, std::uint8_t{0}}) { // ge first
            const std::uint64_t n0 = counts[member][0], n1 = counts[member][1];
            if (n0 == 0 || n1 == 0) continue; // empty or single-class child
            double child_best = 0.0;
            for (std::size_t q = 0; q < values.size(); ++q) {
                class1.clear();
                class0.clear();
                for (std::size_t j = 0; j < n; ++j) {
                    if (side[j] != member) continue;
                    (labels[j] == 1 ? class1 : class0).push_back(values[q][j]);
                }
                child_best = std::max(child_best, projection_divergence(class1, class0, cfg));
            }
            score += static_cast<double>(n0 + n1) / static_cast<double>(n) * child_best;
        }
        return score;
    }
};

} // namespace

std::unique_ptr<Node> train_node(const Dataset& data, const SampleView& view,
                                 const TrainConfig& cfg, Rng& rng, std::uint32_t depth) {
    validate_config(cfg);
    if (view.empty()) throw InvalidInputError("cannot train a node on an empty view");

    const LabelDistribution dist = label_distribution(data, view);
    NodeDiagnostics diag;
    diag.n_samples = static_cast<std::uint32_t>(view.size());

    // Forced-leaf guards: nothing left to separate, too small, or too deep.
    if (dist.pure() || view.size() < cfg.min_samples || depth >= cfg.max_depth)
        return make_leaf(dist, std::move(diag));

    // One fresh pool per node, shared by the divergence estimate and the
    // split search so both see the same candidates.
    const FeaturePool pool = generate_pool(data.dimension(), cfg.pool, rng);

    BestSplit best;
    NodeKind kind;
    {
        NodeColumns columns(data, view, pool);

        std::vector<std::vector<double>> thresholds(pool.projections.size());
        bool any_candidate = false;
        {
            std::vector<double> sorted;
            for (std::size_t p = 0; p < pool.projections.size(); ++p) {
                sorted = columns.values[p];
                std::sort(sorted.begin(), sorted.end());
                thresholds[p] = candidate_thresholds_sorted(sorted, cfg.pool.n_thresholds);
                any_candidate = any_candidate || !thresholds[p].empty();
            }
        }
        if (!any_candidate) return make_leaf(dist, std::move(diag)); // all constant

        double node_div = 0.0;
        for (std::size_t p = 0; p < pool.projections.size(); ++p) {
            columns.class1.clear();
            columns.class0.clear();
            for (std::size_t j = 0; j < columns.size(); ++j)
                (columns.labels[j] == 1 ? columns.class1 : columns.class0)
                    .push_back(columns.values[p][j]);
            node_div = std::max(
                node_div, projection_divergence(columns.class1, columns.class0, cfg.divergence));
        }
        diag.divergence = node_div;

        const bool classify = cfg.rule == SplitRule::entropy_only || node_div > cfg.tau;
        if (classify) {
            // Confidence is high enough: minimize the children's label entropy.
            for (std::size_t p = 0; p < pool.projections.size(); ++p)
                for (double theta : thresholds[p]) {
                    const double s = columns.entropy_score(p, theta);
                    if (!best.found || s < best.score) best = {true, p, theta, s};
                }
            diag.split_score = best.score;
            const double gain = entropy(dist) - best.score;
            if (gain <= cfg.delta) return make_leaf(dist, std::move(diag));
            kind = NodeKind::h_node;
        } else {
            // Classes still look alike: regroup by maximizing the children's
            // class-conditional divergence.
            for (std::size_t p = 0; p < pool.projections.size(); ++p)
                for (double theta : thresholds[p]) {
                    const double s = columns.kl_score(p, theta, cfg.divergence);
                    if (!best.found || s > best.score) best = {true, p, theta, s};
                }
            if (!best.found) return make_leaf(dist, std::move(diag));
            diag.split_score = best.score;
            kind = NodeKind::kl_node;
        }
    } // scratch columns released before recursing

    const Stump stump{pool.projections[best.pool_index], best.threshold};
    auto [ge, lt] = partition(data, view, stump);
    if (ge.empty() || lt.empty()) return make_leaf(dist, std::move(diag));

    auto node = std::make_unique<Node>();
    node->kind = kind;
    node->stump = stump;
    node->diag = std::move(diag);
    node->ge = train_node(data, ge, cfg, rng, depth + 1);
    node->lt = train_node(data, lt, cfg, rng, depth + 1);
    return node;
}

TreePrediction predict_tree(const Node& root, std::span<const double> features) {
    const Node* node = &root;
    while (!node->is_leaf()) {
        const double v = evaluate(*node->stump, features);
        node = v >= node->stump->threshold ? node->ge.get() : node->lt.get();
    }
    return {node->leaf_label, node->leaf_posterior};
}

namespace {

void walk_stats(const Node& node, std::uint32_t depth, TreeStats& stats) {
    if (node.is_leaf()) {
        ++stats.n_leaves;
        stats.depth = std::max(stats.depth, depth);
        return;
    }
    if (node.kind == NodeKind::kl_node)
        ++stats.n_kl_nodes;
    else
        ++stats.n_h_nodes;
    const double n = static_cast<double>(node.diag.n_samples);
    const double smaller =
        static_cast<double>(std::min(node.ge->diag.n_samples, node.lt->diag.n_samples));
    if (n > 0.0) stats.balance = std::min(stats.balance, 2.0 * smaller / n);
    walk_stats(*node.ge, depth + 1, stats);
    walk_stats(*node.lt, depth + 1, stats);
}

} // namespace

TreeStats tree_stats(const Node& root) {
    TreeStats stats;
    walk_stats(root, 0, stats);
    return stats;
}

} // namespace iforest
