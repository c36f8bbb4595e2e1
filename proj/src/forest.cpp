#include "iforest/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <json.hpp>

namespace iforest {

using nlohmann::json;

std::vector<std::uint32_t> bootstrap_indices(std::size_t n, Rng& rng) {
    if (n == 0) throw InvalidInputError("cannot resample an empty dataset");
    std::vector<std::uint32_t> out(n);
    for (auto& v : out) v = static_cast<std::uint32_t>(rng.below(n));
    return out;
}

std::vector<std::uint32_t> subsample_indices(std::size_t n, double fraction, Rng& rng) {
    if (n == 0) throw InvalidInputError("cannot resample an empty dataset");
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw InvalidInputError("subsample_fraction must be in (0, 1]");
    const std::size_t take =
        std::max<std::size_t>(1, static_cast<std::size_t>(fraction * static_cast<double>(n)));
    std::vector<std::uint32_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < take; ++i)
        std::swap(pool[i], pool[i + static_cast<std::size_t>(rng.below(n - i))]);
    pool.resize(take);
    std::sort(pool.begin(), pool.end());
    return pool;
}

namespace {

struct TreeJob {
    std::unique_ptr<Node> root;
    std::vector<bool> in_bag;       // per original sample
    double unique_fraction = 1.0;
};

TreeJob train_one_tree(const Dataset& data, const TrainConfig& cfg, std::uint64_t seed,
                       std::uint32_t tree_index) {
    Rng rng(Rng::mix(seed, tree_index));
    TreeJob job;
    job.in_bag.assign(data.size(), false);

    if (cfg.resample == Resample::none) {
        job.in_bag.assign(data.size(), true);
        job.root = train_node(data, SampleView::full(data), cfg, rng, 0);
        return job;
    }

    std::vector<std::uint32_t> bag = cfg.resample == Resample::bootstrap
                                         ? bootstrap_indices(data.size(), rng)
                                         : subsample_indices(data.size(), cfg.subsample_fraction, rng);
    std::size_t unique = 0;
    for (std::uint32_t i : bag) {
        if (!job.in_bag[i]) {
            job.in_bag[i] = true;
            ++unique;
        }
    }
    job.unique_fraction = static_cast<double>(unique) / static_cast<double>(data.size());

    std::sort(bag.begin(), bag.end());
    const Dataset resampled = gather_rows(data, bag);
    job.root = train_node(resampled, SampleView::full(resampled), cfg, rng, 0);
    return job;
}

} // namespace

TrainOutput train_forest_detailed(const Dataset& data, const TrainConfig& cfg,
                                  std::uint32_t n_trees, std::uint64_t seed, unsigned threads) {
    validate_config(cfg);
    if (n_trees == 0) throw InvalidInputError("n_trees must be at least 1");
    const LabelDistribution dist = label_distribution(data, SampleView::full(data));
    if (dist.count0 == 0 || dist.count1 == 0)
        throw InvalidInputError("training data must contain both classes");

    std::vector<TreeJob> jobs(n_trees);
    unsigned n_workers = threads != 0 ? threads : std::thread::hardware_concurrency();
    n_workers = std::max(1u, std::min<unsigned>(n_workers, n_trees));

    if (n_workers == 1) {
        for (std::uint32_t t = 0; t < n_trees; ++t) jobs[t] = train_one_tree(data, cfg, seed, t);
    } else {
        std::atomic<std::uint32_t> next{0};
        auto worker = [&] {
            for (std::uint32_t t = next.fetch_add(1); t < n_trees; t = next.fetch_add(1))
                jobs[t] = train_one_tree(data, cfg, seed, t);
        };
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    TrainOutput out;
    out.forest.config = cfg;
    out.forest.n_trees = n_trees;
    out.forest.dimension = data.dimension();
    out.forest.seed = seed;
    out.forest.trees.reserve(n_trees);
    for (auto& job : jobs) out.forest.trees.push_back(std::move(job.root));

    if (cfg.resample != Resample::none) {
        OobStats oob;
        double coverage = 0.0;
        for (const auto& job : jobs) coverage += job.unique_fraction;
        oob.in_bag_unique_fraction = coverage / n_trees;

        std::size_t counted = 0, wrong = 0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            std::uint32_t votes = 0, ones = 0;
            for (std::uint32_t t = 0; t < n_trees; ++t) {
                if (jobs[t].in_bag[i]) continue;
                ++votes;
                ones += predict_tree(*out.forest.trees[t], data.row(i)).label;
            }
            if (votes == 0) continue;
            ++counted;
            const int voted = 2 * ones > votes ? 1 : 0;
            if (voted != data.label(i)) ++wrong;
        }
        if (counted > 0) {
            oob.error = static_cast<double>(wrong) / static_cast<double>(counted);
            out.oob = oob;
        }
    }
    return out;
}

Forest train_forest(const Dataset& data, const TrainConfig& cfg, std::uint32_t n_trees,
                    std::uint64_t seed, unsigned threads) {
    return train_forest_detailed(data, cfg, n_trees, seed, threads).forest;
}

Prediction predict(const Forest& forest, std::span<const double> features) {
    if (features.size() != forest.dimension)
        throw DimensionError("feature vector dimension does not match the model");
    if (forest.trees.empty()) throw InvalidInputError("forest has no trees");

    std::uint32_t ones = 0;
    double posterior_sum = 0.0;
    for (const auto& tree : forest.trees) {
        const TreePrediction p = predict_tree(*tree, features);
        ones += static_cast<std::uint32_t>(p.label);
        posterior_sum += p.posterior;
    }
    Prediction out;
    const auto n = static_cast<std::uint32_t>(forest.trees.size());
    out.vote_fraction = static_cast<double>(ones) / n;
    out.mean_posterior = posterior_sum / n;
    out.label = 2 * ones > n ? 1 : 0;
    return out;
}

double accuracy(const Forest& forest, const Dataset& data) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i)
        if (predict(forest, data.row(i)).label == data.label(i)) ++correct;
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

// ---------------------------------------------------------------------------
// JSON model format
// ---------------------------------------------------------------------------

namespace {

json projection_to_json(const Projection& p) {
    if (p.kind == Projection::Kind::axis) return json{{"kind", "axis"}, {"axis", p.axis}};
    return json{{"kind", "linear"}, {"weights", p.weights}};
}

json node_to_json(const Node& node) {
    json diag;
    diag["n_samples"] = node.diag.n_samples;
    if (node.diag.divergence) diag["divergence"] = *node.diag.divergence;
    if (node.diag.split_score) diag["split_score"] = *node.diag.split_score;

    if (node.is_leaf())
        return json{{"kind", "leaf"},
                    {"label", node.leaf_label},
                    {"posterior", node.leaf_posterior},
                    {"diag", std::move(diag)}};

    return json{{"kind", node.kind == NodeKind::kl_node ? "kl" : "h"},
                {"stump",
                 json{{"projection", projection_to_json(node.stump->projection)},
                      {"threshold", node.stump->threshold}}},
                {"ge", node_to_json(*node.ge)},
                {"lt", node_to_json(*node.lt)},
                {"diag", std::move(diag)}};
}

const char* rule_name(SplitRule rule) {
    return rule == SplitRule::divergence_gated ? "divergence_gated" : "entropy_only";
}
const char* resample_name(Resample r) {
    switch (r) {
    case Resample::bootstrap: return "bootstrap";
    case Resample::subsample: return "subsample";
    default: return "none";
    }
}

json config_to_json(const TrainConfig& cfg) {
    return json{{"tau", cfg.tau},
                {"delta", cfg.delta},
                {"max_depth", cfg.max_depth},
                {"min_samples", cfg.min_samples},
                {"rule", rule_name(cfg.rule)},
                {"resample", resample_name(cfg.resample)},
                {"subsample_fraction", cfg.subsample_fraction},
                {"pool",
                 json{{"n_axis", cfg.pool.n_axis},
                      {"n_linear", cfg.pool.n_linear},
                      {"n_thresholds", cfg.pool.n_thresholds}}},
                {"divergence",
                 json{{"bins", cfg.divergence.bins},
                      {"smoothing", cfg.divergence.smoothing},
                      {"symmetrize", cfg.divergence.symmetrize}}}};
}

const json& require(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end())
        throw ModelFormatError(std::string("model document missing field '") + key + "'");
    return *it;
}

Projection projection_from_json(const json& j, std::size_t dimension) {
    const std::string kind = require(j, "kind").get<std::string>();
    if (kind == "axis") {
        const auto axis = require(j, "axis").get<std::uint32_t>();
        if (axis >= dimension)
            throw DimensionError("axis projection out of range for model dimension");
        return Projection::on_axis(axis);
    }
    if (kind == "linear") {
        auto weights = require(j, "weights").get<std::vector<double>>();
        if (weights.size() != dimension)
            throw DimensionError("linear projection length does not match model dimension");
        Projection p;
        p.kind = Projection::Kind::linear;
        p.weights = std::move(weights); // stored weights are already unit norm
        return p;
    }
    throw ModelFormatError("unknown projection kind '" + kind + "'");
}

std::unique_ptr<Node> node_from_json(const json& j, std::size_t dimension, int depth) {
    if (depth > 4096) throw ModelFormatError("model tree nested too deeply");
    if (!j.is_object()) throw ModelFormatError("tree node must be an object");

    auto node = std::make_unique<Node>();
    const json& diag = require(j, "diag");
    node->diag.n_samples = require(diag, "n_samples").get<std::uint32_t>();
    if (diag.contains("divergence")) node->diag.divergence = diag["divergence"].get<double>();
    if (diag.contains("split_score")) node->diag.split_score = diag["split_score"].get<double>();

    const std::string kind = require(j, "kind").get<std::string>();
    if (kind == "leaf") {
        node->kind = NodeKind::leaf;
        node->leaf_label = require(j, "label").get<int>();
        node->leaf_posterior = require(j, "posterior").get<double>();
        if (node->leaf_label != 0 && node->leaf_label != 1)
            throw ModelFormatError("leaf label must be 0 or 1");
        if (!(node->leaf_posterior >= 0.0 && node->leaf_posterior <= 1.0))
            throw ModelFormatError("leaf posterior must lie in [0, 1]");
        return node;
    }
    if (kind != "kl" && kind != "h")
        throw ModelFormatError("unknown node kind '" + kind + "'");

    node->kind = kind == "kl" ? NodeKind::kl_node : NodeKind::h_node;
    const json& stump = require(j, "stump");
    node->stump = Stump{projection_from_json(require(stump, "projection"), dimension),
                        require(stump, "threshold").get<double>()};
    if (!std::isfinite(node->stump->threshold))
        throw ModelFormatError("stump threshold must be finite");
    node->ge = node_from_json(require(j, "ge"), dimension, depth + 1);
    node->lt = node_from_json(require(j, "lt"), dimension, depth + 1);
    return node;
}

SplitRule rule_from_name(const std::string& name) {
    if (name == "divergence_gated") return SplitRule::divergence_gated;
    if (name == "entropy_only") return SplitRule::entropy_only;
    throw ModelFormatError("unknown split rule '" + name + "'");
}

Resample resample_from_name(const std::string& name) {
    if (name == "bootstrap") return Resample::bootstrap;
    if (name == "subsample") return Resample::subsample;
    if (name == "none") return Resample::none;
    throw ModelFormatError("unknown resample mode '" + name + "'");
}

TrainConfig config_from_json(const json& j) {
    TrainConfig cfg;
    cfg.tau = require(j, "tau").get<double>();
    cfg.delta = require(j, "delta").get<double>();
    cfg.max_depth = require(j, "max_depth").get<std::uint32_t>();
    cfg.min_samples = require(j, "min_samples").get<std::uint32_t>();
    cfg.rule = rule_from_name(require(j, "rule").get<std::string>());
    cfg.resample = resample_from_name(require(j, "resample").get<std::string>());
    cfg.subsample_fraction = require(j, "subsample_fraction").get<double>();
    const json& pool = require(j, "pool");
    cfg.pool.n_axis = require(pool, "n_axis").get<std::uint32_t>();
    cfg.pool.n_linear = require(pool, "n_linear").get<std::uint32_t>();
    cfg.pool.n_thresholds = require(pool, "n_thresholds").get<std::uint32_t>();
    const json& div = require(j, "divergence");
    cfg.divergence.bins = require(div, "bins").get<std::uint32_t>();
    cfg.divergence.smoothing = require(div, "smoothing").get<double>();
    cfg.divergence.symmetrize = require(div, "symmetrize").get<bool>();
    return cfg;
}

} // namespace

std::string serialize(const Forest& forest) {
    json j;
    j["format_version"] = forest_format_version;
    j["dimension"] = forest.dimension;
    j["seed"] = forest.seed;
    j["n_trees"] = forest.n_trees;
    j["config"] = config_to_json(forest.config);
    json trees = json::array();
    for (const auto& tree : forest.trees) trees.push_back(node_to_json(*tree));
    j["trees"] = std::move(trees);
    return j.dump();
}

Forest deserialize(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ModelFormatError(std::string("model document does not parse: ") + e.what());
    }
    if (!j.is_object()) throw ModelFormatError("model document must be a JSON object");

    try {
        const int version = require(j, "format_version").get<int>();
        if (version != forest_format_version)
            throw ModelVersionError("unsupported model format_version " +
                                    std::to_string(version));

        Forest forest;
        forest.dimension = require(j, "dimension").get<std::size_t>();
        if (forest.dimension == 0) throw ModelFormatError("model dimension must be positive");
        forest.seed = require(j, "seed").get<std::uint64_t>();
        forest.n_trees = require(j, "n_trees").get<std::uint32_t>();
        forest.config = config_from_json(require(j, "config"));

        const json& trees = require(j, "trees");
        if (!trees.is_array()) throw ModelFormatError("'trees' must be an array");
        if (trees.size() != forest.n_trees)
            throw ModelFormatError("tree count does not match n_trees");
        if (trees.empty()) throw ModelFormatError("model must contain at least one tree");
        for (const json& t : trees)
            forest.trees.push_back(node_from_json(t, forest.dimension, 0));
        return forest;
    } catch (const json::exception& e) {
        throw ModelFormatError(std::string("model field has the wrong type: ") + e.what());
    }
}

} // namespace iforest
