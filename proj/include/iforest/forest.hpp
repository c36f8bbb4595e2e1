#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iforest/core.hpp"
#include "iforest/rng.hpp"
#include "iforest/tree.hpp"

namespace iforest {

inline constexpr int forest_format_version = 1;

/// A trained ensemble plus everything needed to reproduce it.
struct Forest {
    std::vector<std::unique_ptr<Node>> trees;
    TrainConfig config;
    std::uint32_t n_trees = 0;
    std::size_t dimension = 0;
    std::uint64_t seed = 0;
};

struct Prediction {
    int label = 0;             // majority vote; exact tie predicts 0
    double vote_fraction = 0;  // fraction of trees voting 1
    double mean_posterior = 0; // average leaf posterior across trees
};

struct OobStats {
    double error = 0.0;                  // out-of-bag majority-vote error
    double in_bag_unique_fraction = 0.0; // unique in-bag samples / M, mean over trees
};

struct TrainOutput {
    Forest forest;
    std::optional<OobStats> oob; // absent when no resampling happens
};

/// n draws with replacement from [0, n); the per-tree bag.
std::vector<std::uint32_t> bootstrap_indices(std::size_t n, Rng& rng);

/// floor(fraction * n) distinct indices (at least 1), ascending.
std::vector<std::uint32_t> subsample_indices(std::size_t n, double fraction, Rng& rng);

/// Trains n_trees trees, each on its own resample drawn from the stream
/// (seed, tree index), so the result is independent of thread scheduling.
/// threads == 0 picks the hardware concurrency. Requires both classes.
TrainOutput train_forest_detailed(const Dataset& data, const TrainConfig& cfg,
                                  std::uint32_t n_trees, std::uint64_t seed,
                                  unsigned threads = 0);

Forest train_forest(const Dataset& data, const TrainConfig& cfg, std::uint32_t n_trees,
                    std::uint64_t seed, unsigned threads = 0);

/// Unweighted majority vote over the trees' leaf labels.
Prediction predict(const Forest& forest, std::span<const double> features);

/// Fraction of samples whose majority vote matches the label.
double accuracy(const Forest& forest, const Dataset& data);

/// JSON model document; reals use the shortest round-trip representation and
/// keys are emitted in sorted order, so equal forests serialize byte-equal.
std::string serialize(const Forest& forest);

/// Inverse of serialize. Throws ModelFormatError on malformed documents,
/// ModelVersionError on a format_version mismatch, DimensionError when node
/// projections disagree with the declared dimension.
Forest deserialize(std::string_view text);

} // namespace iforest
