#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "iforest/core.hpp"
#include "iforest/rng.hpp"

namespace iforest {

/// Per-node random feature pool: how many axis-aligned and random linear
/// projections to draw, and how many candidate thresholds per projection.
struct PoolConfig {
    std::uint32_t n_axis = 2;
    std::uint32_t n_linear = 2;
    std::uint32_t n_thresholds = 16;
};

/// The finite candidate feature set searched at one node.
struct FeaturePool {
    std::vector<Projection> projections;
    std::uint64_t generation_seed = 0; // generator state the pool was drawn from
};

/// Draws n_axis distinct axis indices (all of them when n_axis >= dimension)
/// followed by n_linear isotropic-Gaussian directions normalized to unit
/// norm. Pure function of (dimension, cfg, generator state).
FeaturePool generate_pool(std::size_t dimension, const PoolConfig& cfg, Rng& rng);

/// Candidate thresholds for one projection over one view: midpoints between
/// consecutive distinct order statistics probed at n_thresholds evenly spaced
/// quantile positions, deduplicated and ascending. Empty when the projection
/// is constant on the view. Every returned threshold strictly separates at
/// least one sample from another.
std::vector<double> candidate_thresholds(const Dataset& data, const SampleView& view,
                                         const Projection& projection,
                                         std::uint32_t n_thresholds);

/// Same, from an already projected and sorted value list.
std::vector<double> candidate_thresholds_sorted(std::span<const double> sorted_values,
                                                std::uint32_t n_thresholds);

} // namespace iforest
