#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "iforest/core.hpp"
#include "iforest/stumps.hpp"

namespace iforest {

/// Histogram density estimation and divergence knobs.
struct DivergenceConfig {
    std::uint32_t bins = 16;
    double smoothing = 1.0;  // pseudo-count added to every bin
    bool symmetrize = false; // Jeffreys variant: kl(p,q) + kl(q,p)
};

/// Fixed-bin empirical 1-D distribution. Smoothing keeps every bin strictly
/// positive, so divergences computed from it are always finite.
struct Histogram {
    std::vector<double> edges; // B+1 strictly increasing
    std::vector<double> mass;  // B entries, each > 0, summing to 1
    std::uint64_t raw_count = 0;

    std::size_t bins() const { return mass.size(); }
};

/// B+1 equal-width edges over [lo, hi]; requires hi > lo.
std::vector<double> uniform_edges(double lo, double hi, std::uint32_t bins);

/// mass[b] = (count_b + smoothing) / (n + B * smoothing). Values below the
/// first edge count into bin 0, values above the last edge into bin B-1.
Histogram build_histogram(std::span<const double> values, std::vector<double> edges,
                          double smoothing);

/// Shannon entropy of a binary label distribution in nats; 0 for empty or
/// pure distributions.
double entropy(const LabelDistribution& dist);

/// Kullback-Leibler divergence sum_b p_b ln(p_b / q_b) in nats. Requires
/// identical edges. Nonnegative and finite for smoothed histograms;
/// exactly 0 when p == q.
double kl(const Histogram& p, const Histogram& q);

/// Divergence between two sets of projected scalar values, using shared
/// equal-width edges spanning their pooled range. Returns 0 when the pooled
/// range is degenerate. Both inputs must be nonempty.
double projection_divergence(std::span<const double> class1_values,
                             std::span<const double> class0_values,
                             const DivergenceConfig& cfg);

/// The node-level divergence estimate: the maximum over pool projections of
/// the divergence between the class-conditional distributions of the
/// projected view. Returns nullopt when the view holds fewer than two
/// classes (the trainer treats that as a leaf candidate, not via tau).
std::optional<double> node_divergence(const Dataset& data, const SampleView& view,
                                      const FeaturePool& pool, const DivergenceConfig& cfg);

/// Weighted divergence of the two children a stump would produce:
/// |S|/|view| * div(S) + |S^c|/|view| * div(S^c). Children that are empty or
/// hold a single class contribute 0.
double score_kl_split(const Dataset& data, const SampleView& view, const Stump& stump,
                      const FeaturePool& pool, const DivergenceConfig& cfg);

/// Size-weighted label entropy of the two sides of a split; the same
/// arithmetic backs score_entropy_split and the trainer's search.
double split_entropy(const LabelDistribution& ge_side, const LabelDistribution& lt_side);

/// Weighted label entropy of the two children a stump would produce. An
/// empty child contributes 0, so a vacuous stump scores the parent entropy.
double score_entropy_split(const Dataset& data, const SampleView& view, const Stump& stump);

} // namespace iforest
