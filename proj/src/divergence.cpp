#include "iforest/divergence.hpp"

#include <algorithm>
#include <cmath>

namespace iforest {

namespace {

void validate_divergence_config(const DivergenceConfig& cfg) {
    if (cfg.bins < 2) throw InvalidInputError("divergence needs at least 2 bins");
    if (!(cfg.smoothing > 0.0) || !std::isfinite(cfg.smoothing))
        throw InvalidInputError("smoothing must be positive and finite");
}

// Split a view's projected values by class. Returns false when a class is
// missing.
bool project_by_class(const Dataset& data, const SampleView& view, const Projection& proj,
                      std::vector<double>& class1, std::vector<double>& class0) {
    class1.clear();
    class0.clear();
    for (std::uint32_t i : view) {
        const double v = evaluate(proj, data.row(i));
        if (data.label(i) == 1)
            class1.push_back(v);
        else
            class0.push_back(v);
    }
    return !class1.empty() && !class0.empty();
}

double max_projection_divergence(const Dataset& data, const SampleView& view,
                                 const FeaturePool& pool, const DivergenceConfig& cfg,
                                 std::vector<double>& scratch1, std::vector<double>& scratch0) {
    double best = 0.0;
    for (const Projection& proj : pool.projections) {
        if (!project_by_class(data, view, proj, scratch1, scratch0))
            throw InvalidInputError("divergence over a single-class view");
        best = std::max(best, projection_divergence(scratch1, scratch0, cfg));
    }
    return best;
}

} // namespace

std::vector<double> uniform_edges(double lo, double hi, std::uint32_t bins) {
    if (!(hi > lo)) throw InvalidInputError("edge range must be nonempty");
    if (bins == 0) throw InvalidInputError("need at least one bin");
    std::vector<double> edges(bins + 1);
    const double width = (hi - lo) / bins;
    for (std::uint32_t b = 0; b <= bins; ++b) edges[b] = lo + width * b;
    edges.front() = lo;
    edges.back() = hi;
    return edges;
}

Histogram build_histogram(std::span<const double> values, std::vector<double> edges,
                          double smoothing) {
    if (edges.size() < 2) throw InvalidInputError("histogram needs at least two edges");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i - 1] < edges[i]))
            throw InvalidInputError("histogram edges must be strictly increasing");
    if (!(smoothing > 0.0) || !std::isfinite(smoothing))
        throw InvalidInputError("smoothing must be positive and finite");

    const std::size_t n_bins = edges.size() - 1;
    std::vector<std::uint64_t> counts(n_bins, 0);
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidInputError("non-finite value in histogram input");
        // Half-open bins [e_b, e_{b+1}); out-of-range values clamp into the
        // nearest outer bin, the last bin is closed.
        auto it = std::upper_bound(edges.begin(), edges.end(), v);
        std::size_t b = 0;
        if (it != edges.begin()) b = static_cast<std::size_t>(it - edges.begin()) - 1;
        if (b >= n_bins) b = n_bins - 1;
        ++counts[b];
    }

    Histogram h;
    h.edges = std::move(edges);
    h.mass.resize(n_bins);
    h.raw_count = values.size();
    const double denom =
        static_cast<double>(h.raw_count) + smoothing * static_cast<double>(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b)
        h.mass[b] = (static_cast<double>(counts[b]) + smoothing) / denom;
    return h;
}

double entropy(const LabelDistribution& dist) {
    const std::uint64_t n = dist.total();
    if (n == 0) return 0.0;
    double sum = 0.0;
    for (std::uint64_t c : {dist.count0, dist.count1}) {
        if (c == 0) continue; // 0 * ln 0 == 0
        const double p = static_cast<double>(c) / static_cast<double>(n);
        sum += p * std::log(p);
    }
    return -sum + 0.0;
}

double kl(const Histogram& p, const Histogram& q) {
    if (p.edges != q.edges) throw InvalidInputError("kl requires identical histogram edges");
    double sum = 0.0;
    for (std::size_t b = 0; b < p.mass.size(); ++b)
        sum += p.mass[b] * std::log(p.mass[b] / q.mass[b]);
    // Nonnegative in exact arithmetic; clamp rounding residue only.
    return std::max(sum, 0.0);
}

double projection_divergence(std::span<const double> class1_values,
                             std::span<const double> class0_values,
                             const DivergenceConfig& cfg) {
    validate_divergence_config(cfg);
    if (class1_values.empty() || class0_values.empty())
        throw InvalidInputError("projection_divergence needs both classes");

    double lo = class1_values.front();
    double hi = lo;
    for (double v : class1_values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double v : class0_values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) return 0.0; // constant projection carries no class information

    std::vector<double> edges = uniform_edges(lo, hi, cfg.bins);
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i - 1] < edges[i])) return 0.0; // range too narrow to subdivide

    const Histogram h1 = build_histogram(class1_values, edges, cfg.smoothing);
    const Histogram h0 = build_histogram(class0_values, std::move(edges), cfg.smoothing);
    double d = kl(h1, h0);
    if (cfg.symmetrize) d += kl(h0, h1);
    return d;
}

std::optional<double> node_divergence(const Dataset& data, const SampleView& view,
                                      const FeaturePool& pool, const DivergenceConfig& cfg) {
    validate_divergence_config(cfg);
    if (pool.projections.empty()) throw InvalidInputError("empty feature pool");
    const LabelDistribution dist = label_distribution(data, view);
    if (dist.count0 == 0 || dist.count1 == 0) return std::nullopt;
    std::vector<double> s1, s0;
    return max_projection_divergence(data, view, pool, cfg, s1, s0);
}

double score_kl_split(const Dataset& data, const SampleView& view, const Stump& stump,
                      const FeaturePool& pool, const DivergenceConfig& cfg) {
    validate_divergence_config(cfg);
    if (view.empty()) throw InvalidInputError("cannot score a split of an empty view");

    auto [ge, lt] = partition(data, view, stump);
    const double n = static_cast<double>(view.size());
    std::vector<double> s1, s0;

    double score = 0.0;
    for (const SampleView* child : {&ge, &lt}) {
        if (child->empty()) continue;
        const LabelDistribution dist = label_distribution(data, *child);
        if (dist.count0 == 0 || dist.count1 == 0) continue; // single-class child
        const double weight = static_cast<double>(child->size()) / n;
        score += weight * max_projection_divergence(data, *child, pool, cfg, s1, s0);
    }
    return score;
}

double split_entropy(const LabelDistribution& ge_side, const LabelDistribution& lt_side) {
    const double n = static_cast<double>(ge_side.total() + lt_side.total());
    if (n == 0.0) return 0.0;
    double score = 0.0;
    if (!ge_side.empty())
        score += static_cast<double>(ge_side.total()) / n * entropy(ge_side);
    if (!lt_side.empty())
        score += static_cast<double>(lt_side.total()) / n * entropy(lt_side);
    return score;
}

double score_entropy_split(const Dataset& data, const SampleView& view, const Stump& stump) {
    if (view.empty()) throw InvalidInputError("cannot score a split of an empty view");
    LabelDistribution ge, lt;
    for (std::uint32_t i : view) {
        LabelDistribution& side =
            evaluate(stump, data.row(i)) >= stump.threshold ? ge : lt;
        if (data.label(i) == 1)
            ++side.count1;
        else
            ++side.count0;
    }
    return split_entropy(ge, lt);
}

} // namespace iforest
