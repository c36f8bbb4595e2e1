#include "iforest/stumps.hpp"

#include <algorithm>
#include <cmath>

namespace iforest {

FeaturePool generate_pool(std::size_t dimension, const PoolConfig& cfg, Rng& rng) {
    if (dimension == 0) throw InvalidInputError("pool dimension must be at least 1");
    if (cfg.n_axis + cfg.n_linear == 0)
        throw InvalidInputError("pool must request at least one projection");

    FeaturePool pool;
    pool.generation_seed = rng.state();

    // Partial Fisher-Yates over the axis indices.
    const std::size_t n_axis = std::min<std::size_t>(cfg.n_axis, dimension);
    std::vector<std::uint32_t> axes(dimension);
    for (std::size_t i = 0; i < dimension; ++i) axes[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < n_axis; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(dimension - i));
        std::swap(axes[i], axes[j]);
        pool.projections.push_back(Projection::on_axis(axes[i]));
    }

    for (std::uint32_t l = 0; l < cfg.n_linear; ++l) {
        std::vector<double> w(dimension);
        double norm_sq = 0.0;
        do {
            norm_sq = 0.0;
            for (double& v : w) {
                v = rng.gaussian();
                norm_sq += v * v;
            }
        } while (norm_sq == 0.0);
        pool.projections.push_back(Projection::along(std::move(w)));
    }
    return pool;
}

std::vector<double> candidate_thresholds_sorted(std::span<const double> sorted_values,
                                                std::uint32_t n_thresholds) {
    if (n_thresholds == 0) throw InvalidInputError("n_thresholds must be at least 1");
    const std::size_t m = sorted_values.size();
    if (m == 0) throw InvalidInputError("cannot pick thresholds over an empty view");
    if (sorted_values.front() == sorted_values.back()) return {}; // constant projection

    std::vector<double> out;
    out.reserve(n_thresholds);
    for (std::uint32_t t = 1; t <= n_thresholds; ++t) {
        const double q = static_cast<double>(t) / (n_thresholds + 1.0);
        const std::size_t pos =
            std::min<std::size_t>(static_cast<std::size_t>(q * (m - 1)), m - 1);
        const double v = sorted_values[pos];
        // Midpoint of the first gap at or above the probed order statistic,
        // falling back to the gap below when v is the maximum.
        auto above = std::upper_bound(sorted_values.begin(), sorted_values.end(), v);
        double mid;
        if (above != sorted_values.end()) {
            mid = v + (*above - v) / 2.0;
            if (mid <= v) mid = *above; // adjacent doubles: keep the split non-vacuous
        } else {
            auto below = std::lower_bound(sorted_values.begin(), sorted_values.end(), v);
            const double prev = *(below - 1);
            mid = prev + (v - prev) / 2.0;
            if (mid <= prev) mid = v;
        }
        out.push_back(mid);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<double> candidate_thresholds(const Dataset& data, const SampleView& view,
                                         const Projection& projection,
                                         std::uint32_t n_thresholds) {
    if (view.empty()) throw InvalidInputError("cannot pick thresholds over an empty view");
    std::vector<double> values;
    values.reserve(view.size());
    for (std::uint32_t i : view) values.push_back(evaluate(projection, data.row(i)));
    std::sort(values.begin(), values.end());
    return candidate_thresholds_sorted(values, n_thresholds);
}

} // namespace iforest
