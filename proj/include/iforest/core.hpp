#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "iforest/errors.hpp"

namespace iforest {

/// Immutable training data: an M x k feature matrix plus binary labels.
/// Every downstream structure references a Dataset read-only, so one
/// instance can be shared freely across concurrent tree trainers.
class Dataset {
public:
    // features is row-major with labels.size() * dimension entries.
    Dataset(std::vector<double> features, std::vector<std::uint8_t> labels,
            std::size_t dimension);

    std::size_t size() const { return labels_.size(); }
    std::size_t dimension() const { return dim_; }

    std::span<const double> row(std::size_t i) const {
        return {features_.data() + i * dim_, dim_};
    }
    double feature(std::size_t i, std::size_t j) const { return features_[i * dim_ + j]; }
    int label(std::size_t i) const { return labels_[i]; }
    const std::vector<std::uint8_t>& labels() const { return labels_; }

private:
    std::vector<double> features_;
    std::vector<std::uint8_t> labels_;
    std::size_t dim_;
};

/// A sorted, duplicate-free subset of dataset row indices. Partitioning a
/// view yields two views that cover it exactly.
class SampleView {
public:
    SampleView() = default;
    explicit SampleView(std::vector<std::uint32_t> indices);

    static SampleView full(const Dataset& data);

    std::size_t size() const { return idx_.size(); }
    bool empty() const { return idx_.empty(); }
    std::uint32_t operator[](std::size_t pos) const { return idx_[pos]; }
    const std::vector<std::uint32_t>& indices() const { return idx_; }

    auto begin() const { return idx_.begin(); }
    auto end() const { return idx_.end(); }

private:
    std::vector<std::uint32_t> idx_;
};

/// A scalar feature: either one coordinate or a unit-norm linear combination.
struct Projection {
    enum class Kind { axis, linear };

    Kind kind = Kind::axis;
    std::uint32_t axis = 0;       // kind == axis
    std::vector<double> weights;  // kind == linear, unit Euclidean norm

    static Projection on_axis(std::uint32_t dim);
    // Normalizes to unit norm; rejects zero or non-finite vectors.
    static Projection along(std::vector<double> w);
};

/// Decision stump: routes a sample by projection(features) >= threshold.
struct Stump {
    Projection projection;
    double threshold = 0.0;
};

inline Stump axis_stump(std::uint32_t dim, double threshold) {
    return {Projection::on_axis(dim), threshold};
}
inline Stump linear_stump(std::vector<double> w, double threshold) {
    return {Projection::along(std::move(w)), threshold};
}

/// Applies the stump's projection only; the threshold comparison happens in
/// partition / prediction.
double evaluate(const Projection& projection, std::span<const double> features);
double evaluate(const Stump& stump, std::span<const double> features);

/// Splits a view into ({i : f(y_i) >= theta}, {i : f(y_i) < theta}).
/// Ties at the threshold go to the ">=" side. Both halves keep ascending
/// index order and together cover the input exactly.
std::pair<SampleView, SampleView> partition(const Dataset& data, const SampleView& view,
                                            const Stump& stump);

/// Empirical label counts over a view.
struct LabelDistribution {
    std::uint64_t count0 = 0;
    std::uint64_t count1 = 0;

    std::uint64_t total() const { return count0 + count1; }
    bool empty() const { return total() == 0; }
    bool pure() const { return count0 == 0 || count1 == 0; }
};

LabelDistribution label_distribution(const Dataset& data, const SampleView& view);

/// Copies the given rows (duplicates allowed) into a new Dataset; used to
/// materialize bootstrap resamples.
Dataset gather_rows(const Dataset& data, std::span<const std::uint32_t> rows);

} // namespace iforest
