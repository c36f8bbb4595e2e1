#include "iforest/core.hpp"

#include <algorithm>
#include <cmath>

namespace iforest {

Dataset::Dataset(std::vector<double> features, std::vector<std::uint8_t> labels,
                 std::size_t dimension)
    : features_(std::move(features)), labels_(std::move(labels)), dim_(dimension) {
    if (dim_ == 0) throw InvalidInputError("dataset dimension must be at least 1");
    if (labels_.empty()) throw InvalidInputError("dataset must contain at least one sample");
    if (features_.size() != labels_.size() * dim_)
        throw InvalidInputError("feature matrix size does not match samples x dimension");
    for (double v : features_)
        if (!std::isfinite(v)) throw InvalidInputError("non-finite feature value");
    for (std::uint8_t l : labels_)
        if (l > 1) throw InvalidInputError("labels must be 0 or 1");
}

SampleView::SampleView(std::vector<std::uint32_t> indices) : idx_(std::move(indices)) {
    for (std::size_t i = 1; i < idx_.size(); ++i)
        if (idx_[i - 1] >= idx_[i])
            throw InvalidInputError("view indices must be strictly ascending");
}

SampleView SampleView::full(const Dataset& data) {
    std::vector<std::uint32_t> idx(data.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::uint32_t>(i);
    return SampleView(std::move(idx));
}

Projection Projection::on_axis(std::uint32_t dim) {
    Projection p;
    p.kind = Kind::axis;
    p.axis = dim;
    return p;
}

Projection Projection::along(std::vector<double> w) {
    if (w.empty()) throw InvalidInputError("linear projection needs at least one weight");
    double norm_sq = 0.0;
    for (double v : w) {
        if (!std::isfinite(v)) throw InvalidInputError("non-finite projection weight");
        norm_sq += v * v;
    }
    const double norm = std::sqrt(norm_sq);
    if (norm == 0.0) throw InvalidInputError("zero projection vector");
    for (double& v : w) v /= norm;
    Projection p;
    p.kind = Kind::linear;
    p.weights = std::move(w);
    return p;
}

double evaluate(const Projection& projection, std::span<const double> features) {
    if (projection.kind == Projection::Kind::axis) {
        if (projection.axis >= features.size())
            throw InvalidInputError("axis projection out of range for feature vector");
        return features[projection.axis];
    }
    if (projection.weights.size() != features.size())
        throw InvalidInputError("linear projection dimension mismatch");
    double dot = 0.0;
    for (std::size_t j = 0; j < features.size(); ++j) dot += projection.weights[j] * features[j];
    return dot;
}

double evaluate(const Stump& stump, std::span<const double> features) {
    return evaluate(stump.projection, features);
}

std::pair<SampleView, SampleView> partition(const Dataset& data, const SampleView& view,
                                            const Stump& stump) {
    std::vector<std::uint32_t> ge, lt;
    ge.reserve(view.size());
    lt.reserve(view.size());
    for (std::uint32_t i : view) {
        if (evaluate(stump, data.row(i)) >= stump.threshold)
            ge.push_back(i);
        else
            lt.push_back(i);
    }
    return {SampleView(std::move(ge)), SampleView(std::move(lt))};
}

LabelDistribution label_distribution(const Dataset& data, const SampleView& view) {
    LabelDistribution d;
    for (std::uint32_t i : view) {
        if (data.label(i) == 1)
            ++d.count1;
        else
            ++d.count0;
    }
    return d;
}

Dataset gather_rows(const Dataset& data, std::span<const std::uint32_t> rows) {
    const std::size_t k = data.dimension();
    std::vector<double> features;
    features.reserve(rows.size() * k);
    std::vector<std::uint8_t> labels;
    labels.reserve(rows.size());
    for (std::uint32_t r : rows) {
        auto src = data.row(r);
        features.insert(features.end(), src.begin(), src.end());
        labels.push_back(static_cast<std::uint8_t>(data.label(r)));
    }
    return Dataset(std::move(features), std::move(labels), k);
}

} // namespace iforest
