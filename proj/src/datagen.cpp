#include "iforest/datagen.hpp"

#include <cmath>

#include "iforest/rng.hpp"

namespace iforest {

Dataset gen_stripes(const StripesSpec& spec) {
    if (spec.n_groups < 2) throw InvalidInputError("stripes need at least 2 groups");
    if (spec.per_group == 0) throw InvalidInputError("per_group must be at least 1");
    if (!(spec.jitter >= 0.0) || !std::isfinite(spec.jitter))
        throw InvalidInputError("jitter must be nonnegative and finite");

    Rng rng(spec.seed);
    const std::size_t n = static_cast<std::size_t>(spec.n_groups) * spec.per_group;
    std::vector<double> features;
    features.reserve(n * 2);
    std::vector<std::uint8_t> labels;
    labels.reserve(n);

    for (std::uint32_t g = 0; g < spec.n_groups; ++g) {
        const std::uint8_t label = g % 2 == 0 ? 1 : 0;
        for (std::uint32_t s = 0; s < spec.per_group; ++s) {
            double x0 = static_cast<double>(g) + rng.uniform01();
            const double x1 = rng.uniform01();
            x0 += spec.jitter * rng.gaussian();
            features.push_back(x0);
            features.push_back(x1);
            labels.push_back(label);
        }
    }
    return Dataset(std::move(features), std::move(labels), 2);
}

Dataset gen_hidden_parts(const HiddenPartsSpec& spec) {
    if (spec.n_parts < 2) throw InvalidInputError("hidden parts need at least 2 parts");
    if (spec.per_part == 0) throw InvalidInputError("per_part must be at least 1");
    if (!(spec.separation > 0.0) || !std::isfinite(spec.separation))
        throw InvalidInputError("separation must be positive and finite");
    if (!(spec.noise >= 0.0) || !std::isfinite(spec.noise))
        throw InvalidInputError("noise must be nonnegative and finite");

    Rng rng(spec.seed);
    const std::size_t n = static_cast<std::size_t>(spec.n_parts) * spec.per_part * 2;
    std::vector<double> features;
    features.reserve(n * 2);
    std::vector<std::uint8_t> labels;
    labels.reserve(n);

    const double half = spec.separation / 2.0;
    for (std::uint32_t part = 0; part < spec.n_parts; ++part) {
        for (std::uint8_t label : {std::uint8_t{1}, std::uint8_t{0}}) {
            // Even parts put class 1 above class 0, odd parts swap them.
            const double sign = (part % 2 == 0) == (label == 1) ? 1.0 : -1.0;
            for (std::uint32_t s = 0; s < spec.per_part; ++s) {
                features.push_back(static_cast<double>(part));
                features.push_back(sign * half + spec.noise * rng.gaussian());
                labels.push_back(label);
            }
        }
    }
    return Dataset(std::move(features), std::move(labels), 2);
}

Dataset gen_blobs(std::uint32_t n_per_class, double mean_shift, std::uint64_t seed) {
    if (n_per_class == 0) throw InvalidInputError("n_per_class must be at least 1");
    if (!std::isfinite(mean_shift)) throw InvalidInputError("mean_shift must be finite");

    Rng rng(seed);
    std::vector<double> features;
    features.reserve(static_cast<std::size_t>(n_per_class) * 4);
    std::vector<std::uint8_t> labels;
    labels.reserve(static_cast<std::size_t>(n_per_class) * 2);

    const double half = mean_shift / 2.0;
    for (std::uint8_t label : {std::uint8_t{0}, std::uint8_t{1}}) {
        const double center = label == 1 ? half : -half;
        for (std::uint32_t s = 0; s < n_per_class; ++s) {
            features.push_back(center + rng.gaussian());
            features.push_back(rng.gaussian());
            labels.push_back(label);
        }
    }
    return Dataset(std::move(features), std::move(labels), 2);
}

} // namespace iforest
