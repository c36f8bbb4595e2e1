#pragma once

#include <cstdint>

#include "iforest/core.hpp"

namespace iforest {

/// Alternating-label stripe layout: group g occupies the dim-0 interval
/// [g, g+1) and carries label 1 for even g, 0 for odd g. Dim 1 is a uniform
/// nuisance coordinate. Gaussian jitter perturbs dim 0 after the label is
/// assigned.
struct StripesSpec {
    std::uint32_t n_groups = 8;
    std::uint32_t per_group = 100;
    double jitter = 0.0;
    std::uint64_t seed = 0;
};

/// Hidden-parts layout: dim 0 codes the part (exactly j for part j), dim 1
/// is the measurement. Within part j the two classes sit separation apart on
/// dim 1; the class-to-value sign alternates across parts, so pooling all
/// parts makes the two class-conditional dim-1 marginals coincide (exactly,
/// as multisets, when noise == 0 and n_parts is even).
struct HiddenPartsSpec {
    std::uint32_t n_parts = 4;
    std::uint32_t per_part = 100; // samples per part per class
    double separation = 2.0;
    double noise = 0.5;
    std::uint64_t seed = 0;
};

Dataset gen_stripes(const StripesSpec& spec);
Dataset gen_hidden_parts(const HiddenPartsSpec& spec);

/// Two isotropic unit-variance Gaussian classes in 2-D whose means sit
/// mean_shift apart along dim 0. Sanity baseline for accuracy tests.
Dataset gen_blobs(std::uint32_t n_per_class, double mean_shift, std::uint64_t seed);

} // namespace iforest
