#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iforest/tree.hpp"

namespace iforest {

/// Stripes depth experiment: for each group count and repeat seed, train an
/// entropy-only-style baseline (tau = 0) and the divergence-gated method on
/// the same stripes data and record tree structure plus accuracy.
struct StripesDepthSpec {
    std::vector<std::uint32_t> n_groups_list{4, 8, 16};
    std::uint32_t per_group = 100;
    std::uint32_t repeats = 5;
    std::uint32_t n_trees = 32;
    double tau = 0.5; // the gated method's threshold; the baseline uses 0
    double jitter = 0.0;
    std::uint64_t seed = 0;
    TrainConfig base; // shared knobs: pool, bins, delta, caps, resampling
    unsigned threads = 0;
};

struct BenchRow {
    std::string method; // "rf" (tau = 0) or "if"
    std::uint32_t n_groups = 0;
    std::uint32_t repeat = 0;
    std::uint64_t seed = 0; // dataset seed for this repeat
    double mean_depth = 0.0;
    std::uint32_t max_depth = 0;
    double mean_balance = 0.0;
    std::uint64_t kl_nodes = 0;
    std::uint64_t h_nodes = 0;
    std::uint64_t leaves = 0;
    double train_acc = 0.0;
    double test_acc = 0.0;
};

/// One row per (method, n_groups, repeat); held-out accuracy uses a fresh
/// stripes sample drawn from a derived seed.
std::vector<BenchRow> run_stripes_depth(const StripesDepthSpec& spec);

std::string bench_csv_header();
std::string bench_csv_row(const BenchRow& row);

} // namespace iforest
