#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "iforest/bench.hpp"
#include "iforest/datagen.hpp"
#include "iforest/tree.hpp"

namespace iforest::cli {

// Documented process exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1; // unexpected internal error
inline constexpr int exit_usage = 2;
inline constexpr int exit_io = 3;
inline constexpr int exit_data = 4;  // data validation (CSV, labels, classes)
inline constexpr int exit_model = 5; // model compatibility (format/version/dimension)

/// FNV-1a 64 over the file's bytes, rendered as "fnv1a64:<hex>".
std::string file_fingerprint(const std::string& path);

struct GenOptions {
    std::string kind; // stripes | parts | blobs
    StripesSpec stripes;
    HiddenPartsSpec parts;
    std::uint32_t blobs_per_class = 100;
    double blobs_shift = 2.0;
    std::uint64_t blobs_seed = 0;
    std::string out;
    std::string manifest; // default: <out>.manifest.json
};

struct TrainOptions {
    std::string data;
    std::string out;
    std::string manifest; // default: <out>.manifest.json
    TrainConfig cfg;
    bool auto_axis = true; // resolve n_axis = ceil(sqrt(dimension)) when set
    std::uint32_t trees = 32;
    std::uint64_t seed = 0;
    unsigned threads = 0; // 0 = hardware concurrency (IFOREST_THREADS overrides)
};

struct PredictOptions {
    std::string model;
    std::string data;
    std::string out;
    std::string manifest; // default: <out>.manifest.json
    bool unlabeled = false;
};

struct BenchOptions {
    std::string experiment = "stripes-depth";
    StripesDepthSpec spec;
    std::string out;
    std::string manifest; // default: <out>.manifest.json
    bool auto_axis = true;
};

struct InspectOptions {
    std::string model;
    std::string manifest; // default: <model>.inspect.manifest.json
};

int cmd_gen(const GenOptions& opt);
int cmd_train(const TrainOptions& opt);
int cmd_predict(const PredictOptions& opt);
int cmd_bench(const BenchOptions& opt);
int cmd_inspect(const InspectOptions& opt);

/// Runs a command body, mapping thrown errors to the documented exit codes
/// and printing the message to stderr.
int guarded(const std::function<int()>& body);

} // namespace iforest::cli
