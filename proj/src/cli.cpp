#include "iforest/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "iforest/csv.hpp"
#include "iforest/forest.hpp"

namespace iforest::cli {

using nlohmann::json;

namespace {

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string default_manifest(const std::string& explicit_path, const std::string& anchor,
                             const char* suffix = ".manifest.json") {
    return explicit_path.empty() ? anchor + suffix : explicit_path;
}

void write_manifest(const std::string& path, json manifest, double seconds) {
    manifest["duration_seconds"] = seconds;
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << manifest.dump(2) << "\n";
    if (!out) throw IoError("failed writing '" + path + "'");
}

json dataset_manifest_entry(const std::string& path, const Dataset& data) {
    return json{{"path", path},
                {"fingerprint", file_fingerprint(path)},
                {"rows", data.size()},
                {"dimension", data.dimension()}};
}

json config_manifest(const TrainConfig& cfg) {
    // Reuse the model serializer's config block so the manifest and the model
    // agree field for field.
    Forest probe;
    probe.config = cfg;
    return json::parse(serialize(probe))["config"];
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::uint32_t resolve_axis_count(bool auto_axis, std::uint32_t configured, std::size_t dim) {
    if (!auto_axis) return configured;
    const auto root = static_cast<std::uint32_t>(
        std::ceil(std::sqrt(static_cast<double>(dim))));
    return std::max<std::uint32_t>(1, std::min<std::uint32_t>(root, static_cast<std::uint32_t>(dim)));
}

struct ForestSummary {
    std::uint64_t kl_nodes = 0, h_nodes = 0, leaves = 0;
    std::uint32_t max_depth = 0;
    double mean_depth = 0.0, mean_balance = 0.0;
    std::map<std::uint32_t, std::uint32_t> depth_histogram;
};

ForestSummary summarize(const Forest& forest) {
    ForestSummary s;
    double depth_sum = 0.0, balance_sum = 0.0;
    for (const auto& tree : forest.trees) {
        const TreeStats stats = tree_stats(*tree);
        s.kl_nodes += stats.n_kl_nodes;
        s.h_nodes += stats.n_h_nodes;
        s.leaves += stats.n_leaves;
        s.max_depth = std::max(s.max_depth, stats.depth);
        depth_sum += stats.depth;
        balance_sum += stats.balance;
        ++s.depth_histogram[stats.depth];
    }
    s.mean_depth = depth_sum / static_cast<double>(forest.trees.size());
    s.mean_balance = balance_sum / static_cast<double>(forest.trees.size());
    return s;
}

} // namespace

std::string file_fingerprint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::uint64_t hash = 0xcbf29ce484222325ull;
    char chunk[4096];
    while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(chunk[i]);
            hash *= 0x100000001b3ull;
        }
        if (!in) break;
    }
    std::ostringstream out;
    out << "fnv1a64:" << std::hex;
    out.width(16);
    out.fill('0');
    out << hash;
    return out.str();
}

int cmd_gen(const GenOptions& opt) {
    Stopwatch watch;
    if (opt.out.empty()) throw InvalidInputError("gen requires --out");

    Dataset data = [&] {
        if (opt.kind == "stripes") return gen_stripes(opt.stripes);
        if (opt.kind == "parts") return gen_hidden_parts(opt.parts);
        if (opt.kind == "blobs")
            return gen_blobs(opt.blobs_per_class, opt.blobs_shift, opt.blobs_seed);
        throw InvalidInputError("unknown generator '" + opt.kind + "'");
    }();
    save_dataset_csv(data, opt.out);

    const LabelDistribution dist = label_distribution(data, SampleView::full(data));
    const double balance = static_cast<double>(dist.count1) / static_cast<double>(dist.total());
    std::cout << "wrote " << data.size() << " samples to " << opt.out
              << " (class-1 fraction " << format_double(balance) << ")\n";

    json spec;
    std::uint64_t seed = 0;
    if (opt.kind == "stripes") {
        spec = {{"n_groups", opt.stripes.n_groups},
                {"per_group", opt.stripes.per_group},
                {"jitter", opt.stripes.jitter}};
        seed = opt.stripes.seed;
    } else if (opt.kind == "parts") {
        spec = {{"n_parts", opt.parts.n_parts},
                {"per_part", opt.parts.per_part},
                {"separation", opt.parts.separation},
                {"noise", opt.parts.noise}};
        seed = opt.parts.seed;
    } else {
        spec = {{"n_per_class", opt.blobs_per_class}, {"mean_shift", opt.blobs_shift}};
        seed = opt.blobs_seed;
    }

    json manifest{{"command", "gen"},
                  {"generator", opt.kind},
                  {"config", spec},
                  {"seed", seed},
                  {"datasets", json::array({dataset_manifest_entry(opt.out, data)})},
                  {"metrics",
                   json{{"rows", data.size()}, {"class1_fraction", balance}}},
                  {"outputs", json{{"data", opt.out}}}};
    write_manifest(default_manifest(opt.manifest, opt.out), std::move(manifest),
                   watch.seconds());
    return exit_ok;
}

int cmd_train(const TrainOptions& opt) {
    Stopwatch watch;
    if (opt.data.empty()) throw InvalidInputError("train requires --data");
    if (opt.out.empty()) throw InvalidInputError("train requires --out");

    const Dataset data = load_dataset_csv(opt.data);
    TrainConfig cfg = opt.cfg;
    cfg.pool.n_axis = resolve_axis_count(opt.auto_axis, cfg.pool.n_axis, data.dimension());

    const TrainOutput trained =
        train_forest_detailed(data, cfg, opt.trees, opt.seed, opt.threads);
    const std::string model = serialize(trained.forest);
    write_file(opt.out, model);

    const ForestSummary summary = summarize(trained.forest);
    std::cout << "trained " << opt.trees << " trees on " << data.size() << " samples (depth mean "
              << format_double(summary.mean_depth) << ", max " << summary.max_depth
              << "; KL nodes " << summary.kl_nodes << ", H nodes " << summary.h_nodes << ")\n";
    if (trained.oob)
        std::cout << "out-of-bag error " << format_double(trained.oob->error) << "\n";

    json metrics{{"kl_nodes", summary.kl_nodes},
                 {"h_nodes", summary.h_nodes},
                 {"leaves", summary.leaves},
                 {"max_depth", summary.max_depth},
                 {"mean_depth", summary.mean_depth},
                 {"mean_balance", summary.mean_balance},
                 {"train_accuracy", accuracy(trained.forest, data)}};
    if (trained.oob) {
        metrics["oob_error"] = trained.oob->error;
        metrics["in_bag_unique_fraction"] = trained.oob->in_bag_unique_fraction;
    }

    json manifest{{"command", "train"},
                  {"config", config_manifest(cfg)},
                  {"n_trees", opt.trees},
                  {"seed", opt.seed},
                  {"datasets", json::array({dataset_manifest_entry(opt.data, data)})},
                  {"metrics", std::move(metrics)},
                  {"outputs", json{{"model", opt.out}}}};
    write_manifest(default_manifest(opt.manifest, opt.out), std::move(manifest),
                   watch.seconds());
    return exit_ok;
}

int cmd_predict(const PredictOptions& opt) {
    Stopwatch watch;
    if (opt.model.empty()) throw InvalidInputError("predict requires --model");
    if (opt.data.empty()) throw InvalidInputError("predict requires --data");
    if (opt.out.empty()) throw InvalidInputError("predict requires --out");

    const Forest forest = deserialize(read_file(opt.model));

    std::vector<double> features; // row-major, forest.dimension per row
    std::vector<int> labels;      // empty when unlabeled
    std::size_t rows = 0;
    if (opt.unlabeled) {
        FeatureTable table = load_feature_table_csv(opt.data);
        if (table.cols != forest.dimension)
            throw DimensionError("model expects " + std::to_string(forest.dimension) +
                                 " feature columns, data has " + std::to_string(table.cols));
        features = std::move(table.values);
        rows = table.rows;
    } else {
        const Dataset data = load_dataset_csv(opt.data);
        if (data.dimension() != forest.dimension)
            throw DimensionError("model expects " + std::to_string(forest.dimension) +
                                 " feature columns, data has " +
                                 std::to_string(data.dimension()));
        rows = data.size();
        features.reserve(rows * forest.dimension);
        labels.reserve(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            const auto row = data.row(i);
            features.insert(features.end(), row.begin(), row.end());
            labels.push_back(data.label(i));
        }
    }

    std::ofstream out(opt.out);
    if (!out) throw IoError("cannot open '" + opt.out + "' for writing");
    out << "# predicted_label, vote_fraction, mean_posterior\n";
    std::size_t correct = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        const std::span<const double> row{features.data() + i * forest.dimension,
                                          forest.dimension};
        const Prediction p = predict(forest, row);
        out << p.label << "," << format_double(p.vote_fraction) << ","
            << format_double(p.mean_posterior) << "\n";
        if (!labels.empty() && p.label == labels[i]) ++correct;
    }
    if (!out) throw IoError("failed writing '" + opt.out + "'");

    json metrics{{"rows", rows}};
    if (!labels.empty()) {
        const double acc = static_cast<double>(correct) / static_cast<double>(rows);
        std::cout << "accuracy " << format_double(acc) << " over " << rows << " samples\n";
        metrics["accuracy"] = acc;
    } else {
        std::cout << "predicted " << rows << " samples\n";
    }

    json manifest{{"command", "predict"},
                  {"config", json{{"unlabeled", opt.unlabeled}}},
                  {"model", json{{"path", opt.model},
                                 {"fingerprint", file_fingerprint(opt.model)}}},
                  {"datasets", json::array({json{{"path", opt.data},
                                                 {"fingerprint", file_fingerprint(opt.data)},
                                                 {"rows", rows}}})},
                  {"metrics", std::move(metrics)},
                  {"outputs", json{{"predictions", opt.out}}}};
    write_manifest(default_manifest(opt.manifest, opt.out), std::move(manifest),
                   watch.seconds());
    return exit_ok;
}

int cmd_bench(const BenchOptions& opt) {
    Stopwatch watch;
    if (opt.experiment != "stripes-depth")
        throw InvalidInputError("unknown experiment '" + opt.experiment + "'");
    if (opt.out.empty()) throw InvalidInputError("bench requires --out");

    StripesDepthSpec spec = opt.spec;
    spec.base.pool.n_axis = resolve_axis_count(opt.auto_axis, spec.base.pool.n_axis, 2);

    const std::vector<BenchRow> rows = run_stripes_depth(spec);
    std::ofstream out(opt.out);
    if (!out) throw IoError("cannot open '" + opt.out + "' for writing");
    out << bench_csv_header() << "\n";
    for (const BenchRow& row : rows) out << bench_csv_row(row) << "\n";
    if (!out) throw IoError("failed writing '" + opt.out + "'");
    std::cout << "wrote " << rows.size() << " report rows to " << opt.out << "\n";

    json manifest{{"command", "bench"},
                  {"experiment", opt.experiment},
                  {"config",
                   json{{"n_groups_list", spec.n_groups_list},
                        {"per_group", spec.per_group},
                        {"repeats", spec.repeats},
                        {"n_trees", spec.n_trees},
                        {"tau", spec.tau},
                        {"jitter", spec.jitter},
                        {"base", config_manifest(spec.base)}}},
                  {"seed", spec.seed},
                  {"metrics", json{{"rows", rows.size()}}},
                  {"outputs", json{{"report", opt.out}}}};
    write_manifest(default_manifest(opt.manifest, opt.out), std::move(manifest),
                   watch.seconds());
    return exit_ok;
}

int cmd_inspect(const InspectOptions& opt) {
    Stopwatch watch;
    if (opt.model.empty()) throw InvalidInputError("inspect requires --model");

    const Forest forest = deserialize(read_file(opt.model));
    const ForestSummary summary = summarize(forest);

    std::cout << "model: " << opt.model << "\n"
              << "dimension: " << forest.dimension << ", trees: " << forest.n_trees
              << ", seed: " << forest.seed << "\n"
              << "config: " << config_manifest(forest.config).dump() << "\n";
    std::cout << "tree, depth, kl_nodes, h_nodes, leaves, balance\n";
    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
        const TreeStats stats = tree_stats(*forest.trees[t]);
        std::cout << t << ", " << stats.depth << ", " << stats.n_kl_nodes << ", "
                  << stats.n_h_nodes << ", " << stats.n_leaves << ", "
                  << format_double(stats.balance) << "\n";
    }
    std::cout << "KL nodes: " << summary.kl_nodes << "\n"
              << "H nodes: " << summary.h_nodes << "\n"
              << "leaves: " << summary.leaves << "\n"
              << "depth histogram:";
    for (const auto& [depth, count] : summary.depth_histogram)
        std::cout << " " << depth << ":" << count;
    std::cout << "\n";

    json manifest{{"command", "inspect"},
                  {"model", json{{"path", opt.model},
                                 {"fingerprint", file_fingerprint(opt.model)}}},
                  {"metrics",
                   json{{"kl_nodes", summary.kl_nodes},
                        {"h_nodes", summary.h_nodes},
                        {"leaves", summary.leaves},
                        {"max_depth", summary.max_depth},
                        {"mean_depth", summary.mean_depth},
                        {"mean_balance", summary.mean_balance}}},
                  {"outputs", json::object()}};
    write_manifest(default_manifest(opt.manifest, opt.model, ".inspect.manifest.json"),
                   std::move(manifest), watch.seconds());
    return exit_ok;
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ModelFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_model;
    } catch (const ModelVersionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_model;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_model;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_data;
    } catch (const InvalidInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_data;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_failure;
    }
}

} // namespace iforest::cli
