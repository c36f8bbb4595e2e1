#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "iforest/cli.hpp"

namespace {

using namespace iforest;

unsigned threads_from_env() {
    const char* env = std::getenv("IFOREST_THREADS");
    if (env == nullptr) return 0;
    const long parsed = std::strtol(env, nullptr, 10);
    return parsed > 0 ? static_cast<unsigned>(parsed) : 0;
}

// Training flags shared by train and bench.
void add_train_flags(CLI::App& cmd, TrainConfig& cfg, bool& explicit_axis) {
    cmd.add_option("--tau", cfg.tau, "Divergence confidence threshold in nats")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd.add_option("--delta", cfg.delta, "Minimum information gain in nats")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd.add_option("--max-depth", cfg.max_depth, "Depth cap")->capture_default_str();
    cmd.add_option("--min-samples", cfg.min_samples, "Smallest splittable node")
        ->capture_default_str();
    cmd.add_option("--n-axis", cfg.pool.n_axis,
                   "Axis projections per node (default: ceil(sqrt(dimension)))")
        ->each([&explicit_axis](const std::string&) { explicit_axis = true; });
    cmd.add_option("--n-linear", cfg.pool.n_linear, "Random linear projections per node")
        ->capture_default_str();
    cmd.add_option("--n-thresholds", cfg.pool.n_thresholds, "Candidate thresholds per projection")
        ->capture_default_str();
    cmd.add_option("--bins", cfg.divergence.bins, "Histogram bins")->capture_default_str();
    cmd.add_option("--smoothing", cfg.divergence.smoothing, "Histogram pseudo-count per bin")
        ->capture_default_str();
    cmd.add_flag("--symmetrize", cfg.divergence.symmetrize,
                 "Use the symmetrized divergence kl(p,q) + kl(q,p)");
    std::map<std::string, Resample> resample_names{{"bootstrap", Resample::bootstrap},
                                                   {"subsample", Resample::subsample},
                                                   {"none", Resample::none}};
    cmd.add_option("--resample", cfg.resample, "Per-tree resampling scheme")
        ->transform(CLI::CheckedTransformer(resample_names, CLI::ignore_case))
        ->default_str("bootstrap");
    cmd.add_option("--subsample-fraction", cfg.subsample_fraction,
                   "Fraction kept when --resample subsample")
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"information-forest binary classifier: divergence-gated decision forests"};
    app.require_subcommand(1);

    // --- gen ----------------------------------------------------------------
    cli::GenOptions gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset CSV");
    gen_cmd->require_subcommand(1);

    CLI::App* stripes = gen_cmd->add_subcommand("stripes", "Alternating-label stripes");
    stripes->add_option("--n-groups", gen.stripes.n_groups, "Number of stripes")
        ->capture_default_str();
    stripes->add_option("--per-group", gen.stripes.per_group, "Samples per stripe")
        ->capture_default_str();
    stripes->add_option("--jitter", gen.stripes.jitter, "Gaussian jitter on dim 0")
        ->capture_default_str();
    stripes->add_option("--seed", gen.stripes.seed, "Generator seed")->capture_default_str();
    stripes->add_option("--out", gen.out, "Output CSV path")->required();
    stripes->add_option("--manifest", gen.manifest, "Manifest path (default <out>.manifest.json)");

    CLI::App* parts = gen_cmd->add_subcommand("parts", "Hidden-parts regime");
    parts->add_option("--n-parts", gen.parts.n_parts, "Number of parts")->capture_default_str();
    parts->add_option("--per-part", gen.parts.per_part, "Samples per part per class")
        ->capture_default_str();
    parts->add_option("--separation", gen.parts.separation, "Within-part class offset")
        ->capture_default_str();
    parts->add_option("--noise", gen.parts.noise, "Measurement noise sigma")
        ->capture_default_str();
    parts->add_option("--seed", gen.parts.seed, "Generator seed")->capture_default_str();
    parts->add_option("--out", gen.out, "Output CSV path")->required();
    parts->add_option("--manifest", gen.manifest, "Manifest path (default <out>.manifest.json)");

    CLI::App* blobs = gen_cmd->add_subcommand("blobs", "Two Gaussian blobs");
    blobs->add_option("--n-per-class", gen.blobs_per_class, "Samples per class")
        ->capture_default_str();
    blobs->add_option("--mean-shift", gen.blobs_shift, "Mean separation along dim 0")
        ->capture_default_str();
    blobs->add_option("--seed", gen.blobs_seed, "Generator seed")->capture_default_str();
    blobs->add_option("--out", gen.out, "Output CSV path")->required();
    blobs->add_option("--manifest", gen.manifest, "Manifest path (default <out>.manifest.json)");

    // --- train ----------------------------------------------------------------
    cli::TrainOptions train;
    bool train_explicit_axis = false;
    CLI::App* train_cmd = app.add_subcommand("train", "Train a forest on a dataset CSV");
    train_cmd->add_option("--data", train.data, "Training CSV")->required();
    train_cmd->add_option("--out", train.out, "Model output path")->required();
    train_cmd->add_option("--trees", train.trees, "Ensemble size")->capture_default_str();
    train_cmd->add_option("--seed", train.seed, "Training seed")->capture_default_str();
    train_cmd->add_option("--manifest", train.manifest,
                          "Manifest path (default <out>.manifest.json)");
    add_train_flags(*train_cmd, train.cfg, train_explicit_axis);

    // --- predict ----------------------------------------------------------------
    cli::PredictOptions predict;
    CLI::App* predict_cmd = app.add_subcommand("predict", "Predict labels with a trained model");
    predict_cmd->add_option("--model", predict.model, "Model path")->required();
    predict_cmd->add_option("--data", predict.data, "Input CSV")->required();
    predict_cmd->add_option("--out", predict.out, "Predictions CSV path")->required();
    predict_cmd->add_flag("--unlabeled", predict.unlabeled,
                          "Treat every input column as a feature (no label column)");
    predict_cmd->add_option("--manifest", predict.manifest,
                            "Manifest path (default <out>.manifest.json)");

    // --- bench ----------------------------------------------------------------
    cli::BenchOptions bench;
    bool bench_explicit_axis = false;
    std::string n_groups_list = "4,8,16";
    CLI::App* bench_cmd = app.add_subcommand("bench", "Structure benchmark: tau=0 baseline vs gated");
    bench_cmd->add_option("--experiment", bench.experiment, "Experiment name")
        ->capture_default_str();
    bench_cmd->add_option("--n-groups-list", n_groups_list, "Comma-separated stripe counts")
        ->capture_default_str();
    bench_cmd->add_option("--per-group", bench.spec.per_group, "Samples per stripe")
        ->capture_default_str();
    bench_cmd->add_option("--repeats", bench.spec.repeats, "Repeat seeds per setting")
        ->capture_default_str();
    bench_cmd->add_option("--trees", bench.spec.n_trees, "Ensemble size")->capture_default_str();
    bench_cmd->add_option("--jitter", bench.spec.jitter, "Stripe jitter")->capture_default_str();
    bench_cmd->add_option("--seed", bench.spec.seed, "Base seed")->capture_default_str();
    bench_cmd->add_option("--out", bench.out, "Report CSV path")->required();
    bench_cmd->add_option("--manifest", bench.manifest,
                          "Manifest path (default <out>.manifest.json)");
    add_train_flags(*bench_cmd, bench.spec.base, bench_explicit_axis);

    // --- inspect ----------------------------------------------------------------
    cli::InspectOptions inspect;
    CLI::App* inspect_cmd = app.add_subcommand("inspect", "Summarize a trained model");
    inspect_cmd->add_option("--model", inspect.model, "Model path")->required();
    inspect_cmd->add_option("--manifest", inspect.manifest,
                            "Manifest path (default <model>.inspect.manifest.json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::exit_usage;
    }

    return cli::guarded([&]() -> int {
        if (gen_cmd->parsed()) {
            if (stripes->parsed()) gen.kind = "stripes";
            if (parts->parsed()) gen.kind = "parts";
            if (blobs->parsed()) gen.kind = "blobs";
            return cli::cmd_gen(gen);
        }
        if (train_cmd->parsed()) {
            train.auto_axis = !train_explicit_axis;
            train.threads = threads_from_env();
            return cli::cmd_train(train);
        }
        if (predict_cmd->parsed()) return cli::cmd_predict(predict);
        if (bench_cmd->parsed()) {
            bench.auto_axis = !bench_explicit_axis;
            bench.spec.threads = threads_from_env();
            bench.spec.n_groups_list.clear();
            std::stringstream list(n_groups_list);
            std::string item;
            while (std::getline(list, item, ','))
                bench.spec.n_groups_list.push_back(
                    static_cast<std::uint32_t>(std::stoul(item)));
            bench.spec.tau = bench.spec.base.tau;
            return cli::cmd_bench(bench);
        }
        if (inspect_cmd->parsed()) return cli::cmd_inspect(inspect);
        return cli::exit_usage;
    });
}
