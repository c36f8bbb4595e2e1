#include "iforest/bench.hpp"

#include <sstream>

#include "iforest/csv.hpp"
#include "iforest/datagen.hpp"
#include "iforest/forest.hpp"

namespace iforest {

namespace {

BenchRow measure(const std::string& method, const Forest& forest, const Dataset& train,
                 const Dataset& test) {
    BenchRow row;
    row.method = method;
    double depth_sum = 0.0, balance_sum = 0.0;
    for (const auto& tree : forest.trees) {
        const TreeStats stats = tree_stats(*tree);
        depth_sum += stats.depth;
        balance_sum += stats.balance;
        row.max_depth = std::max(row.max_depth, stats.depth);
        row.kl_nodes += stats.n_kl_nodes;
        row.h_nodes += stats.n_h_nodes;
        row.leaves += stats.n_leaves;
    }
    row.mean_depth = depth_sum / static_cast<double>(forest.trees.size());
    row.mean_balance = balance_sum / static_cast<double>(forest.trees.size());
    row.train_acc = accuracy(forest, train);
    row.test_acc = accuracy(forest, test);
    return row;
}

} // namespace

std::vector<BenchRow> run_stripes_depth(const StripesDepthSpec& spec) {
    if (spec.n_groups_list.empty()) throw InvalidInputError("n_groups_list must be nonempty");
    if (spec.repeats == 0) throw InvalidInputError("repeats must be at least 1");

    std::vector<BenchRow> rows;
    rows.reserve(spec.n_groups_list.size() * spec.repeats * 2);

    for (std::uint32_t n_groups : spec.n_groups_list) {
        for (std::uint32_t repeat = 0; repeat < spec.repeats; ++repeat) {
            const std::uint64_t data_seed =
                Rng::mix(spec.seed, (static_cast<std::uint64_t>(n_groups) << 20) + repeat);
            StripesSpec train_spec{n_groups, spec.per_group, spec.jitter, data_seed};
            StripesSpec test_spec{n_groups, spec.per_group, spec.jitter,
                                  Rng::mix(data_seed, 0x7e57)};
            const Dataset train = gen_stripes(train_spec);
            const Dataset test = gen_stripes(test_spec);

            TrainConfig rf_cfg = spec.base;
            rf_cfg.tau = 0.0;
            TrainConfig if_cfg = spec.base;
            if_cfg.tau = spec.tau;

            for (const auto& [method, cfg] :
                 {std::pair<const char*, const TrainConfig&>{"rf", rf_cfg},
                  std::pair<const char*, const TrainConfig&>{"if", if_cfg}}) {
                const Forest forest =
                    train_forest(train, cfg, spec.n_trees, data_seed, spec.threads);
                BenchRow row = measure(method, forest, train, test);
                row.n_groups = n_groups;
                row.repeat = repeat;
                row.seed = data_seed;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::string bench_csv_header() {
    return "method,n_groups,repeat,seed,mean_depth,max_depth,mean_balance,"
           "kl_nodes,h_nodes,leaves,train_acc,test_acc";
}

std::string bench_csv_row(const BenchRow& row) {
    std::ostringstream out;
    out << row.method << ',' << row.n_groups << ',' << row.repeat << ',' << row.seed << ','
        << format_double(row.mean_depth) << ',' << row.max_depth << ','
        << format_double(row.mean_balance) << ',' << row.kl_nodes << ',' << row.h_nodes << ','
        << row.leaves << ',' << format_double(row.train_acc) << ','
        << format_double(row.test_acc);
    return out.str();
}

} // namespace iforest
