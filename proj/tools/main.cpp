#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <stdexcept>

#include "commands.hpp"
#include "selftest.hpp"
#include "sweep.hpp"

namespace {

// Exit codes: 0 success, 1 validation/config error, 2 data error,
// 3 selftest failure.
template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::out_of_range& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

void add_data_flags(CLI::App* cmd, tps::cli::DataOptions& data) {
    // --h is the forecast horizon, so help lives on --help alone.
    cmd->set_help_flag("--help", "print help");
    cmd->add_option("--data", data.data_path, "input CSV dataset")->required();
    cmd->add_option("--channels", data.channels,
                    "comma-separated channel columns (names or 0-based indices); "
                    "default: every non-timestamp column");
    cmd->add_option("--splits", data.splits,
                    "train,val,test sizes; values <= 1 are fractions, larger "
                    "values are row counts (default 0.7,0.1,0.2)");
    cmd->add_option("--timestamp-col", data.timestamp_column,
                    "timestamp column name (default: a column named 'date')");
    cmd->add_option("--delimiter", data.delimiter, "CSV delimiter (default ',')");
    cmd->add_option("--t", data.lookback, "look-back window length")->required();
    cmd->add_option("--h", data.horizon, "forecast horizon length")->required();
    cmd->add_option("--window-stride", data.window_stride,
                    "stride between consecutive windows (default 1)");
    cmd->add_flag("--zero-var-passthrough", data.zero_variance_passthrough,
                  "leave zero-variance training channels unscaled instead of failing");
}

void add_aug_flags(CLI::App* cmd, tps::cli::AugOptions& aug) {
    cmd->add_option("--p", aug.patch_len, "patch length (default 32)");
    cmd->add_option("--s", aug.stride, "patch stride (default 1)");
    cmd->add_option("--alpha", aug.alpha, "shuffle rate in (0, 1] (default 1.0)");
    cmd->add_option("--variant", aug.variant,
                    "standard | no-variance-order | non-overlapping | "
                    "input-only | frequency-domain");
    cmd->add_option("--level", aug.level, "batch | sample (default batch)");
    cmd->add_option("--seed", aug.seed, "master RNG seed (default 0)");
    cmd->add_option("--size", aug.size,
                    "synthetic replicas per original window (default 1)");
    cmd->add_option("--ratio", aug.ratio,
                    "fraction of synthetic windows kept (default 1.0)");
    cmd->add_option("--upsample-rate", aug.upsample_rate,
                    "run the Upsample baseline with this segment-length rate "
                    "instead of patch shuffling");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Temporal patch-shuffle augmentation for time-series data"};
    app.require_subcommand(1);

    tps::cli::AugmentArgs augment;
    CLI::App* cmd_augment = app.add_subcommand(
        "augment", "write original + synthetic windows for a dataset");
    add_data_flags(cmd_augment, augment.data);
    add_aug_flags(cmd_augment, augment.aug);
    cmd_augment->add_option("--batch-size", augment.batch_size,
                            "windows per processing batch (default 64)");
    cmd_augment->add_option("--out", augment.out_path, "output CSV path")->required();
    cmd_augment->add_option("--format", augment.format, "output format (csv)");

    tps::cli::SweepArgs sweep;
    CLI::App* cmd_sweep = app.add_subcommand(
        "sweep", "rank (p, s, alpha) candidates by validation MSE of a proxy scorer");
    add_data_flags(cmd_sweep, sweep.data);
    add_aug_flags(cmd_sweep, sweep.aug);
    cmd_sweep->add_option("--grid-file", sweep.grid_file,
                          "candidate file, one 'p,s,alpha' per line "
                          "(default: built-in 20-candidate grid)");
    cmd_sweep->add_option("--scorer", sweep.scorer, "validation scorer (ridge)");
    cmd_sweep->add_option("--batch-size", sweep.batch_size,
                          "windows per processing batch (default 64)");
    cmd_sweep->add_option("--out", sweep.out_path, "optional ranking JSON path");
    cmd_sweep->add_option("--apply-out", sweep.apply_out,
                          "augment with the winning tuple into this CSV");

    tps::cli::ReportArgs report;
    CLI::App* cmd_report = app.add_subcommand(
        "report", "distribution-shift metrics between original and synthetic windows");
    cmd_report->add_option("--augmented", report.augmented_path,
                           "augmented CSV produced by 'tps augment'");
    add_data_flags(cmd_report, report.data);
    add_aug_flags(cmd_report, report.aug);
    cmd_report->add_option("--windows", report.windows,
                           "evenly spaced window budget when generating "
                           "(default 256; 0 = all)");
    cmd_report->add_option("--out", report.out_path, "optional JSON report path");
    // --augmented mode needs no dataset; relax the shared required flags.
    cmd_report->get_option("--data")->required(false);
    cmd_report->get_option("--t")->required(false);
    cmd_report->get_option("--h")->required(false);

    std::uint64_t selftest_seed = 0;
    CLI::App* cmd_selftest =
        app.add_subcommand("selftest", "run the built-in oracle suite");
    cmd_selftest->add_option("--seed", selftest_seed,
                             "seed for the randomized checks (default 0)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1; // flag/usage problems are validation errors
    }

    if (cmd_augment->parsed())
        return guarded([&] { return tps::cli::run_augment(augment); });
    if (cmd_sweep->parsed())
        return guarded([&] { return tps::cli::run_sweep(sweep); });
    if (cmd_report->parsed())
        return guarded([&] { return tps::cli::run_report(report); });
    if (cmd_selftest->parsed())
        return guarded([&] { return tps::cli::run_selftest(selftest_seed); });
    return 1;
}
