#include "commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>

#include "tps/metrics.hpp"
#include "tps/parallel.hpp"
#include "tps/rng.hpp"

namespace tps::cli {

namespace {

constexpr std::uint64_t kRatioDomain = 0x524154494F544843ull;
constexpr std::uint64_t kUpsampleReplica = 0x55505245504C4943ull;

// Synthetic windows for one batch whose first window has global index
// `first`. Returns k * B windows; window b of replica r descends from
// original b. Elements are keyed by their global window index so the output
// does not depend on the batch size.
SplitPair generate_synthetic(const SplitPair& pair, const AugOptions& aug,
                             std::size_t first) {
    if (aug.use_upsample()) {
        std::optional<SplitPair> merged;
        for (std::size_t r = 0; r < aug.size; ++r) {
            const std::uint64_t seed =
                r == 0 ? aug.seed : derive_seed(aug.seed, kUpsampleReplica + r);
            SplitPair replica = upsample_baseline(pair, aug.upsample_rate, seed, first);
            merged = merged ? merge_batches(*merged, replica) : std::move(replica);
        }
        return *merged;
    }
    TpsConfig cfg = aug.to_config();
    cfg.substream_base = first;
    return tps_replicated(pair, cfg, aug.size);
}

// Deterministically choose floor(ratio * count) replica indices to keep,
// reported in ascending order.
std::vector<std::size_t> thin_indices(double ratio, std::size_t count,
                                      std::uint64_t seed, std::size_t first) {
    if (ratio >= 1.0) {
        std::vector<std::size_t> all(count);
        for (std::size_t i = 0; i < count; ++i) all[i] = i;
        return all;
    }
    const std::size_t keep = static_cast<std::size_t>(
        ratio * static_cast<double>(count) + 1e-9);
    if (keep == 0) return {};
    RngStream rng(derive_seed(seed, kRatioDomain), first);
    std::vector<std::size_t> chosen = rng.subset(count, keep);
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

nlohmann::json config_json(const AugmentArgs& args) {
    return {
        {"data", args.data.data_path},
        {"channels", args.data.channels},
        {"splits", args.data.splits},
        {"t", args.data.lookback},
        {"h", args.data.horizon},
        {"window_stride", args.data.window_stride},
        {"p", args.aug.patch_len},
        {"s", args.aug.stride},
        {"alpha", args.aug.alpha},
        {"variant", args.aug.variant},
        {"level", args.aug.level},
        {"seed", args.aug.seed},
        {"size", args.aug.size},
        {"ratio", args.aug.ratio},
        {"upsample_rate", args.aug.upsample_rate},
        {"batch_size", args.batch_size},
        {"format", args.format},
    };
}

} // namespace

int run_augment(const AugmentArgs& args) {
    if (args.format != "csv")
        throw std::invalid_argument("--format: only 'csv' is supported");
    if (args.out_path.empty())
        throw std::invalid_argument("--out is required");
    if (args.aug.ratio < 0.0 || args.aug.ratio > 1.0)
        throw std::invalid_argument("--ratio must lie in [0, 1]");
    if (args.aug.size == 0)
        throw std::invalid_argument("--size must be >= 1");

    const auto started = std::chrono::steady_clock::now();

    const DatasetSpec spec = args.data.to_spec();
    const LoadedCsv loaded = load_csv(spec);
    const StandardizedSplits splits = split_standardize(loaded.series, spec);

    WindowBatcher batcher(splits.train, spec.lookback, spec.horizon,
                          args.batch_size, spec.window_stride);
    AugmentedWriter writer(args.out_path, loaded.series.channels());

    std::size_t originals_written = 0;
    std::size_t synthetic_written = 0;
    std::size_t first = 0;
    while (auto batch = batcher.next(first)) {
        const std::size_t n = batch->batch();
        std::vector<std::size_t> ids(n);
        std::vector<bool> flags(n, false);
        for (std::size_t b = 0; b < n; ++b) ids[b] = first + b;
        writer.write(*batch, ids, flags);
        originals_written += n;

        if (args.aug.ratio == 0.0) continue;

        const SplitPair synthetic = generate_synthetic(*batch, args.aug, first);
        const std::vector<std::size_t> keep =
            thin_indices(args.aug.ratio, synthetic.batch(), args.aug.seed, first);
        if (keep.empty()) continue;

        SeriesBatch lb(keep.size(), synthetic.lookback_len(), synthetic.channels());
        SeriesBatch hz(keep.size(), synthetic.horizon_len(), synthetic.channels());
        std::vector<std::size_t> syn_ids(keep.size());
        std::vector<bool> syn_flags(keep.size(), true);
        for (std::size_t k = 0; k < keep.size(); ++k) {
            const auto src_lb = synthetic.lookback.element(keep[k]);
            const auto src_hz = synthetic.horizon.element(keep[k]);
            std::copy(src_lb.begin(), src_lb.end(), lb.element(k).begin());
            std::copy(src_hz.begin(), src_hz.end(), hz.element(k).begin());
            syn_ids[k] = first + keep[k] % n; // source window of the replica
        }
        writer.write(SplitPair{std::move(lb), std::move(hz)}, syn_ids, syn_flags);
        synthetic_written += keep.size();
    }
    writer.close();

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();

    nlohmann::json manifest{
        {"command", "augment"},
        {"config", config_json(args)},
        {"input",
         {{"path", spec.path},
          {"fnv1a64", hash_file(spec.path)},
          {"rows", loaded.series.length()},
          {"channels", loaded.series.channels()},
          {"split_rows", {splits.rows[0], splits.rows[1], splits.rows[2]}}}},
        {"output",
         {{"path", args.out_path},
          {"fnv1a64", hash_file(args.out_path)},
          {"rows", writer.rows_written()}}},
        {"windows",
         {{"original", originals_written}, {"synthetic", synthetic_written}}},
        {"threads", thread_budget()},
        {"seconds", seconds},
    };
    std::ofstream mf(args.out_path + ".manifest.json", std::ios::binary);
    mf << manifest.dump(2) << "\n";

    std::cout << "augment: " << originals_written << " original + "
              << synthetic_written << " synthetic windows -> " << args.out_path
              << "\n";
    return 0;
}

namespace {

// Original/synthetic pairs assembled for a shift report: row b of `original`
// is the source window of row b of `synthetic`.
struct ReportPairs {
    SeriesBatch original;
    SeriesBatch synthetic;

    ReportPairs(SeriesBatch orig, SeriesBatch syn)
        : original(std::move(orig)), synthetic(std::move(syn)) {}
};

ReportPairs pairs_from_file(const std::string& path) {
    const std::vector<AugmentedRecord> records = read_augmented(path);
    std::map<std::size_t, const AugmentedRecord*> originals;
    std::vector<const AugmentedRecord*> synthetic;
    for (const auto& record : records) {
        if (record.synthetic)
            synthetic.push_back(&record);
        else
            originals.emplace(record.window_id, &record);
    }
    if (synthetic.empty())
        throw std::runtime_error("augmented file contains no synthetic windows: " +
                                 path);

    const std::size_t T = synthetic.front()->window.length();
    const std::size_t C = synthetic.front()->window.channels();
    SeriesBatch orig(synthetic.size(), T, C);
    SeriesBatch syn(synthetic.size(), T, C);
    for (std::size_t i = 0; i < synthetic.size(); ++i) {
        const auto it = originals.find(synthetic[i]->window_id);
        if (it == originals.end())
            throw std::runtime_error(
                "synthetic window " + std::to_string(synthetic[i]->window_id) +
                " has no original counterpart in " + path);
        if (it->second->window.length() != T || synthetic[i]->window.length() != T)
            throw std::runtime_error("window length mismatch in " + path);
        const auto o = it->second->window.element(0);
        const auto s = synthetic[i]->window.element(0);
        std::copy(o.begin(), o.end(), orig.element(i).begin());
        std::copy(s.begin(), s.end(), syn.element(i).begin());
    }
    return {std::move(orig), std::move(syn)};
}

ReportPairs pairs_from_config(const ReportArgs& args) {
    const DatasetSpec spec = args.data.to_spec();
    const LoadedCsv loaded = load_csv(spec);
    const StandardizedSplits splits = split_standardize(loaded.series, spec);

    const std::size_t total = window_count(splits.train.length(), spec.lookback,
                                           spec.horizon, spec.window_stride);
    std::size_t count = args.windows == 0 ? total : std::min(args.windows, total);
    if (count == 0)
        throw std::invalid_argument("no windows available for the report");

    // Evenly spaced global window indices keep long datasets affordable while
    // covering the whole training span.
    std::vector<std::size_t> picks(count);
    for (std::size_t i = 0; i < count; ++i)
        picks[i] = count == 1 ? 0 : i * (total - 1) / (count - 1);

    const std::size_t T = spec.lookback + spec.horizon;
    const std::size_t C = splits.train.channels();
    SeriesBatch orig(count, T, C);
    SeriesBatch syn(count, T, C);

    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t start = picks[i] * spec.window_stride;
        SeriesBatch lb(1, spec.lookback, C);
        SeriesBatch hz(1, spec.horizon, C);
        for (std::size_t j = 0; j < spec.lookback; ++j)
            for (std::size_t c = 0; c < C; ++c)
                lb(0, j, c) = splits.train(0, start + j, c);
        for (std::size_t j = 0; j < spec.horizon; ++j)
            for (std::size_t c = 0; c < C; ++c)
                hz(0, j, c) = splits.train(0, start + spec.lookback + j, c);
        const SplitPair pair{std::move(lb), std::move(hz)};

        // Key by the true global window index, matching cmd_augment.
        AugOptions one = args.aug;
        one.size = 1;
        const SplitPair synthetic = generate_synthetic(pair, one, picks[i]);
        const SeriesBatch o = concat_time(pair.lookback, pair.horizon);
        const SeriesBatch s = concat_time(synthetic.lookback, synthetic.horizon);
        std::copy(o.element(0).begin(), o.element(0).end(), orig.element(i).begin());
        std::copy(s.element(0).begin(), s.element(0).end(), syn.element(i).begin());
    }
    return {std::move(orig), std::move(syn)};
}

} // namespace

int run_report(const ReportArgs& args) {
    const ReportPairs pairs = args.augmented_path.empty()
                                  ? pairs_from_config(args)
                                  : pairs_from_file(args.augmented_path);

    MetricsReport report = distribution_shift_report(pairs.original, pairs.synthetic);
    report.add("mse", mse(pairs.original, pairs.synthetic), "global over all entries");
    report.add("mae", mae(pairs.original, pairs.synthetic), "global over all entries");

    std::size_t widest = 0;
    for (const auto& entry : report.entries)
        widest = std::max(widest, entry.name.size());
    for (const auto& entry : report.entries) {
        std::printf("%-*s  %.10g  (%s)\n", static_cast<int>(widest),
                    entry.name.c_str(), entry.value, entry.aggregation.c_str());
    }

    if (!args.out_path.empty()) {
        nlohmann::json doc;
        doc["command"] = "report";
        doc["windows"] = pairs.original.batch();
        doc["window_length"] = pairs.original.length();
        doc["channels"] = pairs.original.channels();
        nlohmann::json metrics;
        for (const auto& entry : report.entries)
            metrics[entry.name] = {{"value", entry.value},
                                   {"aggregation", entry.aggregation}};
        doc["metrics"] = metrics;
        std::ofstream out(args.out_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open report output: " + args.out_path);
        out << doc.dump(2) << "\n";
    }
    return 0;
}

} // namespace tps::cli
