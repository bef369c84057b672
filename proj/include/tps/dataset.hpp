#ifndef TPS_DATASET_HPP
#define TPS_DATASET_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tps/series.hpp"

namespace tps {

/// How to read and split one CSV dataset. Split sizes are either absolute
/// row counts or fractions of the total (every entry <= 1 means fractions).
struct DatasetSpec {
    std::string path;
    char delimiter = ',';
    std::vector<std::string> channel_columns; ///< names or 0-based indices; empty = all non-timestamp columns
    std::optional<std::string> timestamp_column; ///< carried through, never enters computation
    std::array<double, 3> split{0.7, 0.15, 0.15};
    std::size_t lookback = 0;
    std::size_t horizon = 0;
    std::size_t window_stride = 1;
    bool zero_variance_passthrough = false;
};

struct LoadedCsv {
    SeriesBatch series; ///< B = 1, full file length
    std::vector<std::string> channel_names;
    std::vector<std::string> timestamps; ///< empty when no timestamp column
};

/// Parse the CSV named by the spec. Every channel cell must parse as a
/// finite real; failures raise errors addressed by row and column. A column
/// literally named "date" is treated as the timestamp column when none is
/// configured.
LoadedCsv load_csv(const DatasetSpec& spec);

/// Per-channel standardization statistics fitted on the training split.
struct ChannelStats {
    std::vector<double> mean;
    std::vector<double> stddev;
    std::vector<bool> scaled; ///< false for pass-through (zero-variance) channels

    SeriesBatch apply(const SeriesBatch& x) const;
    SeriesBatch invert(const SeriesBatch& x) const;
};

struct StandardizedSplits {
    SeriesBatch train;
    std::optional<SeriesBatch> val;
    std::optional<SeriesBatch> test;
    ChannelStats stats;
    std::array<std::size_t, 3> rows; ///< resolved split row counts
};

/// Chronological contiguous train/val/test split; all three transformed with
/// (v - mean_c) / std_c using statistics from the training rows only.
/// A zero-variance training channel raises unless the spec enables
/// pass-through, in which case the channel is left unscaled.
StandardizedSplits split_standardize(const SeriesBatch& x, const DatasetSpec& spec);

/// Number of (lookback, horizon) windows a split of `length` yields.
std::size_t window_count(std::size_t length, std::size_t lookback,
                         std::size_t horizon, std::size_t window_stride = 1);

/**
 * Streams sliding (look-back, horizon) windows out of one split (B = 1),
 * grouped into batches of at most `batch_size`. Window k starts at row
 * k * window_stride.
 */
class WindowBatcher {
public:
    WindowBatcher(const SeriesBatch& split, std::size_t lookback,
                  std::size_t horizon, std::size_t batch_size,
                  std::size_t window_stride = 1);

    std::size_t total_windows() const { return total_; }

    /// Produces the next batch, or nullopt when exhausted. `first_window`
    /// receives the global index of the batch's first window.
    std::optional<SplitPair> next(std::size_t& first_window);

private:
    const SeriesBatch& split_;
    std::size_t lookback_;
    std::size_t horizon_;
    std::size_t batch_size_;
    std::size_t window_stride_;
    std::size_t total_;
    std::size_t cursor_ = 0;
};

/// One labelled window in an augmented-output file.
struct AugmentedRecord {
    std::size_t window_id;  ///< source window index (shared by its replicas)
    bool synthetic;
    SeriesBatch window;     ///< B = 1, length t + h
};

/**
 * Writer for the augmented CSV format: header
 * `window_id,role,step,c0..c{C-1}`, LF line endings, values printed with 17
 * significant digits so read-back is bit-exact.
 */
class AugmentedWriter {
public:
    AugmentedWriter(const std::string& path, std::size_t channels);
    ~AugmentedWriter();

    void write(const SplitPair& pair, std::span<const std::size_t> window_ids,
               const std::vector<bool>& synthetic_flags);
    void write(const AugmentedRecord& record);
    void close();

    std::size_t rows_written() const { return rows_; }

private:
    struct Impl;
    Impl* impl_;
    std::size_t rows_ = 0;
};

/// Read back a file produced by AugmentedWriter.
std::vector<AugmentedRecord> read_augmented(const std::string& path);

/// FNV-1a hash of a file's bytes, for run manifests.
std::uint64_t hash_file(const std::string& path);

} // namespace tps

#endif // TPS_DATASET_HPP
