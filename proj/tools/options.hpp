#ifndef TPS_TOOLS_OPTIONS_HPP
#define TPS_TOOLS_OPTIONS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tps/augment.hpp"
#include "tps/dataset.hpp"

namespace tps::cli {

/// Dataset flags shared by augment, sweep, and report.
struct DataOptions {
    std::string data_path;
    std::string channels;       ///< comma-separated names or indices; empty = all
    std::string splits = "0.7,0.1,0.2";
    std::string timestamp_column;
    std::string delimiter = ",";
    std::size_t lookback = 0;
    std::size_t horizon = 0;
    std::size_t window_stride = 1;
    bool zero_variance_passthrough = false;

    DatasetSpec to_spec() const;
};

/// Augmentation flags shared by augment and report.
struct AugOptions {
    std::size_t patch_len = 32;
    std::size_t stride = 1;
    double alpha = 1.0;
    std::string variant = "standard";
    std::string level = "batch";
    std::uint64_t seed = 0;
    std::size_t size = 1;
    double ratio = 1.0;
    double upsample_rate = 0.0; ///< > 0 switches to the Upsample baseline

    TpsConfig to_config() const;
    bool use_upsample() const { return upsample_rate > 0.0; }
};

std::vector<std::string> split_list(const std::string& csv);

} // namespace tps::cli

#endif // TPS_TOOLS_OPTIONS_HPP
