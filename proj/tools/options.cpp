#include "options.hpp"

#include <charconv>
#include <stdexcept>

namespace tps::cli {

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const std::size_t comma = csv.find(',', start);
        const std::string item =
            csv.substr(start, comma == std::string::npos ? std::string::npos
                                                         : comma - start);
        if (!item.empty()) out.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

DatasetSpec DataOptions::to_spec() const {
    if (data_path.empty())
        throw std::invalid_argument("--data is required");
    if (lookback == 0 || horizon == 0)
        throw std::invalid_argument("--t and --h must be >= 1");
    if (delimiter.size() != 1)
        throw std::invalid_argument("--delimiter must be a single character");

    DatasetSpec spec;
    spec.path = data_path;
    spec.delimiter = delimiter[0];
    spec.channel_columns = split_list(channels);
    if (!timestamp_column.empty()) spec.timestamp_column = timestamp_column;
    spec.lookback = lookback;
    spec.horizon = horizon;
    spec.window_stride = window_stride;
    spec.zero_variance_passthrough = zero_variance_passthrough;

    const std::vector<std::string> parts = split_list(splits);
    if (parts.size() != 3)
        throw std::invalid_argument("--splits expects three comma-separated values");
    for (int i = 0; i < 3; ++i) {
        double v = 0.0;
        const auto r = std::from_chars(parts[i].data(),
                                       parts[i].data() + parts[i].size(), v);
        if (r.ec != std::errc{} || r.ptr != parts[i].data() + parts[i].size())
            throw std::invalid_argument("--splits: cannot parse '" + parts[i] + "'");
        spec.split[static_cast<std::size_t>(i)] = v;
    }
    return spec;
}

TpsConfig AugOptions::to_config() const {
    TpsConfig cfg;
    cfg.patch_len = patch_len;
    cfg.stride = stride;
    cfg.shuffle_rate = alpha;
    cfg.seed = seed;
    cfg.variant = parse_variant(variant);
    if (level == "batch")
        cfg.level = ShuffleLevel::Batch;
    else if (level == "sample")
        cfg.level = ShuffleLevel::Sample;
    else
        throw std::invalid_argument("--level must be 'batch' or 'sample'");
    return cfg;
}

} // namespace tps::cli
