#include "tps/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tps/rng.hpp"

namespace tps {

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, delimiter)) cells.push_back(cell);
    if (!line.empty() && line.back() == delimiter) cells.emplace_back();
    return cells;
}

std::string strip(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return s.substr(a, b - a);
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
    const std::string text = strip(cell);
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size())
        throw std::runtime_error("CSV parse failure at row " + std::to_string(row) +
                                 ", column '" + column + "': cannot parse '" +
                                 text + "' as a real number");
    if (!std::isfinite(value))
        throw std::runtime_error("CSV data error at row " + std::to_string(row) +
                                 ", column '" + column + "': non-finite value '" +
                                 text + "'");
    return value;
}

} // namespace

LoadedCsv load_csv(const DatasetSpec& spec) {
    std::ifstream file(spec.path);
    if (!file)
        throw std::runtime_error("cannot open dataset file: " + spec.path);

    std::string line;
    if (!std::getline(file, line))
        throw std::runtime_error("dataset file is empty: " + spec.path);

    std::vector<std::string> header = split_line(line, spec.delimiter);
    for (auto& h : header) h = strip(h);
    if (header.empty())
        throw std::runtime_error("dataset header row is empty: " + spec.path);

    // Resolve the timestamp column: configured name, or a column literally
    // named "date" when none is configured.
    std::ptrdiff_t ts_index = -1;
    if (spec.timestamp_column) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == *spec.timestamp_column) ts_index = static_cast<std::ptrdiff_t>(i);
        if (ts_index < 0)
            throw std::runtime_error("timestamp column '" + *spec.timestamp_column +
                                     "' not found in " + spec.path);
    } else {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == "date") ts_index = static_cast<std::ptrdiff_t>(i);
    }

    // Resolve channel columns: configured names (or 0-based indices), or
    // every non-timestamp column.
    std::vector<std::size_t> channel_idx;
    if (spec.channel_columns.empty()) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (static_cast<std::ptrdiff_t>(i) != ts_index) channel_idx.push_back(i);
    } else {
        for (const std::string& want : spec.channel_columns) {
            std::ptrdiff_t found = -1;
            for (std::size_t i = 0; i < header.size(); ++i)
                if (header[i] == want) found = static_cast<std::ptrdiff_t>(i);
            if (found < 0) {
                // Fall back to a 0-based column index.
                std::size_t as_index = 0;
                const auto r = std::from_chars(want.data(), want.data() + want.size(), as_index);
                if (r.ec == std::errc{} && r.ptr == want.data() + want.size() &&
                    as_index < header.size())
                    found = static_cast<std::ptrdiff_t>(as_index);
            }
            if (found < 0)
                throw std::runtime_error("channel column '" + want + "' not found in " +
                                         spec.path);
            channel_idx.push_back(static_cast<std::size_t>(found));
        }
    }
    if (channel_idx.empty())
        throw std::runtime_error("no channel columns resolved for " + spec.path);

    std::vector<double> values;
    std::vector<std::string> timestamps;
    std::size_t row = 1;
    while (std::getline(file, line)) {
        ++row;
        if (strip(line).empty()) continue;
        const std::vector<std::string> cells = split_line(line, spec.delimiter);
        if (cells.size() < header.size())
            throw std::runtime_error("CSV row " + std::to_string(row) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(header.size()));
        for (std::size_t c : channel_idx)
            values.push_back(parse_cell(cells[c], row, header[c]));
        if (ts_index >= 0)
            timestamps.push_back(strip(cells[static_cast<std::size_t>(ts_index)]));
    }

    const std::size_t rows = values.size() / channel_idx.size();
    if (rows == 0)
        throw std::runtime_error("dataset contains a header but no data rows: " +
                                 spec.path);

    std::vector<std::string> names;
    names.reserve(channel_idx.size());
    for (std::size_t c : channel_idx) names.push_back(header[c]);

    return {SeriesBatch(1, rows, channel_idx.size(), std::move(values)),
            std::move(names), std::move(timestamps)};
}

SeriesBatch ChannelStats::apply(const SeriesBatch& x) const {
    if (x.channels() != mean.size())
        throw std::invalid_argument("ChannelStats::apply: channel count mismatch");
    SeriesBatch out = x;
    for (std::size_t b = 0; b < x.batch(); ++b)
        for (std::size_t t = 0; t < x.length(); ++t)
            for (std::size_t c = 0; c < x.channels(); ++c)
                if (scaled[c])
                    out(b, t, c) = (x(b, t, c) - mean[c]) / stddev[c];
    return out;
}

SeriesBatch ChannelStats::invert(const SeriesBatch& x) const {
    if (x.channels() != mean.size())
        throw std::invalid_argument("ChannelStats::invert: channel count mismatch");
    SeriesBatch out = x;
    for (std::size_t b = 0; b < x.batch(); ++b)
        for (std::size_t t = 0; t < x.length(); ++t)
            for (std::size_t c = 0; c < x.channels(); ++c)
                if (scaled[c])
                    out(b, t, c) = x(b, t, c) * stddev[c] + mean[c];
    return out;
}

StandardizedSplits split_standardize(const SeriesBatch& x, const DatasetSpec& spec) {
    if (x.batch() != 1)
        throw std::invalid_argument("split_standardize expects a single-series batch (B=1)");

    const std::size_t total = x.length();
    std::array<std::size_t, 3> rows{};
    const bool fractions = spec.split[0] <= 1.0 && spec.split[1] <= 1.0 &&
                           spec.split[2] <= 1.0;
    for (int i = 0; i < 3; ++i) {
        if (spec.split[i] < 0.0)
            throw std::invalid_argument("split sizes must be non-negative");
        rows[i] = fractions
                      ? static_cast<std::size_t>(spec.split[i] * static_cast<double>(total))
                      : static_cast<std::size_t>(spec.split[i]);
    }
    if (rows[0] == 0)
        throw std::invalid_argument("training split resolves to zero rows");
    if (rows[0] + rows[1] + rows[2] > total)
        throw std::invalid_argument(
            "split sizes (" + std::to_string(rows[0]) + ", " + std::to_string(rows[1]) +
            ", " + std::to_string(rows[2]) + ") exceed the " + std::to_string(total) +
            " available rows");

    const std::size_t C = x.channels();
    ChannelStats stats;
    stats.mean.assign(C, 0.0);
    stats.stddev.assign(C, 1.0);
    stats.scaled.assign(C, true);
    for (std::size_t c = 0; c < C; ++c) {
        double mean = 0.0;
        for (std::size_t t = 0; t < rows[0]; ++t) mean += x(0, t, c);
        mean /= static_cast<double>(rows[0]);
        double ss = 0.0;
        for (std::size_t t = 0; t < rows[0]; ++t) {
            const double d = x(0, t, c) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(rows[0]));
        if (sd == 0.0) {
            if (!spec.zero_variance_passthrough)
                throw std::runtime_error(
                    "channel " + std::to_string(c) +
                    " is constant on the training split; enable pass-through or drop it");
            stats.scaled[c] = false;
        } else {
            stats.mean[c] = mean;
            stats.stddev[c] = sd;
        }
    }

    auto slice = [&](std::size_t begin, std::size_t count) {
        SeriesBatch out(1, count, C);
        for (std::size_t t = 0; t < count; ++t)
            for (std::size_t c = 0; c < C; ++c)
                out(0, t, c) = x(0, begin + t, c);
        return out;
    };

    StandardizedSplits result{stats.apply(slice(0, rows[0])), std::nullopt,
                              std::nullopt, std::move(stats), rows};
    if (rows[1] > 0)
        result.val = result.stats.apply(slice(rows[0], rows[1]));
    if (rows[2] > 0)
        result.test = result.stats.apply(slice(rows[0] + rows[1], rows[2]));
    return result;
}

std::size_t window_count(std::size_t length, std::size_t lookback,
                         std::size_t horizon, std::size_t window_stride) {
    if (lookback == 0 || horizon == 0)
        throw std::invalid_argument("window_count: lookback and horizon must be >= 1");
    if (window_stride == 0)
        throw std::invalid_argument("window_count: window stride must be >= 1");
    if (length < lookback + horizon)
        throw std::invalid_argument("split of length " + std::to_string(length) +
                                    " too short for lookback " + std::to_string(lookback) +
                                    " + horizon " + std::to_string(horizon));
    return (length - lookback - horizon) / window_stride + 1;
}

WindowBatcher::WindowBatcher(const SeriesBatch& split, std::size_t lookback,
                             std::size_t horizon, std::size_t batch_size,
                             std::size_t window_stride)
    : split_(split), lookback_(lookback), horizon_(horizon),
      batch_size_(batch_size), window_stride_(window_stride),
      total_(window_count(split.length(), lookback, horizon, window_stride)) {
    if (split.batch() != 1)
        throw std::invalid_argument("WindowBatcher expects a single-series batch (B=1)");
    if (batch_size_ == 0)
        throw std::invalid_argument("WindowBatcher: batch size must be >= 1");
}

std::optional<SplitPair> WindowBatcher::next(std::size_t& first_window) {
    if (cursor_ >= total_) return std::nullopt;
    first_window = cursor_;
    const std::size_t count = std::min(batch_size_, total_ - cursor_);
    const std::size_t C = split_.channels();

    SeriesBatch lookback(count, lookback_, C);
    SeriesBatch horizon(count, horizon_, C);
    for (std::size_t w = 0; w < count; ++w) {
        const std::size_t start = (cursor_ + w) * window_stride_;
        for (std::size_t t = 0; t < lookback_; ++t)
            for (std::size_t c = 0; c < C; ++c)
                lookback(w, t, c) = split_(0, start + t, c);
        for (std::size_t t = 0; t < horizon_; ++t)
            for (std::size_t c = 0; c < C; ++c)
                horizon(w, t, c) = split_(0, start + lookback_ + t, c);
    }
    cursor_ += count;
    return SplitPair{std::move(lookback), std::move(horizon)};
}

// ---- augmented-output persistence ----------------------------------------

struct AugmentedWriter::Impl {
    std::ofstream out;
    std::size_t channels;
};

namespace {
void format_value(std::string& line, double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof(buf), "%.17g", v);
    line.append(buf, static_cast<std::size_t>(n));
}
} // namespace

AugmentedWriter::AugmentedWriter(const std::string& path, std::size_t channels)
    : impl_(new Impl{std::ofstream(path, std::ios::binary), channels}) {
    if (!impl_->out) {
        delete impl_;
        impl_ = nullptr;
        throw std::runtime_error("cannot open output file for writing: " + path);
    }
    std::string header = "window_id,role,step";
    for (std::size_t c = 0; c < channels; ++c)
        header += ",c" + std::to_string(c);
    impl_->out << header << "\n";
}

AugmentedWriter::~AugmentedWriter() {
    close();
}

void AugmentedWriter::close() {
    if (impl_) {
        impl_->out.close();
        delete impl_;
        impl_ = nullptr;
    }
}

void AugmentedWriter::write(const SplitPair& pair,
                            std::span<const std::size_t> window_ids,
                            const std::vector<bool>& synthetic_flags) {
    if (!impl_) throw std::runtime_error("AugmentedWriter: writer is closed");
    if (window_ids.size() != pair.batch() || synthetic_flags.size() != pair.batch())
        throw std::invalid_argument("AugmentedWriter: id/flag count must match batch size");
    if (pair.channels() != impl_->channels)
        throw std::invalid_argument("AugmentedWriter: channel count mismatch");

    const SeriesBatch full = concat_time(pair.lookback, pair.horizon);
    std::string line;
    for (std::size_t b = 0; b < full.batch(); ++b) {
        const char* role = synthetic_flags[b] ? "synthetic" : "original";
        for (std::size_t t = 0; t < full.length(); ++t) {
            line.clear();
            line += std::to_string(window_ids[b]);
            line += ',';
            line += role;
            line += ',';
            line += std::to_string(t);
            for (std::size_t c = 0; c < full.channels(); ++c) {
                line += ',';
                format_value(line, full(b, t, c));
            }
            line += '\n';
            impl_->out << line;
            ++rows_;
        }
    }
    if (!impl_->out)
        throw std::runtime_error("AugmentedWriter: write failed (disk full?)");
}

void AugmentedWriter::write(const AugmentedRecord& record) {
    if (record.window.batch() != 1)
        throw std::invalid_argument("AugmentedWriter: record must hold a single window");
    if (record.window.length() < 2)
        throw std::invalid_argument("AugmentedWriter: window too short");
    const SplitPair pair = split_time(record.window, record.window.length() - 1);
    const std::size_t id = record.window_id;
    write(pair, std::span<const std::size_t>(&id, 1),
          std::vector<bool>{record.synthetic});
}

std::vector<AugmentedRecord> read_augmented(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open augmented file: " + path);

    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("augmented file is empty: " + path);
    const std::vector<std::string> header = split_line(strip(line), ',');
    if (header.size() < 4 || header[0] != "window_id" || header[1] != "role" ||
        header[2] != "step")
        throw std::runtime_error("unexpected augmented-file header in " + path);
    const std::size_t channels = header.size() - 3;

    std::vector<AugmentedRecord> records;
    std::vector<double> window_values;
    std::size_t cur_id = 0;
    bool cur_synthetic = false;
    bool in_window = false;

    auto flush = [&]() {
        if (!in_window) return;
        const std::size_t steps = window_values.size() / channels;
        records.push_back({cur_id, cur_synthetic,
                           SeriesBatch(1, steps, channels, window_values)});
        window_values.clear();
        in_window = false;
    };

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (strip(line).empty()) continue;
        const std::vector<std::string> cells = split_line(line, ',');
        if (cells.size() != header.size())
            throw std::runtime_error("augmented file row " + std::to_string(row) +
                                     " has " + std::to_string(cells.size()) +
                                     " cells, expected " + std::to_string(header.size()));
        const std::size_t id = static_cast<std::size_t>(std::stoull(cells[0]));
        const bool synthetic = strip(cells[1]) == "synthetic";
        const std::size_t step = static_cast<std::size_t>(std::stoull(cells[2]));
        if (!in_window || step == 0) {
            flush();
            cur_id = id;
            cur_synthetic = synthetic;
            in_window = true;
        }
        for (std::size_t c = 0; c < channels; ++c)
            window_values.push_back(parse_cell(cells[3 + c], row, header[3 + c]));
    }
    flush();
    return records;
}

std::uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open file for hashing: " + path);
    char buf[1 << 16];
    std::uint64_t h = 0xCBF29CE484222325ull;
    while (in) {
        in.read(buf, sizeof(buf));
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001B3ull;
        }
    }
    return h;
}

} // namespace tps
