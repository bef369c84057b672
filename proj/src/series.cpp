#include "tps/series.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

namespace tps {

namespace {
void check_dims(std::size_t batch, std::size_t length, std::size_t channels) {
    if (batch == 0)
        throw std::invalid_argument("SeriesBatch: batch dimension must be >= 1");
    if (length == 0)
        throw std::invalid_argument("SeriesBatch: time dimension must be >= 1");
    if (channels == 0)
        throw std::invalid_argument("SeriesBatch: channel dimension must be >= 1");
}
} // namespace

SeriesBatch::SeriesBatch(std::size_t batch, std::size_t length, std::size_t channels)
    : batch_(batch), length_(length), channels_(channels),
      data_(batch * length * channels, 0.0) {
    check_dims(batch, length, channels);
}

SeriesBatch::SeriesBatch(std::size_t batch, std::size_t length, std::size_t channels,
                         std::vector<double> values)
    : batch_(batch), length_(length), channels_(channels), data_(std::move(values)) {
    check_dims(batch, length, channels);
    if (data_.size() != batch * length * channels)
        throw std::invalid_argument(
            "SeriesBatch: value count " + std::to_string(data_.size()) +
            " does not match shape [" + std::to_string(batch) + ", " +
            std::to_string(length) + ", " + std::to_string(channels) + "]");
}

double SeriesBatch::at(std::size_t b, std::size_t t, std::size_t c) const {
    if (b >= batch_ || t >= length_ || c >= channels_)
        throw std::out_of_range("SeriesBatch::at: index (" + std::to_string(b) +
                                ", " + std::to_string(t) + ", " + std::to_string(c) +
                                ") outside [" + std::to_string(batch_) + ", " +
                                std::to_string(length_) + ", " +
                                std::to_string(channels_) + "]");
    return (*this)(b, t, c);
}

bool SeriesBatch::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

SplitPair::SplitPair(SeriesBatch lb, SeriesBatch hz)
    : lookback(std::move(lb)), horizon(std::move(hz)) {
    if (lookback.batch() != horizon.batch())
        throw std::invalid_argument(
            "SplitPair: batch mismatch (lookback B=" + std::to_string(lookback.batch()) +
            ", horizon B=" + std::to_string(horizon.batch()) + ")");
    if (lookback.channels() != horizon.channels())
        throw std::invalid_argument(
            "SplitPair: channel mismatch (lookback C=" + std::to_string(lookback.channels()) +
            ", horizon C=" + std::to_string(horizon.channels()) + ")");
}

SeriesBatch concat_time(const SeriesBatch& lookback, const SeriesBatch& horizon) {
    if (lookback.batch() != horizon.batch())
        throw std::invalid_argument(
            "concat_time: batch mismatch (lookback B=" + std::to_string(lookback.batch()) +
            ", horizon B=" + std::to_string(horizon.batch()) + ")");
    if (lookback.channels() != horizon.channels())
        throw std::invalid_argument(
            "concat_time: channel mismatch (lookback C=" + std::to_string(lookback.channels()) +
            ", horizon C=" + std::to_string(horizon.channels()) + ")");

    const std::size_t B = lookback.batch();
    const std::size_t t = lookback.length();
    const std::size_t h = horizon.length();
    const std::size_t C = lookback.channels();

    SeriesBatch out(B, t + h, C);
    const std::size_t row = C * sizeof(double);
    for (std::size_t b = 0; b < B; ++b) {
        std::memcpy(out.data() + out.index(b, 0, 0), lookback.data() + lookback.index(b, 0, 0), t * row);
        std::memcpy(out.data() + out.index(b, t, 0), horizon.data() + horizon.index(b, 0, 0), h * row);
    }
    return out;
}

SplitPair split_time(const SeriesBatch& x, std::size_t t) {
    if (t < 1 || t >= x.length())
        throw std::out_of_range("split_time: t=" + std::to_string(t) +
                                " outside [1, " + std::to_string(x.length()) +
                                ") — horizon must be non-empty");

    const std::size_t B = x.batch();
    const std::size_t C = x.channels();
    const std::size_t h = x.length() - t;

    SeriesBatch lb(B, t, C);
    SeriesBatch hz(B, h, C);
    const std::size_t row = C * sizeof(double);
    for (std::size_t b = 0; b < B; ++b) {
        std::memcpy(lb.data() + lb.index(b, 0, 0), x.data() + x.index(b, 0, 0), t * row);
        std::memcpy(hz.data() + hz.index(b, 0, 0), x.data() + x.index(b, t, 0), h * row);
    }
    return {std::move(lb), std::move(hz)};
}

SplitPair merge_batches(const SplitPair& original, const SplitPair& synthetic) {
    if (original.lookback_len() != synthetic.lookback_len())
        throw std::invalid_argument(
            "merge_batches: lookback length mismatch (t=" +
            std::to_string(original.lookback_len()) + " vs " +
            std::to_string(synthetic.lookback_len()) + ")");
    if (original.horizon_len() != synthetic.horizon_len())
        throw std::invalid_argument(
            "merge_batches: horizon length mismatch (h=" +
            std::to_string(original.horizon_len()) + " vs " +
            std::to_string(synthetic.horizon_len()) + ")");
    if (original.channels() != synthetic.channels())
        throw std::invalid_argument(
            "merge_batches: channel mismatch (C=" +
            std::to_string(original.channels()) + " vs " +
            std::to_string(synthetic.channels()) + ")");

    auto stack = [](const SeriesBatch& a, const SeriesBatch& b) {
        std::vector<double> values;
        values.reserve(a.values().size() + b.values().size());
        values.insert(values.end(), a.values().begin(), a.values().end());
        values.insert(values.end(), b.values().begin(), b.values().end());
        return SeriesBatch(a.batch() + b.batch(), a.length(), a.channels(),
                           std::move(values));
    };
    return {stack(original.lookback, synthetic.lookback),
            stack(original.horizon, synthetic.horizon)};
}

SplitPair merge_batches(const SplitPair& original,
                        const std::optional<SplitPair>& synthetic) {
    if (!synthetic) return original;
    return merge_batches(original, *synthetic);
}

} // namespace tps
