#ifndef TPS_SERIES_HPP
#define TPS_SERIES_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace tps {

/**
 * A batch of multivariate time series stored row-major as [batch, time, channel]
 * with the channel index varying fastest, so the channel vector at one time
 * step is contiguous.
 *
 * All three dimensions are strictly positive. Values are expected to be
 * finite; the CSV loader enforces this on ingestion and the kernels assume it.
 */
class SeriesBatch {
public:
    SeriesBatch(std::size_t batch, std::size_t length, std::size_t channels);
    SeriesBatch(std::size_t batch, std::size_t length, std::size_t channels,
                std::vector<double> values);

    std::size_t batch() const { return batch_; }
    std::size_t length() const { return length_; }
    std::size_t channels() const { return channels_; }

    std::size_t index(std::size_t b, std::size_t t, std::size_t c) const {
        return (b * length_ + t) * channels_ + c;
    }

    double operator()(std::size_t b, std::size_t t, std::size_t c) const {
        return data_[index(b, t, c)];
    }
    double& operator()(std::size_t b, std::size_t t, std::size_t c) {
        return data_[index(b, t, c)];
    }

    /// Bounds-checked access; throws std::out_of_range.
    double at(std::size_t b, std::size_t t, std::size_t c) const;

    /// The [length, channels] slab of one batch element.
    std::span<const double> element(std::size_t b) const {
        return {data_.data() + b * length_ * channels_, length_ * channels_};
    }
    std::span<double> element(std::size_t b) {
        return {data_.data() + b * length_ * channels_, length_ * channels_};
    }

    const std::vector<double>& values() const { return data_; }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    bool all_finite() const;

private:
    std::size_t batch_;
    std::size_t length_;
    std::size_t channels_;
    std::vector<double> data_;
};

/**
 * A (look-back, horizon) pair sharing batch and channel dimensions.
 * The look-back covers time [0, t) and the horizon [t, t+h) of the
 * underlying series.
 */
struct SplitPair {
    SeriesBatch lookback;
    SeriesBatch horizon;

    SplitPair(SeriesBatch lb, SeriesBatch hz);

    std::size_t batch() const { return lookback.batch(); }
    std::size_t channels() const { return lookback.channels(); }
    std::size_t lookback_len() const { return lookback.length(); }
    std::size_t horizon_len() const { return horizon.length(); }
    std::size_t total_len() const { return lookback.length() + horizon.length(); }
};

/// Concatenate look-back and horizon along time: output[:,0:t,:] == lookback,
/// output[:,t:,:] == horizon, bit-exact.
SeriesBatch concat_time(const SeriesBatch& lookback, const SeriesBatch& horizon);

/// Split at time t into (x[:,0:t,:], x[:,t:,:]). Requires 1 <= t < length.
SplitPair split_time(const SeriesBatch& x, std::size_t t);

/// Concatenate along the batch dimension, originals first. Both pairs must
/// agree on (t, h, C).
SplitPair merge_batches(const SplitPair& original, const SplitPair& synthetic);

/// Merge with an optional synthetic batch; nullopt degenerates to a copy of
/// the original (augmentation ratio 0).
SplitPair merge_batches(const SplitPair& original,
                        const std::optional<SplitPair>& synthetic);

} // namespace tps

#endif // TPS_SERIES_HPP
