#ifndef TPS_METRICS_HPP
#define TPS_METRICS_HPP

#include <span>
#include <string>
#include <vector>

#include "tps/series.hpp"

namespace tps {

/// Ordered quantile levels in (0, 1). The default set is the nine levels
/// used for quantile-regression evaluation.
struct QuantileSet {
    std::vector<double> levels;

    QuantileSet() : levels{0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.8, 0.9, 0.95} {}
    explicit QuantileSet(std::vector<double> lv);

    std::size_t size() const { return levels.size(); }
    bool contains(double level) const;
};

/// Named scalar results with the aggregation level recorded alongside.
struct MetricsReport {
    struct Entry {
        std::string name;
        double value;
        std::string aggregation;
    };
    std::vector<Entry> entries;

    void add(std::string name, double value, std::string aggregation);
    const Entry* find(const std::string& name) const;
};

/// Mean squared error: squared Frobenius norm of the difference over B*h*C.
double mse(const SeriesBatch& target, const SeriesBatch& prediction);

/// Mean absolute error over B*h*C.
double mae(const SeriesBatch& target, const SeriesBatch& prediction);

/// Quantile-weighted check loss, averaged over levels and all entries:
/// tau*max(y-q, 0) + (1-tau)*max(q-y, 0). One prediction batch per level.
double pinball(const SeriesBatch& target,
               std::span<const SeriesBatch> quantile_predictions,
               const QuantileSet& levels);

/// CRPS under the quantile approximation: exactly 2x the pinball loss.
double crps(const SeriesBatch& target,
            std::span<const SeriesBatch> quantile_predictions,
            const QuantileSet& levels);

struct IntervalScore {
    double coverage; ///< fraction of entries with q10 <= y <= q90 (closed)
    double width;    ///< mean of q90 - q10
};

/// 80% prediction-interval coverage and width from the 0.1/0.9 quantiles.
IntervalScore pi80(const SeriesBatch& target, const SeriesBatch& q10,
                   const SeriesBatch& q90);

/// Two-sample Kolmogorov-Smirnov statistic: sup |ECDF_a - ECDF_b|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// One-dimensional Wasserstein-1 distance between empirical distributions:
/// the area between the two ECDFs (for equal sizes, the mean absolute
/// difference of order statistics).
double wasserstein1(std::span<const double> a, std::span<const double> b);

/// Classic unconstrained dynamic time warping with absolute-difference local
/// cost and steps {(1,0),(0,1),(1,1)}; returns the optimal path cost.
double dtw(std::span<const double> a, std::span<const double> b);

/// Distribution-shift report between same-shape batches: KS and Wasserstein
/// per channel on values flattened across batch and time, averaged over
/// channels; DTW per (sample, channel) sequence pair, averaged over all.
MetricsReport distribution_shift_report(const SeriesBatch& original,
                                        const SeriesBatch& augmented);

} // namespace tps

#endif // TPS_METRICS_HPP
