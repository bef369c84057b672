#include "tps/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tps/parallel.hpp"

namespace tps {

namespace {
void check_same_shape(const SeriesBatch& a, const SeriesBatch& b, const char* who) {
    if (a.batch() != b.batch())
        throw std::invalid_argument(std::string(who) + ": batch mismatch (" +
                                    std::to_string(a.batch()) + " vs " +
                                    std::to_string(b.batch()) + ")");
    if (a.length() != b.length())
        throw std::invalid_argument(std::string(who) + ": length mismatch (" +
                                    std::to_string(a.length()) + " vs " +
                                    std::to_string(b.length()) + ")");
    if (a.channels() != b.channels())
        throw std::invalid_argument(std::string(who) + ": channel mismatch (" +
                                    std::to_string(a.channels()) + " vs " +
                                    std::to_string(b.channels()) + ")");
}
} // namespace

QuantileSet::QuantileSet(std::vector<double> lv) : levels(std::move(lv)) {
    if (levels.empty())
        throw std::invalid_argument("QuantileSet: at least one level required");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(levels[i] > 0.0) || !(levels[i] < 1.0))
            throw std::invalid_argument("QuantileSet: level " +
                                        std::to_string(levels[i]) +
                                        " outside (0, 1)");
        if (i > 0 && !(levels[i] > levels[i - 1]))
            throw std::invalid_argument("QuantileSet: levels must be strictly increasing");
    }
}

bool QuantileSet::contains(double level) const {
    for (double v : levels)
        if (v == level) return true;
    return false;
}

void MetricsReport::add(std::string name, double value, std::string aggregation) {
    entries.push_back({std::move(name), value, std::move(aggregation)});
}

const MetricsReport::Entry* MetricsReport::find(const std::string& name) const {
    for (const auto& e : entries)
        if (e.name == name) return &e;
    return nullptr;
}

double mse(const SeriesBatch& target, const SeriesBatch& prediction) {
    check_same_shape(target, prediction, "mse");
    double acc = 0.0;
    const auto& t = target.values();
    const auto& p = prediction.values();
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double d = t[i] - p[i];
        acc += d * d;
    }
    return acc / static_cast<double>(t.size());
}

double mae(const SeriesBatch& target, const SeriesBatch& prediction) {
    check_same_shape(target, prediction, "mae");
    double acc = 0.0;
    const auto& t = target.values();
    const auto& p = prediction.values();
    for (std::size_t i = 0; i < t.size(); ++i)
        acc += std::abs(t[i] - p[i]);
    return acc / static_cast<double>(t.size());
}

double pinball(const SeriesBatch& target,
               std::span<const SeriesBatch> quantile_predictions,
               const QuantileSet& levels) {
    if (quantile_predictions.size() != levels.size())
        throw std::invalid_argument(
            "pinball: " + std::to_string(quantile_predictions.size()) +
            " prediction batches for " + std::to_string(levels.size()) +
            " quantile levels");
    double acc = 0.0;
    for (std::size_t q = 0; q < levels.size(); ++q) {
        check_same_shape(target, quantile_predictions[q], "pinball");
        const double tau = levels.levels[q];
        const auto& y = target.values();
        const auto& pred = quantile_predictions[q].values();
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double diff = y[i] - pred[i];
            acc += diff >= 0.0 ? tau * diff : (tau - 1.0) * diff;
        }
    }
    return acc / static_cast<double>(levels.size() * target.values().size());
}

double crps(const SeriesBatch& target,
            std::span<const SeriesBatch> quantile_predictions,
            const QuantileSet& levels) {
    return 2.0 * pinball(target, quantile_predictions, levels);
}

IntervalScore pi80(const SeriesBatch& target, const SeriesBatch& q10,
                   const SeriesBatch& q90) {
    check_same_shape(target, q10, "pi80");
    check_same_shape(target, q90, "pi80");
    const auto& y = target.values();
    const auto& lo = q10.values();
    const auto& hi = q90.values();
    std::size_t covered = 0;
    double width = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (lo[i] <= y[i] && y[i] <= hi[i]) ++covered;
        width += hi[i] - lo[i];
    }
    const double n = static_cast<double>(y.size());
    return {static_cast<double>(covered) / n, width / n};
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_statistic: empty sample");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t ia = 0, ib = 0;
    double sup = 0.0;
    while (ia < sa.size() || ib < sb.size()) {
        const double v = (ib >= sb.size() || (ia < sa.size() && sa[ia] <= sb[ib]))
                             ? sa[ia] : sb[ib];
        while (ia < sa.size() && sa[ia] == v) ++ia;
        while (ib < sb.size() && sb[ib] == v) ++ib;
        sup = std::max(sup, std::abs(static_cast<double>(ia) / na -
                                     static_cast<double>(ib) / nb));
    }
    return sup;
}

double wasserstein1(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("wasserstein1: empty sample");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    // Area between the ECDFs over the merged support.
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t ia = 0, ib = 0;
    double dist = 0.0;
    double prev = 0.0;
    bool have_prev = false;
    while (ia < sa.size() || ib < sb.size()) {
        const double v = (ib >= sb.size() || (ia < sa.size() && sa[ia] <= sb[ib]))
                             ? sa[ia] : sb[ib];
        if (have_prev)
            dist += std::abs(static_cast<double>(ia) / na -
                             static_cast<double>(ib) / nb) * (v - prev);
        while (ia < sa.size() && sa[ia] == v) ++ia;
        while (ib < sb.size() && sb[ib] == v) ++ib;
        prev = v;
        have_prev = true;
    }
    return dist;
}

double dtw(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("dtw: empty sequence");
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    constexpr double inf = std::numeric_limits<double>::infinity();

    // Rolling-row DP over steps {(1,0),(0,1),(1,1)}.
    std::vector<double> prev(m + 1, inf), cur(m + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = inf;
        for (std::size_t j = 1; j <= m; ++j) {
            const double cost = std::abs(a[i - 1] - b[j - 1]);
            cur[j] = cost + std::min({prev[j], cur[j - 1], prev[j - 1]});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

MetricsReport distribution_shift_report(const SeriesBatch& original,
                                        const SeriesBatch& augmented) {
    check_same_shape(original, augmented, "distribution_shift_report");
    const std::size_t B = original.batch();
    const std::size_t T = original.length();
    const std::size_t C = original.channels();

    // KS / Wasserstein: per channel over values flattened across batch and
    // time, then averaged over channels.
    std::vector<double> ks_per_channel(C), w1_per_channel(C);
    parallel_for(C, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> flat_orig(B * T), flat_aug(B * T);
        for (std::size_t c = lo; c < hi; ++c) {
            for (std::size_t b = 0; b < B; ++b)
                for (std::size_t t = 0; t < T; ++t) {
                    flat_orig[b * T + t] = original(b, t, c);
                    flat_aug[b * T + t] = augmented(b, t, c);
                }
            ks_per_channel[c] = ks_statistic(flat_orig, flat_aug);
            w1_per_channel[c] = wasserstein1(flat_orig, flat_aug);
        }
    });

    // DTW: per (sample, channel) sequence pair, averaged over all of them.
    std::vector<double> dtw_per_pair(B * C);
    parallel_for(B * C, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> seq_orig(T), seq_aug(T);
        for (std::size_t k = lo; k < hi; ++k) {
            const std::size_t b = k / C;
            const std::size_t c = k % C;
            for (std::size_t t = 0; t < T; ++t) {
                seq_orig[t] = original(b, t, c);
                seq_aug[t] = augmented(b, t, c);
            }
            dtw_per_pair[k] = dtw(seq_orig, seq_aug);
        }
    });

    auto mean_of = [](const std::vector<double>& v) {
        double acc = 0.0;
        for (double x : v) acc += x;
        return acc / static_cast<double>(v.size());
    };

    MetricsReport report;
    report.add("avg_ks", mean_of(ks_per_channel),
               "per channel over flattened (batch, time), averaged over channels");
    report.add("avg_wasserstein", mean_of(w1_per_channel),
               "per channel over flattened (batch, time), averaged over channels");
    report.add("avg_dtw", mean_of(dtw_per_pair),
               "per (sample, channel) sequence pair, averaged over all pairs");
    return report;
}

} // namespace tps
