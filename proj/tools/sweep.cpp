#include "sweep.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "commands.hpp"
#include "tps/augment.hpp"
#include "tps/parallel.hpp"

namespace tps::cli {

namespace {

constexpr double kRidgeLambda = 1e-3;

// Channel-shared linear forecaster fit by ridge-regularized least squares:
// one t -> h weight matrix estimated from normal equations accumulated in a
// streaming pass, solved by Cholesky. A cheap stand-in for the deep-model
// validation protocol; see the README.
class RidgeScorer {
public:
    RidgeScorer(std::size_t lookback, std::size_t horizon)
        : t_(lookback), h_(horizon), gram_(lookback * lookback, 0.0),
          cross_(lookback * horizon, 0.0) {}

    void accumulate(const SplitPair& pair) {
        const std::size_t B = pair.batch();
        const std::size_t C = pair.channels();
        std::vector<double> x(t_), y(h_);
        for (std::size_t b = 0; b < B; ++b)
            for (std::size_t c = 0; c < C; ++c) {
                for (std::size_t j = 0; j < t_; ++j) x[j] = pair.lookback(b, j, c);
                for (std::size_t j = 0; j < h_; ++j) y[j] = pair.horizon(b, j, c);
                for (std::size_t i = 0; i < t_; ++i) {
                    const double xi = x[i];
                    double* grow = gram_.data() + i * t_;
                    for (std::size_t j = i; j < t_; ++j) grow[j] += xi * x[j];
                    double* crow = cross_.data() + i * h_;
                    for (std::size_t j = 0; j < h_; ++j) crow[j] += xi * y[j];
                }
                ++rows_;
            }
    }

    void fit() {
        if (rows_ == 0)
            throw std::runtime_error("ridge scorer: no training rows accumulated");
        // Mirror the upper triangle and add the ridge.
        std::vector<double> a(gram_);
        for (std::size_t i = 0; i < t_; ++i)
            for (std::size_t j = 0; j < i; ++j) a[i * t_ + j] = a[j * t_ + i];
        const double ridge = kRidgeLambda * static_cast<double>(rows_);
        for (std::size_t i = 0; i < t_; ++i) a[i * t_ + i] += ridge;

        // In-place Cholesky a = L L^T.
        for (std::size_t i = 0; i < t_; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double sum = a[i * t_ + j];
                for (std::size_t k = 0; k < j; ++k)
                    sum -= a[i * t_ + k] * a[j * t_ + k];
                if (i == j) {
                    if (sum <= 0.0)
                        throw std::runtime_error(
                            "ridge scorer: Gram matrix not positive definite");
                    a[i * t_ + i] = std::sqrt(sum);
                } else {
                    a[i * t_ + j] = sum / a[j * t_ + j];
                }
            }
        }

        // Solve L L^T W = cross for each horizon column.
        weights_.assign(t_ * h_, 0.0);
        std::vector<double> col(t_);
        for (std::size_t j = 0; j < h_; ++j) {
            for (std::size_t i = 0; i < t_; ++i) {
                double sum = cross_[i * h_ + j];
                for (std::size_t k = 0; k < i; ++k) sum -= a[i * t_ + k] * col[k];
                col[i] = sum / a[i * t_ + i];
            }
            for (std::size_t i = t_; i-- > 0;) {
                double sum = col[i];
                for (std::size_t k = i + 1; k < t_; ++k)
                    sum -= a[k * t_ + i] * weights_[k * h_ + j];
                weights_[i * h_ + j] = sum / a[i * t_ + i];
            }
        }
        fitted_ = true;
    }

    /// Accumulated squared error and entry count on a validation batch.
    void score(const SplitPair& pair, double& sq_error, std::size_t& count) const {
        if (!fitted_) throw std::runtime_error("ridge scorer: fit() not called");
        const std::size_t B = pair.batch();
        const std::size_t C = pair.channels();
        std::vector<double> x(t_);
        for (std::size_t b = 0; b < B; ++b)
            for (std::size_t c = 0; c < C; ++c) {
                for (std::size_t j = 0; j < t_; ++j) x[j] = pair.lookback(b, j, c);
                for (std::size_t j = 0; j < h_; ++j) {
                    double pred = 0.0;
                    for (std::size_t i = 0; i < t_; ++i)
                        pred += x[i] * weights_[i * h_ + j];
                    const double d = pred - pair.horizon(b, j, c);
                    sq_error += d * d;
                    ++count;
                }
            }
    }

private:
    std::size_t t_;
    std::size_t h_;
    std::vector<double> gram_;
    std::vector<double> cross_;
    std::vector<double> weights_;
    std::size_t rows_ = 0;
    bool fitted_ = false;
};

double evaluate_tuple(const SweepTuple& tuple, const SweepArgs& args,
                      const SeriesBatch& train, const SeriesBatch& val) {
    const std::size_t t = args.data.lookback;
    const std::size_t h = args.data.horizon;

    AugOptions aug = args.aug;
    aug.patch_len = tuple.patch_len;
    aug.stride = tuple.stride;
    aug.alpha = tuple.alpha;
    aug.size = 1;
    aug.ratio = 1.0;

    RidgeScorer scorer(t, h);
    WindowBatcher batcher(train, t, h, args.batch_size, args.data.window_stride);
    std::size_t first = 0;
    while (auto batch = batcher.next(first)) {
        scorer.accumulate(*batch);
        TpsConfig cfg = aug.to_config();
        cfg.substream_base = first;
        scorer.accumulate(tps_augment(*batch, cfg));
    }
    scorer.fit();

    double sq_error = 0.0;
    std::size_t count = 0;
    WindowBatcher val_batcher(val, t, h, args.batch_size, args.data.window_stride);
    while (auto batch = val_batcher.next(first)) scorer.score(*batch, sq_error, count);
    if (count == 0)
        throw std::runtime_error("sweep: validation split yields no windows");
    return sq_error / static_cast<double>(count);
}

} // namespace

std::vector<SweepTuple> default_grid() {
    // 20 tuples drawn from the published candidate lists
    // (p in {16..700}, s in {1..96}, alpha in {0.2..1.0}).
    return {
        {16, 1, 0.5},  {16, 2, 1.0},  {32, 1, 0.7},  {32, 5, 1.0},
        {32, 8, 0.5},  {48, 5, 0.8},  {48, 12, 1.0}, {64, 8, 0.9},
        {64, 16, 0.5}, {72, 12, 1.0}, {96, 8, 0.7},  {96, 24, 1.0},
        {120, 24, 1.0}, {168, 24, 0.8}, {192, 32, 1.0}, {200, 36, 0.9},
        {240, 32, 0.7}, {300, 36, 1.0}, {400, 96, 0.9}, {560, 96, 1.0},
    };
}

std::vector<SweepTuple> parse_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open grid file: " + path);

    std::vector<SweepTuple> grid;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        bool blank = true;
        for (char ch : line)
            if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
        if (blank) continue;

        SweepTuple tuple{};
        char comma1 = 0, comma2 = 0;
        std::istringstream ss(line);
        if (!(ss >> tuple.patch_len >> comma1 >> tuple.stride >> comma2 >>
              tuple.alpha) ||
            comma1 != ',' || comma2 != ',')
            throw std::runtime_error("grid file " + path + " line " +
                                     std::to_string(lineno) +
                                     ": expected 'p,s,alpha'");
        grid.push_back(tuple);
    }
    if (grid.empty())
        throw std::runtime_error("grid file " + path + " contains no candidates");
    return grid;
}

int run_sweep(const SweepArgs& args) {
    if (args.scorer != "ridge")
        throw std::invalid_argument("--scorer: only 'ridge' is available");

    const std::vector<SweepTuple> grid =
        args.grid_file.empty() ? default_grid() : parse_grid_file(args.grid_file);

    const DatasetSpec spec = args.data.to_spec();
    const LoadedCsv loaded = load_csv(spec);
    const StandardizedSplits splits = split_standardize(loaded.series, spec);
    if (!splits.val)
        throw std::invalid_argument("sweep needs a non-empty validation split");

    const std::size_t T = spec.lookback + spec.horizon;
    const std::size_t C = loaded.series.channels();

    // Pre-filter instead of failing the whole sweep on one bad tuple.
    std::vector<std::size_t> runnable;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const SweepTuple& tuple = grid[g];
        std::string why;
        if (tuple.patch_len > T)
            why = "patch length exceeds window length " + std::to_string(T);
        else if (tuple.stride == 0)
            why = "stride must be >= 1";
        else if (!(tuple.alpha > 0.0) || tuple.alpha > 1.0)
            why = "alpha outside (0, 1]";
        else if (tuple.patch_len * C < 2)
            why = "C*p must exceed 1";
        if (why.empty()) {
            runnable.push_back(g);
        } else {
            std::fprintf(stderr, "sweep: skipping candidate %zu (p=%zu, s=%zu, alpha=%g): %s\n",
                         g, tuple.patch_len, tuple.stride, tuple.alpha, why.c_str());
        }
    }
    if (runnable.empty())
        throw std::invalid_argument("sweep: no runnable candidates in the grid");

    std::vector<double> mse_by_slot(runnable.size(),
                                    std::numeric_limits<double>::quiet_NaN());
    parallel_for(runnable.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            mse_by_slot[i] =
                evaluate_tuple(grid[runnable[i]], args, splits.train, *splits.val);
    });

    // Ranking: ascending MSE, grid order breaking ties.
    std::vector<std::size_t> order(runnable.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return mse_by_slot[a] < mse_by_slot[b];
    });

    std::printf("rank  p     s     alpha   val_mse\n");
    for (std::size_t r = 0; r < order.size(); ++r) {
        const SweepTuple& tuple = grid[runnable[order[r]]];
        std::printf("%-4zu  %-4zu  %-4zu  %-5g   %.10g\n", r + 1, tuple.patch_len,
                    tuple.stride, tuple.alpha, mse_by_slot[order[r]]);
    }
    const SweepTuple winner = grid[runnable[order[0]]];
    std::printf("selected: p=%zu s=%zu alpha=%g (val_mse %.10g)\n",
                winner.patch_len, winner.stride, winner.alpha,
                mse_by_slot[order[0]]);

    if (!args.out_path.empty()) {
        nlohmann::json doc;
        doc["command"] = "sweep";
        doc["scorer"] = args.scorer;
        nlohmann::json ranking = nlohmann::json::array();
        for (std::size_t r = 0; r < order.size(); ++r) {
            const SweepTuple& tuple = grid[runnable[order[r]]];
            ranking.push_back({{"p", tuple.patch_len},
                               {"s", tuple.stride},
                               {"alpha", tuple.alpha},
                               {"val_mse", mse_by_slot[order[r]]},
                               {"grid_index", runnable[order[r]]}});
        }
        doc["ranking"] = ranking;
        doc["selected"] = {{"p", winner.patch_len},
                           {"s", winner.stride},
                           {"alpha", winner.alpha}};
        std::ofstream out(args.out_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open sweep output: " + args.out_path);
        out << doc.dump(2) << "\n";
    }

    if (!args.apply_out.empty()) {
        AugmentArgs apply;
        apply.data = args.data;
        apply.aug = args.aug;
        apply.aug.patch_len = winner.patch_len;
        apply.aug.stride = winner.stride;
        apply.aug.alpha = winner.alpha;
        apply.batch_size = args.batch_size;
        apply.out_path = args.apply_out;
        return run_augment(apply);
    }
    return 0;
}

} // namespace tps::cli
