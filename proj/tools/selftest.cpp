// Built-in verification suite. Every check recomputes its expectation from
// first principles (explicit loops, exhaustive enumeration, independent
// formulas) so a regression in the library kernels cannot hide behind its
// own code paths.
#include "selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "tps/augment.hpp"
#include "tps/metrics.hpp"
#include "tps/patching.hpp"
#include "tps/rng.hpp"
#include "tps/series.hpp"

namespace tps::cli {

namespace {

struct Tally {
    int passed = 0;
    int failed = 0;

    void report(const char* name, bool ok, const char* detail = "") {
        std::printf("[%s] %s%s%s\n", ok ? " ok " : "FAIL", name,
                    detail[0] ? ": " : "", detail);
        (ok ? passed : failed) += 1;
    }
};

SeriesBatch random_batch(std::mt19937& gen, std::size_t B, std::size_t T,
                         std::size_t C) {
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    SeriesBatch out(B, T, C);
    for (std::size_t i = 0; i < B * T * C; ++i) out.data()[i] = dist(gen);
    return out;
}

double max_abs(const SeriesBatch& x) {
    double m = 0.0;
    for (double v : x.values()) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const SeriesBatch& a, const SeriesBatch& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

// ---- independent oracles --------------------------------------------------

double oracle_variance(std::span<const double> values) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(values.size() - 1);
}

std::vector<std::size_t> oracle_smallest(std::span<const double> scores,
                                         std::size_t k) {
    std::vector<bool> taken(scores.size(), false);
    std::vector<std::size_t> out;
    for (std::size_t round = 0; round < k; ++round) {
        std::size_t best = scores.size();
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (taken[i]) continue;
            if (best == scores.size() || scores[i] < scores[best]) best = i;
        }
        taken[best] = true;
        out.push_back(best);
    }
    return out;
}

double oracle_ks(std::span<const double> a, std::span<const double> b) {
    auto ecdf = [](std::span<const double> s, double x) {
        std::size_t n = 0;
        for (double v : s)
            if (v <= x) ++n;
        return static_cast<double>(n) / static_cast<double>(s.size());
    };
    double sup = 0.0;
    for (double v : a) sup = std::max(sup, std::abs(ecdf(a, v) - ecdf(b, v)));
    for (double v : b) sup = std::max(sup, std::abs(ecdf(a, v) - ecdf(b, v)));
    return sup;
}

double oracle_wasserstein(std::span<const double> a, std::span<const double> b) {
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    auto quantile = [](const std::vector<double>& s, double u) {
        return s[std::min(s.size() - 1,
                          static_cast<std::size_t>(u * static_cast<double>(s.size())))];
    };
    std::vector<double> breaks{0.0, 1.0};
    for (std::size_t k = 1; k < sa.size(); ++k)
        breaks.push_back(static_cast<double>(k) / static_cast<double>(sa.size()));
    for (std::size_t k = 1; k < sb.size(); ++k)
        breaks.push_back(static_cast<double>(k) / static_cast<double>(sb.size()));
    std::sort(breaks.begin(), breaks.end());
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double width = breaks[k + 1] - breaks[k];
        if (width <= 0.0) continue;
        const double mid = 0.5 * (breaks[k] + breaks[k + 1]);
        acc += std::abs(quantile(sa, mid) - quantile(sb, mid)) * width;
    }
    return acc;
}

double oracle_dtw(std::span<const double> a, std::span<const double> b) {
    struct Frame { std::size_t i, j; double cost; };
    std::vector<Frame> stack{{0, 0, std::abs(a[0] - b[0])}};
    double best = std::numeric_limits<double>::infinity();
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        if (f.i == a.size() - 1 && f.j == b.size() - 1) {
            best = std::min(best, f.cost);
            continue;
        }
        if (f.i + 1 < a.size())
            stack.push_back({f.i + 1, f.j, f.cost + std::abs(a[f.i + 1] - b[f.j])});
        if (f.j + 1 < b.size())
            stack.push_back({f.i, f.j + 1, f.cost + std::abs(a[f.i] - b[f.j + 1])});
        if (f.i + 1 < a.size() && f.j + 1 < b.size())
            stack.push_back(
                {f.i + 1, f.j + 1, f.cost + std::abs(a[f.i + 1] - b[f.j + 1])});
    }
    return best;
}

} // namespace

int run_selftest(std::uint64_t seed) {
    std::mt19937 gen(static_cast<std::mt19937::result_type>(seed));
    Tally tally;

    // concat/split round trip
    {
        bool ok = true;
        for (int trial = 0; trial < 50 && ok; ++trial) {
            const std::size_t T = 2 + gen() % 30;
            const std::size_t t = 1 + gen() % (T - 1);
            const SeriesBatch x = random_batch(gen, 1 + gen() % 4, T, 1 + gen() % 4);
            const SplitPair pair = split_time(x, t);
            ok = concat_time(pair.lookback, pair.horizon).values() == x.values();
        }
        tally.report("concat/split round trip (50 cases)", ok);
    }

    // coverage counts vs double loop
    {
        bool ok = true;
        for (std::size_t T = 1; T <= 48 && ok; ++T)
            for (std::size_t p = 1; p <= T && ok; ++p)
                for (std::size_t s = 1; s <= 12 && ok; ++s) {
                    std::vector<std::uint32_t> want(T, 0);
                    for (std::size_t start = 0; start + p <= T; start += s)
                        for (std::size_t j = 0; j < p; ++j) ++want[start + j];
                    ok = coverage(T, p, s).counts == want;
                }
        tally.report("coverage vs brute-force double loop (T<=48, s<=12)", ok);
    }

    // unfold/reconstruct round trip on fully covered geometry
    {
        bool ok = true;
        for (int trial = 0; trial < 50 && ok; ++trial) {
            const std::size_t T = 4 + gen() % 48;
            std::size_t p = 1 + gen() % T;
            std::size_t s = 1 + gen() % p;
            while ((T - p) % s != 0) --s;
            const SeriesBatch x = random_batch(gen, 1 + gen() % 3, T, 1 + gen() % 3);
            ok = max_abs_diff(reconstruct(unfold(x, p, s)), x) <=
                 1e-12 * std::max(1.0, max_abs(x));
        }
        tally.report("unfold/reconstruct round trip (50 cases)", ok);
    }

    // hand-evaluated overlap average
    {
        const SeriesBatch x(1, 4, 1, {0.0, 1.0, 2.0, 3.0});
        PatchTensor patches = unfold(x, 2, 1);
        patches(0, 1, 0, 0) = 10.0;
        patches(0, 1, 0, 1) = 11.0;
        const SeriesBatch out = reconstruct(patches);
        const double want[4] = {0.0, 5.5, 6.5, 3.0};
        bool ok = true;
        for (std::size_t t = 0; t < 4; ++t)
            ok = ok && std::abs(out(0, t, 0) - want[t]) <= 1e-12;
        tally.report("overlap-average hand example [0, 5.5, 6.5, 3]", ok);
    }

    // patch variance vs two-pass oracle
    {
        bool ok = true;
        for (int trial = 0; trial < 200 && ok; ++trial) {
            const std::size_t C = 1 + gen() % 3;
            const std::size_t p = C == 1 ? 2 + gen() % 5 : 1 + gen() % 5;
            const std::size_t T = p + gen() % 16;
            const PatchTensor patches =
                unfold(random_batch(gen, 1 + gen() % 2, T, C), p, 1 + gen() % p);
            const PatchScores scores = patch_variance(patches);
            for (std::size_t b = 0; b < patches.batch() && ok; ++b)
                for (std::size_t i = 0; i < patches.num_patches() && ok; ++i) {
                    const double want = oracle_variance(patches.patch(b, i));
                    ok = std::abs(scores(b, i) - want) <=
                         1e-12 * std::max(1.0, std::abs(want));
                }
        }
        tally.report("patch variance vs two-pass brute force (200 cases)", ok);
    }

    // selection vs stable-sort oracle (with ties)
    {
        bool ok = true;
        std::uniform_real_distribution<double> dist(0.0, 3.0);
        for (int trial = 0; trial < 200 && ok; ++trial) {
            PatchScores scores;
            scores.batch = 1;
            scores.num_patches = 2 + gen() % 10;
            scores.values.resize(scores.num_patches);
            for (double& v : scores.values) {
                v = dist(gen);
                if (gen() % 2 == 0) v = std::floor(v); // ties
            }
            const double alpha =
                std::uniform_real_distribution<double>(0.3, 1.0)(gen);
            const std::uint64_t subs[1] = {static_cast<std::uint64_t>(trial)};
            const ShufflePlan plan = plan_shuffle(scores, alpha, seed, subs);
            const std::size_t ns = static_cast<std::size_t>(std::floor(
                alpha * static_cast<double>(scores.num_patches) + 1e-9));
            if (ns <= 1)
                ok = plan.elements[0].selected.empty();
            else
                ok = plan.elements[0].selected ==
                     oracle_smallest(scores.values, ns);
        }
        tally.report("lowest-variance selection vs stable-sort oracle (200 cases)", ok);
    }

    // multiset preservation under apply_shuffle
    {
        bool ok = true;
        for (int trial = 0; trial < 100 && ok; ++trial) {
            const std::size_t T = 8 + gen() % 24;
            const std::size_t p = 2 + gen() % 5;
            const SeriesBatch x = random_batch(gen, 1 + gen() % 3, T, 1 + gen() % 2);
            const PatchTensor patches = unfold(x, p, 1 + gen() % p);
            std::vector<std::uint64_t> subs(patches.batch());
            for (std::size_t b = 0; b < subs.size(); ++b) subs[b] = b;
            const ShufflePlan plan =
                plan_shuffle(patch_variance(patches), 1.0, trial, subs);
            const PatchTensor out = apply_shuffle(patches, plan);
            for (std::size_t b = 0; b < patches.batch() && ok; ++b) {
                std::vector<std::vector<double>> before, after;
                for (std::size_t i = 0; i < patches.num_patches(); ++i) {
                    const auto pb = patches.patch(b, i);
                    const auto pa = out.patch(b, i);
                    before.emplace_back(pb.begin(), pb.end());
                    after.emplace_back(pa.begin(), pa.end());
                }
                std::sort(before.begin(), before.end());
                std::sort(after.begin(), after.end());
                ok = before == after;
            }
        }
        tally.report("shuffle preserves the patch multiset (100 cases)", ok);
    }

    // degenerate shuffle rate leaves the pair unchanged
    {
        bool ok = true;
        for (int trial = 0; trial < 50 && ok; ++trial) {
            const std::size_t T = 8 + gen() % 24;
            const std::size_t t = 1 + gen() % (T - 1);
            const SeriesBatch x = random_batch(gen, 1 + gen() % 3, T, 1 + gen() % 2);
            TpsConfig cfg;
            cfg.patch_len = 2 + gen() % 5;
            cfg.stride = 1 + gen() % cfg.patch_len;
            cfg.seed = seed + trial;
            const std::size_t np =
                PatchGeometry{cfg.patch_len, cfg.stride, T}.num_patches();
            cfg.shuffle_rate = 1.0 / (static_cast<double>(np) + 1.0);
            const SplitPair out = tps_forecasting(split_time(x, t), cfg);
            ok = max_abs_diff(concat_time(out.lookback, out.horizon), x) <=
                 1e-12 * std::max(1.0, max_abs(x));
        }
        tally.report("N_s <= 1 degenerates to the identity (50 cases)", ok);
    }

    // KS vs brute force
    {
        bool ok = true;
        std::uniform_real_distribution<double> dist(-2.0, 2.0);
        for (int trial = 0; trial < 300 && ok; ++trial) {
            std::vector<double> a(1 + gen() % 24), b(1 + gen() % 24);
            for (double& v : a) v = dist(gen);
            for (double& v : b) v = dist(gen);
            if (gen() % 4 == 0) b[0] = a[0];
            ok = std::abs(ks_statistic(a, b) - oracle_ks(a, b)) <= 1e-12;
        }
        tally.report("KS statistic vs brute-force sup (300 cases)", ok);
    }

    // Wasserstein vs quantile integration
    {
        bool ok = true;
        std::uniform_real_distribution<double> dist(-2.0, 2.0);
        for (int trial = 0; trial < 300 && ok; ++trial) {
            std::vector<double> a(1 + gen() % 24), b(1 + gen() % 24);
            for (double& v : a) v = dist(gen);
            for (double& v : b) v = dist(gen);
            ok = std::abs(wasserstein1(a, b) - oracle_wasserstein(a, b)) <= 1e-9;
        }
        tally.report("Wasserstein-1 vs quantile integration (300 cases)", ok);
    }

    // DTW vs exhaustive path enumeration
    {
        bool ok = true;
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (int trial = 0; trial < 300 && ok; ++trial) {
            std::vector<double> a(1 + gen() % 5), b(1 + gen() % 5);
            for (double& v : a) v = dist(gen);
            for (double& v : b) v = dist(gen);
            ok = std::abs(dtw(a, b) - oracle_dtw(a, b)) <= 1e-12;
        }
        tally.report("DTW vs exhaustive path enumeration (300 cases)", ok);
    }

    // pinball / crps / pi80 identities
    {
        const SeriesBatch y = random_batch(gen, 2, 9, 2);
        const SeriesBatch med = random_batch(gen, 2, 9, 2);
        const QuantileSet median({0.5});
        const double pb = pinball(y, std::vector<SeriesBatch>{med}, median);
        bool ok = std::abs(pb - 0.5 * mae(y, med)) <= 1e-12;
        ok = ok && crps(y, std::vector<SeriesBatch>{med}, median) == 2.0 * pb;

        const SeriesBatch lo = random_batch(gen, 2, 9, 2);
        const SeriesBatch hi = random_batch(gen, 2, 9, 2);
        const IntervalScore score = pi80(y, lo, hi);
        std::size_t covered = 0;
        double width = 0.0;
        for (std::size_t i = 0; i < y.values().size(); ++i) {
            if (lo.values()[i] <= y.values()[i] && y.values()[i] <= hi.values()[i])
                ++covered;
            width += hi.values()[i] - lo.values()[i];
        }
        const double n = static_cast<double>(y.values().size());
        ok = ok && std::abs(score.coverage - covered / n) <= 1e-15;
        ok = ok && std::abs(score.width - width / n) <= 1e-12;
        tally.report("pinball = mae/2 at tau 0.5; crps = 2*pinball; pi80 counts", ok);
    }

    // shuffle-slot uniformity (5-sigma binomial bound)
    {
        PatchScores scores;
        scores.batch = 1;
        scores.num_patches = 4;
        scores.values = {0.0, 1.0, 2.0, 3.0};
        const int trials = 4000;
        int counts[4][4] = {};
        for (int t = 0; t < trials; ++t) {
            const std::uint64_t subs[1] = {static_cast<std::uint64_t>(t)};
            const ShufflePlan plan = plan_shuffle(scores, 1.0, seed, subs);
            for (std::size_t k = 0; k < 4; ++k)
                ++counts[k][plan.elements[0].permutation[k]];
        }
        const double expected = trials / 4.0;
        const double bound = 5.0 * std::sqrt(trials * 0.25 * 0.75);
        bool ok = true;
        for (auto& row : counts)
            for (int c : row) ok = ok && std::abs(c - expected) <= bound;
        tally.report("Fisher-Yates slot uniformity (4000 seeds, 5-sigma)", ok);
    }

    // determinism across repeated runs
    {
        const SeriesBatch x = random_batch(gen, 3, 40, 2);
        const SplitPair pair = split_time(x, 30);
        TpsConfig cfg;
        cfg.patch_len = 6;
        cfg.stride = 2;
        cfg.shuffle_rate = 0.8;
        cfg.seed = seed;
        const SplitPair a = tps_forecasting(pair, cfg);
        const SplitPair b = tps_forecasting(pair, cfg);
        tally.report("fixed-seed determinism (bitwise)",
                     a.lookback.values() == b.lookback.values() &&
                         a.horizon.values() == b.horizon.values());
    }

    // frequency-domain round trip at identity permutation
    {
        bool ok = true;
        for (int trial = 0; trial < 25 && ok; ++trial) {
            const std::size_t T = 16 + gen() % 32;
            const std::size_t t = 1 + gen() % (T - 1);
            const SeriesBatch x = random_batch(gen, 1 + gen() % 2, T, 1 + gen() % 2);
            TpsConfig cfg;
            cfg.variant = TpsVariant::FrequencyDomain;
            cfg.patch_len = 2 + gen() % 4;
            cfg.stride = 1 + gen() % cfg.patch_len;
            cfg.seed = seed + trial;
            const std::size_t np = PatchGeometry{cfg.patch_len, cfg.stride,
                                                 T / 2 + 1}.num_patches();
            cfg.shuffle_rate = 1.0 / (static_cast<double>(np) + 1.0);
            const SplitPair out = tps_variant(split_time(x, t), cfg);
            ok = max_abs_diff(concat_time(out.lookback, out.horizon), x) <=
                 1e-9 * std::max(1.0, max_abs(x));
        }
        tally.report("frequency-domain identity round trip (25 cases)", ok);
    }

    std::printf("selftest: %d passed, %d failed\n", tally.passed, tally.failed);
    return tally.failed == 0 ? 0 : 3;
}

} // namespace tps::cli
