// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Expected values come from independent oracles (brute force, exhaustive
// enumeration, hand-evaluated formulas), never from the kernels under test.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tps/augment.hpp"
#include "tps/dataset.hpp"
#include "tps/metrics.hpp"
#include "tps/rng.hpp"
#include "tps/synth.hpp"

using namespace tps;

namespace {

int g_passed = 0;
int g_failed = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %s — %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    (ok ? g_passed : g_failed) += 1;
}

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

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

// ---- criteria -------------------------------------------------------------

void criterion_round_trip() {
    const double start = now_seconds();
    std::mt19937 gen(1001);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t B = 1 + gen() % 4;
        const std::size_t T = 2 + gen() % 127;
        const std::size_t C = 1 + gen() % 8;
        std::size_t p = 1 + gen() % T;
        std::size_t s = 1 + gen() % p;
        while ((T - p) % s != 0) --s; // fully covered geometry

        const SeriesBatch x = random_batch(gen, B, T, C);
        const SeriesBatch back = reconstruct(unfold(x, p, s));
        worst = std::max(worst,
                         max_abs_diff(back, x) / std::max(1.0, max_abs(x)));
    }
    const double elapsed = now_seconds() - start;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "200 fully covered geometries, worst relative error %.3g "
                  "(budget 1e-12), %.2f s (budget 5 s)",
                  worst, elapsed);
    report("round-trip identity", worst <= 1e-12 && elapsed < 5.0, detail);
}

void criterion_degeneracy() {
    std::mt19937 gen(1002);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t C = 1 + gen() % 4;
        const std::size_t T = 8 + gen() % 56;
        const std::size_t t = 1 + gen() % (T - 1);
        const SeriesBatch x = random_batch(gen, 1 + gen() % 4, T, C);

        TpsConfig cfg;
        cfg.patch_len = 2 + gen() % std::min<std::size_t>(8, T - 1);
        cfg.stride = 1 + gen() % cfg.patch_len;
        cfg.seed = 5000 + trial;
        const std::size_t np =
            PatchGeometry{cfg.patch_len, cfg.stride, T}.num_patches();
        // Alternate between N_s == 0 and N_s == 1.
        cfg.shuffle_rate = (trial % 2 == 0 || np < 2)
                               ? 1.0 / (static_cast<double>(np) + 1.0)
                               : 1.2 / static_cast<double>(np);

        const SplitPair out = tps_forecasting(split_time(x, t), cfg);
        const SeriesBatch merged = concat_time(out.lookback, out.horizon);
        worst = std::max(worst,
                         max_abs_diff(merged, x) / std::max(1.0, max_abs(x)));
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "100 instances with N_s <= 1, worst relative deviation %.3g "
                  "(budget 1e-12)", worst);
    report("Algorithm-1 degeneracy to identity", worst <= 1e-12, detail);
}

void criterion_multiset() {
    std::mt19937 gen(1003);
    bool ok = true;
    for (int trial = 0; trial < 200 && ok; ++trial) {
        const std::size_t B = 1 + gen() % 4;
        const std::size_t C = 1 + gen() % 3;
        const std::size_t T = 8 + gen() % 48;
        const std::size_t p = 2 + gen() % std::min<std::size_t>(8, T - 1);
        const SeriesBatch x = random_batch(gen, B, T, C);
        const PatchTensor patches = unfold(x, p, 1 + gen() % p);
        std::vector<std::uint64_t> subs(B);
        for (std::size_t b = 0; b < B; ++b) subs[b] = trial * 100 + b;
        const double alpha =
            std::uniform_real_distribution<double>(0.2, 1.0)(gen);
        const PatchTensor out = apply_shuffle(
            patches, plan_shuffle(patch_variance(patches), alpha, 2024, subs));

        for (std::size_t b = 0; b < B && ok; ++b) {
            std::vector<std::vector<double>> before, after;
            for (std::size_t i = 0; i < patches.num_patches(); ++i) {
                const auto pb = patches.patch(b, i);
                const auto pa = out.patch(b, i);
                before.emplace_back(pb.begin(), pb.end());
                after.emplace_back(pa.begin(), pa.end());
            }
            std::sort(before.begin(), before.end());
            std::sort(after.begin(), after.end());
            ok = before == after; // bit-exact multiset comparison
        }
    }
    report("multiset preservation under apply_shuffle", ok,
           "200 random plans, per-element patch multisets compared bit-exactly");
}

void criterion_variance_oracle() {
    std::mt19937 gen(1004);
    double worst = 0.0;
    std::size_t patches_checked = 0;
    bool selection_ok = true;

    while (patches_checked < 1000) {
        const std::size_t C = 1 + gen() % 3;
        const std::size_t p = C == 1 ? 2 + gen() % 6 : 1 + gen() % 6;
        const std::size_t T = p + gen() % 24;
        const PatchTensor patches =
            unfold(random_batch(gen, 1 + gen() % 3, T, C), p, 1 + gen() % p);
        const PatchScores scores = patch_variance(patches);
        for (std::size_t b = 0; b < patches.batch(); ++b)
            for (std::size_t i = 0; i < patches.num_patches(); ++i) {
                const double want = oracles::two_pass_variance(patches.patch(b, i));
                worst = std::max(worst, std::abs(scores(b, i) - want) /
                                            std::max(1.0, std::abs(want)));
                ++patches_checked;
            }
    }

    // Selection vs stable-sort oracle, with deliberately tied scores.
    std::uniform_real_distribution<double> dist(0.0, 3.0);
    for (int trial = 0; trial < 300 && selection_ok; ++trial) {
        PatchScores scores;
        scores.batch = 1;
        scores.num_patches = 2 + gen() % 12;
        scores.values.resize(scores.num_patches);
        for (double& v : scores.values) {
            v = dist(gen);
            if (gen() % 2 == 0) v = std::floor(v);
        }
        const double alpha = std::uniform_real_distribution<double>(0.2, 1.0)(gen);
        const std::size_t ns = static_cast<std::size_t>(std::floor(
            alpha * static_cast<double>(scores.num_patches) + 1e-9));
        const std::uint64_t subs[1] = {static_cast<std::uint64_t>(trial)};
        const ShufflePlan plan = plan_shuffle(scores, alpha, 77, subs);
        if (ns <= 1)
            selection_ok = plan.elements[0].selected.empty();
        else
            selection_ok = plan.elements[0].selected ==
                           oracles::stable_smallest(scores.values, ns);
    }

    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "%zu patches vs two-pass brute force, worst relative error "
                  "%.3g (budget 1e-12); selection matches stable-sort oracle "
                  "with ties", patches_checked, worst);
    report("variance and selection oracle", worst <= 1e-12 && selection_ok, detail);
}

void criterion_coverage_oracle() {
    bool ok = true;
    std::size_t cases = 0;
    for (std::size_t T = 1; T <= 64 && ok; ++T)
        for (std::size_t p = 1; p <= T && ok; ++p)
            for (std::size_t s = 1; s <= 16 && ok; ++s) {
                const CoverageProfile got = coverage(T, p, s);
                const auto want = oracles::coverage_counts(T, p, s);
                bool any_zero = false;
                for (std::uint32_t k : want)
                    if (k == 0) any_zero = true;
                ok = got.counts == want && got.has_uncovered == any_zero;
                ++cases;
            }
    char detail[96];
    std::snprintf(detail, sizeof(detail),
                  "exhaustive T<=64, p<=T, s<=16: %zu geometries", cases);
    report("coverage oracle", ok, detail);
}

void criterion_hand_example() {
    const SeriesBatch x(1, 4, 1, {0.0, 1.0, 2.0, 3.0});
    PatchTensor patches = unfold(x, 2, 1);
    patches(0, 1, 0, 0) = 10.0;
    patches(0, 1, 0, 1) = 11.0;
    const SeriesBatch out = reconstruct(patches);
    const double want[4] = {0.0, 5.5, 6.5, 3.0};
    double worst = 0.0;
    for (std::size_t t = 0; t < 4; ++t)
        worst = std::max(worst, std::abs(out(0, t, 0) - want[t]));
    char detail[96];
    std::snprintf(detail, sizeof(detail),
                  "T=4, p=2, s=1, altered middle patch -> [0, 5.5, 6.5, 3], "
                  "max deviation %.3g", worst);
    report("reconstruction hand example", worst <= 1e-12, detail);
}

// Branch-and-bound search over every monotone alignment path; prunes only
// provably worse branches, so the minimum equals full enumeration.
double dtw_path_search(std::span<const double> a, std::span<const double> b) {
    struct Frame { std::size_t i, j; double cost; };
    std::vector<Frame> stack{{0, 0, std::abs(a[0] - b[0])}};
    double best = std::numeric_limits<double>::infinity();
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        if (f.cost >= best) continue;
        if (f.i == a.size() - 1 && f.j == b.size() - 1) {
            best = f.cost;
            continue;
        }
        const bool right = f.i + 1 < a.size();
        const bool down = f.j + 1 < b.size();
        if (right && down)
            stack.push_back({f.i + 1, f.j + 1, f.cost + std::abs(a[f.i + 1] - b[f.j + 1])});
        if (down)
            stack.push_back({f.i, f.j + 1, f.cost + std::abs(a[f.i] - b[f.j + 1])});
        if (right)
            stack.push_back({f.i + 1, f.j, f.cost + std::abs(a[f.i + 1] - b[f.j])});
    }
    return best;
}

void criterion_metric_oracles() {
    std::mt19937 gen(1007);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);

    // KS and Wasserstein: 500 trials each, n <= 32, 1e-9.
    double worst_ks = 0.0, worst_w1 = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> a(1 + gen() % 32), b(1 + gen() % 32);
        for (double& v : a) v = dist(gen);
        for (double& v : b) v = dist(gen);
        if (gen() % 4 == 0) b[0] = a[0];
        worst_ks = std::max(worst_ks,
                            std::abs(ks_statistic(a, b) - oracles::ks_bruteforce(a, b)));
        worst_w1 = std::max(
            worst_w1,
            std::abs(wasserstein1(a, b) - oracles::wasserstein_quantile_integral(a, b)));
    }

    // DTW: every sequence pair of length <= 6 over the alphabet {0, 1, 2}.
    std::vector<std::vector<double>> seqs;
    for (std::size_t len = 1; len <= 6; ++len) {
        std::size_t total = 1;
        for (std::size_t i = 0; i < len; ++i) total *= 3;
        for (std::size_t code = 0; code < total; ++code) {
            std::vector<double> s(len);
            std::size_t c = code;
            for (std::size_t i = 0; i < len; ++i) {
                s[i] = static_cast<double>(c % 3);
                c /= 3;
            }
            seqs.push_back(std::move(s));
        }
    }
    double worst_dtw = 0.0;
    std::size_t dtw_pairs = 0;
    for (std::size_t i = 0; i < seqs.size(); ++i)
        for (std::size_t j = i; j < seqs.size(); ++j) {
            worst_dtw = std::max(worst_dtw, std::abs(dtw(seqs[i], seqs[j]) -
                                                     dtw_path_search(seqs[i], seqs[j])));
            ++dtw_pairs;
        }

    // Pinball / CRPS / PI-80 identities.
    const SeriesBatch y = random_batch(gen, 2, 9, 2);
    const SeriesBatch med = random_batch(gen, 2, 9, 2);
    const QuantileSet median({0.5});
    const double pb = pinball(y, std::vector<SeriesBatch>{med}, median);
    const double pinball_gap = std::abs(pb - 0.5 * mae(y, med));
    const bool crps_exact =
        crps(y, std::vector<SeriesBatch>{med}, median) == 2.0 * pb;

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
    const bool pi_ok = score.coverage == covered / n &&
                       std::abs(score.width - width / n) <= 1e-12;

    const bool ok = worst_ks <= 1e-9 && worst_w1 <= 1e-9 && worst_dtw <= 1e-12 &&
                    pinball_gap <= 1e-12 && crps_exact && pi_ok;
    char detail[256];
    std::snprintf(detail, sizeof(detail),
                  "KS err %.2g, W1 err %.2g (500 trials, n<=32, budget 1e-9); "
                  "DTW err %.2g over %zu exhaustive pairs; pinball(0.5)-mae/2 "
                  "gap %.2g; crps==2*pinball %s; pi80 matches counting loop %s",
                  worst_ks, worst_w1, worst_dtw, dtw_pairs, pinball_gap,
                  crps_exact ? "yes" : "NO", pi_ok ? "yes" : "NO");
    report("metric oracles", ok, detail);
}

int run_command(const std::string& command) {
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

void criterion_cli_determinism(const std::string& cli) {
    if (cli.empty() || !std::filesystem::exists(cli)) {
        report("cmd_augment determinism", false,
               "tps binary not found (pass --cli <path>)");
        return;
    }
    const auto dir = std::filesystem::temp_directory_path() /
                     ("tps_acc_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(dir);

    const std::string data = (dir / "data.csv").string();
    SynthSpec spec;
    spec.rows = 900;
    spec.channels = 3;
    spec.seed = 21;
    write_synthetic_csv(data, spec);

    const std::string flags =
        " --t 64 --h 32 --splits 600,150,150 --p 16 --s 5 --alpha 1.0 --seed 404";
    std::vector<std::uint64_t> hashes;
    bool ran_ok = true;
    const char* prefixes[] = {"TPS_THREADS=4 ", "TPS_THREADS=4 ",
                              "TPS_THREADS=1 ", "TPS_THREADS=8 "};
    for (const char* prefix : prefixes) {
        const std::string out =
            (dir / ("out" + std::to_string(hashes.size()) + ".csv")).string();
        const std::string cmd = std::string(prefix) + cli + " augment --data " +
                                data + flags + " --out " + out + " >/dev/null 2>&1";
        if (run_command(cmd) != 0) {
            ran_ok = false;
            break;
        }
        hashes.push_back(hash_file(out));
    }
    bool identical = ran_ok && hashes.size() == 4;
    for (std::size_t i = 1; i < hashes.size() && identical; ++i)
        identical = hashes[i] == hashes[0];
    std::filesystem::remove_all(dir);
    report("cmd_augment determinism", identical,
           ran_ok ? "fixed seed, two runs at 4 threads plus runs at 1 and 8 "
                    "threads: output files hash-equal"
                  : "tps augment invocation failed");
}

void criterion_frequency_round_trip() {
    std::mt19937 gen(1009);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t C = 1 + gen() % 3;
        const std::size_t T = 12 + gen() % 52;
        const std::size_t t = 1 + gen() % (T - 1);
        const SeriesBatch x = random_batch(gen, 1 + gen() % 3, T, C);

        TpsConfig cfg;
        cfg.variant = TpsVariant::FrequencyDomain;
        cfg.patch_len = 2 + gen() % 4;
        cfg.stride = 1 + gen() % cfg.patch_len;
        cfg.seed = trial;
        const std::size_t np = PatchGeometry{cfg.patch_len, cfg.stride,
                                             T / 2 + 1}.num_patches();
        cfg.shuffle_rate = 1.0 / (static_cast<double>(np) + 1.0); // identity plan

        const SplitPair out = tps_variant(split_time(x, t), cfg);
        const SeriesBatch merged = concat_time(out.lookback, out.horizon);
        worst = std::max(worst,
                         max_abs_diff(merged, x) / std::max(1.0, max_abs(x)));
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "100 instances, identity permutation, worst relative "
                  "deviation %.3g (budget 1e-9)", worst);
    report("frequency-domain round trip", worst <= 1e-9, detail);
}

void criterion_distribution_shift() {
    const double start = now_seconds();

    // Real dataset when provided, otherwise the deterministic surrogate with
    // the same shape, split sizes, and drift-dominated structure.
    SeriesBatch raw(1, 1, 1);
    std::string source;
    if (const char* env = std::getenv("TPS_ETTH2_CSV")) {
        DatasetSpec spec;
        spec.path = env;
        raw = load_csv(spec).series;
        source = "ETTh2 from TPS_ETTH2_CSV";
    } else {
        SynthSpec spec; // 17420 x 7, seed 1
        raw = make_synthetic_series(spec);
        source = "benchmark-shaped surrogate (set TPS_ETTH2_CSV for the real data)";
    }

    DatasetSpec dspec;
    dspec.split = {8545.0, 2881.0, 2881.0};
    const StandardizedSplits splits = split_standardize(raw, dspec);

    const std::size_t t = 336, h = 336;
    const std::size_t total = window_count(splits.train.length(), t, h);
    const std::size_t B = 64;
    const std::size_t C = raw.channels();
    SeriesBatch lb(B, t, C), hz(B, h, C);
    for (std::size_t w = 0; w < B; ++w) {
        const std::size_t startRow = w * (total - 1) / (B - 1);
        for (std::size_t j = 0; j < t; ++j)
            for (std::size_t c = 0; c < C; ++c)
                lb(w, j, c) = splits.train(0, startRow + j, c);
        for (std::size_t j = 0; j < h; ++j)
            for (std::size_t c = 0; c < C; ++c)
                hz(w, j, c) = splits.train(0, startRow + t + j, c);
    }
    const SplitPair pair{std::move(lb), std::move(hz)};
    const SeriesBatch orig = concat_time(pair.lookback, pair.horizon);

    TpsConfig cfg;
    cfg.patch_len = 32;
    cfg.stride = 5;
    cfg.shuffle_rate = 1.0;
    cfg.seed = 7;
    const SplitPair tps_pair = tps_forecasting(pair, cfg);
    const MetricsReport tps_report = distribution_shift_report(
        orig, concat_time(tps_pair.lookback, tps_pair.horizon));

    TpsConfig ncfg = cfg;
    ncfg.variant = TpsVariant::NonOverlapping;
    const SplitPair non_pair = tps_variant(pair, ncfg);
    const MetricsReport non_report = distribution_shift_report(
        orig, concat_time(non_pair.lookback, non_pair.horizon));

    const double tps_dtw = tps_report.find("avg_dtw")->value;
    const double non_dtw = non_report.find("avg_dtw")->value;
    const double tps_w1 = tps_report.find("avg_wasserstein")->value;
    const double non_w1 = non_report.find("avg_wasserstein")->value;
    const double elapsed = now_seconds() - start;

    char detail[224];
    std::snprintf(detail, sizeof(detail),
                  "TPS(32,5,1.0) avg-DTW %.4g < non-overlapping %.4g on %s "
                  "(%.1f s, budget 120 s)", tps_dtw, non_dtw, source.c_str(),
                  elapsed);
    report("distribution shift: avg-DTW ordering",
           tps_dtw < non_dtw && elapsed < 120.0, detail);

    // Placement-only shuffling preserves each channel's value multiset
    // bit-exactly, so the non-overlapping baseline's Wasserstein distance is
    // identically zero and no nonzero TPS value can undercut it. Kept as
    // specified; see the decisions ledger for the analysis.
    std::snprintf(detail, sizeof(detail),
                  "TPS avg-W1 %.4g vs non-overlapping avg-W1 %.4g (the "
                  "baseline is exactly zero by multiset preservation; "
                  "strictly lower is unattainable)", tps_w1, non_w1);
    report("distribution shift: avg-Wasserstein ordering", tps_w1 < non_w1, detail);

    std::snprintf(detail, sizeof(detail),
                  "TPS avg-W1 %.4g (budget 0.05) on %s", tps_w1, source.c_str());
    report("distribution shift: avg-Wasserstein magnitude", tps_w1 < 0.05, detail);
}

void criterion_classification_equivariance() {
    std::mt19937 gen(1011);
    bool ok = true;
    int trials = 0;
    while (trials < 100 && ok) {
        const std::size_t B = 3 + gen() % 6;
        const std::size_t T = 16 + gen() % 32;
        const std::size_t C = 1 + gen() % 2;
        const SeriesBatch x = random_batch(gen, B, T, C);

        TpsConfig cfg;
        cfg.level = ShuffleLevel::Sample;
        cfg.patch_len = 3 + gen() % 4;
        cfg.stride = 1 + gen() % cfg.patch_len;
        cfg.shuffle_rate = 1.0;
        cfg.seed = 9000 + trials;

        const SeriesBatch base = tps_classification(x, cfg);

        std::vector<std::size_t> order(B);
        for (std::size_t b = 0; b < B; ++b) order[b] = b;
        std::shuffle(order.begin(), order.end(), gen);
        SeriesBatch permuted(B, T, C);
        for (std::size_t b = 0; b < B; ++b) {
            const auto src = x.element(order[b]);
            std::copy(src.begin(), src.end(), permuted.element(b).begin());
        }
        const SeriesBatch out = tps_classification(permuted, cfg);
        for (std::size_t b = 0; b < B && ok; ++b) {
            const auto got = out.element(b);
            const auto want = base.element(order[b]);
            ok = std::equal(got.begin(), got.end(), want.begin());
        }
        ++trials;
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail),
                  "%d trials: permuting sample order permutes outputs "
                  "bit-identically", trials);
    report("classification sample-keyed equivariance", ok, detail);
}

} // namespace

int main(int argc, char** argv) {
    std::string cli;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];

    criterion_round_trip();
    criterion_degeneracy();
    criterion_multiset();
    criterion_variance_oracle();
    criterion_coverage_oracle();
    criterion_hand_example();
    criterion_metric_oracles();
    criterion_cli_determinism(cli);
    criterion_frequency_round_trip();
    criterion_distribution_shift();
    criterion_classification_equivariance();

    std::printf("acceptance: %d passed, %d failed\n", g_passed, g_failed);
    return g_failed == 0 ? 0 : 1;
}
