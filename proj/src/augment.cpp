#include "tps/augment.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tps/parallel.hpp"
#include "tps/rng.hpp"

namespace tps {

namespace {

// Domain tags keeping the replica, upsample, and shuffle substream families
// of one master seed disjoint.
constexpr std::uint64_t kReplicaDomain = 0x5245504C49434154ull;
constexpr std::uint64_t kUpsampleDomain = 0x555053414D504C45ull;

std::size_t selected_count(double rate, std::size_t num_patches) {
    // floor(alpha * N_p); the epsilon keeps products like 0.7 * 10 from
    // landing at 6.999... and flooring one short.
    return static_cast<std::size_t>(
        std::floor(rate * static_cast<double>(num_patches) + 1e-9));
}

std::vector<std::uint64_t> counting_substreams(std::uint64_t base, std::size_t n) {
    std::vector<std::uint64_t> ids(n);
    for (std::size_t b = 0; b < n; ++b) ids[b] = base + b;
    return ids;
}

std::vector<std::uint64_t> content_substreams(const SeriesBatch& x) {
    std::vector<std::uint64_t> ids(x.batch());
    for (std::size_t b = 0; b < x.batch(); ++b) {
        const auto slab = x.element(b);
        ids[b] = hash_bytes(slab.data(), slab.size_bytes());
    }
    return ids;
}

// Shared body of the two planners: selection differs, permutation drawing
// does not.
template <typename SelectFn>
ShufflePlan make_plan(const PatchScores& scores, double rate,
                      std::uint64_t master_seed,
                      std::span<const std::uint64_t> substreams,
                      SelectFn&& select) {
    if (!(rate > 0.0) || rate > 1.0)
        throw std::invalid_argument("shuffle rate must lie in (0, 1], got " +
                                    std::to_string(rate));
    if (substreams.size() != scores.batch)
        throw std::invalid_argument("plan: substream count " +
                                    std::to_string(substreams.size()) +
                                    " does not match batch size " +
                                    std::to_string(scores.batch));

    ShufflePlan plan;
    plan.num_patches = scores.num_patches;
    plan.elements.resize(scores.batch);

    const std::size_t ns = selected_count(rate, scores.num_patches);
    parallel_for(scores.batch, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t b = lo; b < hi; ++b) {
            RngStream rng(master_seed, substreams[b]);
            auto& element = plan.elements[b];
            if (ns <= 1) continue; // permuting <= 1 patch is the identity
            element.selected = select(b, ns, rng);
            element.permutation = rng.permutation(ns);
        }
    });
    return plan;
}

} // namespace

TpsVariant parse_variant(const std::string& name) {
    if (name == "standard") return TpsVariant::Standard;
    if (name == "no-variance-order") return TpsVariant::NoVarianceOrder;
    if (name == "non-overlapping") return TpsVariant::NonOverlapping;
    if (name == "input-only") return TpsVariant::InputOnly;
    if (name == "frequency-domain") return TpsVariant::FrequencyDomain;
    throw std::invalid_argument(
        "unknown variant '" + name +
        "' (expected standard, no-variance-order, non-overlapping, input-only, "
        "frequency-domain)");
}

std::string variant_name(TpsVariant v) {
    switch (v) {
        case TpsVariant::Standard: return "standard";
        case TpsVariant::NoVarianceOrder: return "no-variance-order";
        case TpsVariant::NonOverlapping: return "non-overlapping";
        case TpsVariant::InputOnly: return "input-only";
        case TpsVariant::FrequencyDomain: return "frequency-domain";
    }
    return "unknown";
}

void TpsConfig::validate(std::size_t channels) const {
    if (!(shuffle_rate > 0.0) || shuffle_rate > 1.0)
        throw std::invalid_argument("shuffle rate must lie in (0, 1], got " +
                                    std::to_string(shuffle_rate));
    if (stride == 0)
        throw std::invalid_argument("stride must be >= 1");
    if (patch_len == 0)
        throw std::invalid_argument("patch length must be >= 1");
    if (channels * patch_len < 2)
        throw std::invalid_argument(
            "patch variance needs C*p > 1; got C=" + std::to_string(channels) +
            ", p=" + std::to_string(patch_len));
}

bool ShufflePlan::is_noop() const {
    for (const auto& element : elements)
        if (element.selected.size() > 1) return false;
    return true;
}

PatchScores patch_variance(const PatchTensor& patches) {
    const std::size_t n = patches.channels() * patches.geometry().patch_len;
    if (n < 2)
        throw std::invalid_argument(
            "patch_variance: sample variance undefined for C*p = " +
            std::to_string(n) + " (need C*p > 1)");

    PatchScores scores;
    scores.batch = patches.batch();
    scores.num_patches = patches.num_patches();
    scores.values.assign(scores.batch * scores.num_patches, 0.0);

    parallel_for(scores.batch, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t b = lo; b < hi; ++b) {
            for (std::size_t i = 0; i < scores.num_patches; ++i) {
                const auto block = patches.patch(b, i);
                double mean = 0.0;
                for (double v : block) mean += v;
                mean /= static_cast<double>(n);
                double ss = 0.0;
                for (double v : block) ss += (v - mean) * (v - mean);
                scores.values[b * scores.num_patches + i] =
                    ss / static_cast<double>(n - 1);
            }
        }
    });
    return scores;
}

ShufflePlan plan_shuffle(const PatchScores& scores, double rate,
                         std::uint64_t master_seed,
                         std::span<const std::uint64_t> substreams) {
    return make_plan(scores, rate, master_seed, substreams,
                     [&scores](std::size_t b, std::size_t ns, RngStream&) {
                         // Stable ascending argsort; ties resolved toward the
                         // lower patch index.
                         std::vector<std::size_t> order(scores.num_patches);
                         std::iota(order.begin(), order.end(), std::size_t{0});
                         std::stable_sort(order.begin(), order.end(),
                                          [&](std::size_t i, std::size_t j) {
                                              return scores(b, i) < scores(b, j);
                                          });
                         order.resize(ns);
                         return order;
                     });
}

ShufflePlan plan_random_subset(const PatchScores& scores, double rate,
                               std::uint64_t master_seed,
                               std::span<const std::uint64_t> substreams) {
    return make_plan(scores, rate, master_seed, substreams,
                     [&scores](std::size_t, std::size_t ns, RngStream& rng) {
                         return rng.subset(scores.num_patches, ns);
                     });
}

PatchTensor apply_shuffle(const PatchTensor& patches, const ShufflePlan& plan) {
    if (plan.elements.size() != patches.batch())
        throw std::invalid_argument("apply_shuffle: plan covers " +
                                    std::to_string(plan.elements.size()) +
                                    " elements but tensor has batch " +
                                    std::to_string(patches.batch()));
    if (plan.num_patches != patches.num_patches())
        throw std::invalid_argument("apply_shuffle: plan expects " +
                                    std::to_string(plan.num_patches) +
                                    " patches per element, tensor has " +
                                    std::to_string(patches.num_patches()));

    for (std::size_t b = 0; b < patches.batch(); ++b) {
        const auto& element = plan.elements[b];
        if (element.selected.size() <= 1) continue;
        if (element.permutation.size() != element.selected.size())
            throw std::invalid_argument(
                "apply_shuffle: permutation size mismatch in element " +
                std::to_string(b));
        for (std::size_t idx : element.selected)
            if (idx >= patches.num_patches())
                throw std::out_of_range(
                    "apply_shuffle: patch index " + std::to_string(idx) +
                    " outside [0, " + std::to_string(patches.num_patches()) +
                    ") in element " + std::to_string(b));
    }

    PatchTensor out = patches;
    parallel_for(patches.batch(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t b = lo; b < hi; ++b) {
            const auto& element = plan.elements[b];
            const std::size_t ns = element.selected.size();
            if (ns <= 1) continue;
            for (std::size_t k = 0; k < ns; ++k) {
                const std::size_t dst = element.selected[k];
                const std::size_t src = element.selected[element.permutation[k]];
                if (dst == src) continue;
                const auto from = patches.patch(b, src);
                std::copy(from.begin(), from.end(), out.patch(b, dst).begin());
            }
        }
    });
    return out;
}

namespace {

// Unfold -> score -> plan -> shuffle -> overlap-average reconstruction with
// the input as pass-through for any uncovered tail. This is the shared body
// of the forecasting, ablation, and classification entry points.
SeriesBatch shuffle_reconstruct(const SeriesBatch& x, const TpsConfig& cfg,
                                std::span<const std::uint64_t> substreams) {
    const PatchTensor patches = unfold(x, cfg.patch_len, cfg.effective_stride());
    const PatchScores scores = patch_variance(patches);
    const ShufflePlan plan =
        cfg.variant == TpsVariant::NoVarianceOrder
            ? plan_random_subset(scores, cfg.shuffle_rate, cfg.seed, substreams)
            : plan_shuffle(scores, cfg.shuffle_rate, cfg.seed, substreams);
    const PatchTensor shuffled = apply_shuffle(patches, plan);
    return reconstruct(shuffled, x);
}

// ---- frequency-domain variant ------------------------------------------

// One cached FFTW plan pair per series length. Plans are created with
// FFTW_ESTIMATE so the chosen algorithm depends only on the length, and with
// FFTW_UNALIGNED so they can execute on plain vector storage.
class DftPlans {
public:
    explicit DftPlans(std::size_t length)
        : length_(length), bins_(length / 2 + 1),
          real_(length), spectrum_(bins_) {
        forward_ = fftw_plan_dft_r2c_1d(
            static_cast<int>(length), real_.data(),
            reinterpret_cast<fftw_complex*>(spectrum_.data()),
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        inverse_ = fftw_plan_dft_c2r_1d(
            static_cast<int>(length),
            reinterpret_cast<fftw_complex*>(spectrum_.data()), real_.data(),
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!forward_ || !inverse_)
            throw std::runtime_error("FFTW plan creation failed for length " +
                                     std::to_string(length));
    }
    ~DftPlans() {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(inverse_);
    }
    DftPlans(const DftPlans&) = delete;
    DftPlans& operator=(const DftPlans&) = delete;

    std::size_t bins() const { return bins_; }

    void forward(const double* in, std::complex<double>* out) {
        std::copy(in, in + length_, real_.begin());
        fftw_execute_dft_r2c(forward_, real_.data(),
                             reinterpret_cast<fftw_complex*>(out));
    }

    void inverse(const std::complex<double>* in, double* out) {
        std::copy(in, in + bins_, spectrum_.begin());
        fftw_execute_dft_c2r(inverse_,
                             reinterpret_cast<fftw_complex*>(spectrum_.data()),
                             out);
        const double scale = 1.0 / static_cast<double>(length_);
        for (std::size_t i = 0; i < length_; ++i) out[i] *= scale;
    }

private:
    std::size_t length_;
    std::size_t bins_;
    std::vector<double> real_;
    std::vector<std::complex<double>> spectrum_;
    fftw_plan forward_;
    fftw_plan inverse_;
};

std::mutex g_fft_mutex; // FFTW planning and these shared buffers are serial

// Pack the spectrum of each channel as 2C real channels over the T/2+1
// non-negative frequency bins: real parts first, imaginary parts after.
SeriesBatch spectrum_pack(const SeriesBatch& x, DftPlans& plans) {
    const std::size_t B = x.batch(), T = x.length(), C = x.channels();
    const std::size_t F = plans.bins();
    SeriesBatch packed(B, F, 2 * C);
    std::vector<double> row(T);
    std::vector<std::complex<double>> spec(F);
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t c = 0; c < C; ++c) {
            for (std::size_t t = 0; t < T; ++t) row[t] = x(b, t, c);
            plans.forward(row.data(), spec.data());
            for (std::size_t k = 0; k < F; ++k) {
                packed(b, k, c) = spec[k].real();
                packed(b, k, C + c) = spec[k].imag();
            }
        }
    }
    return packed;
}

SeriesBatch spectrum_unpack(const SeriesBatch& packed, std::size_t length,
                            DftPlans& plans) {
    const std::size_t B = packed.batch();
    const std::size_t C = packed.channels() / 2;
    const std::size_t F = plans.bins();
    SeriesBatch out(B, length, C);
    std::vector<std::complex<double>> spec(F);
    std::vector<double> row(length);
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t c = 0; c < C; ++c) {
            for (std::size_t k = 0; k < F; ++k)
                spec[k] = {packed(b, k, c), packed(b, k, C + c)};
            // A real inverse requires real DC (and Nyquist, for even T)
            // bins; whatever imaginary mass the shuffle moved there is the
            // discarded residue.
            spec[0].imag(0.0);
            if (length % 2 == 0) spec[F - 1].imag(0.0);
            plans.inverse(spec.data(), row.data());
            for (std::size_t t = 0; t < length; ++t) out(b, t, c) = row[t];
        }
    }
    return out;
}

SeriesBatch frequency_domain_core(const SeriesBatch& x, const TpsConfig& cfg,
                                  std::span<const std::uint64_t> substreams) {
    std::lock_guard<std::mutex> lock(g_fft_mutex);
    DftPlans plans(x.length());
    if (cfg.patch_len > plans.bins())
        throw std::invalid_argument(
            "frequency-domain variant: patch length " +
            std::to_string(cfg.patch_len) + " exceeds the " +
            std::to_string(plans.bins()) + " frequency bins of a length-" +
            std::to_string(x.length()) + " series");
    const SeriesBatch packed = spectrum_pack(x, plans);
    const SeriesBatch shuffled = shuffle_reconstruct(packed, cfg, substreams);
    return spectrum_unpack(shuffled, x.length(), plans);
}

} // namespace

SplitPair tps_forecasting(const SplitPair& pair, const TpsConfig& cfg) {
    cfg.validate(pair.channels());
    const SeriesBatch x = concat_time(pair.lookback, pair.horizon);
    const auto substreams = counting_substreams(cfg.substream_base, x.batch());
    const SeriesBatch synthetic = shuffle_reconstruct(x, cfg, substreams);
    return split_time(synthetic, pair.lookback_len());
}

SplitPair tps_variant(const SplitPair& pair, const TpsConfig& cfg) {
    if (cfg.variant == TpsVariant::Standard)
        throw std::invalid_argument("tps_variant requires a non-standard variant");
    cfg.validate(pair.channels());

    switch (cfg.variant) {
        case TpsVariant::NoVarianceOrder:
        case TpsVariant::NonOverlapping: {
            const SeriesBatch x = concat_time(pair.lookback, pair.horizon);
            const auto subs = counting_substreams(cfg.substream_base, x.batch());
            return split_time(shuffle_reconstruct(x, cfg, subs),
                              pair.lookback_len());
        }
        case TpsVariant::InputOnly: {
            // Deliberately breaks data-label coherence: the horizon is
            // returned untouched.
            const auto subs =
                counting_substreams(cfg.substream_base, pair.batch());
            SeriesBatch lookback =
                shuffle_reconstruct(pair.lookback, cfg, subs);
            return {std::move(lookback), pair.horizon};
        }
        case TpsVariant::FrequencyDomain: {
            const SeriesBatch x = concat_time(pair.lookback, pair.horizon);
            const auto subs = counting_substreams(cfg.substream_base, x.batch());
            return split_time(frequency_domain_core(x, cfg, subs),
                              pair.lookback_len());
        }
        default:
            throw std::invalid_argument("tps_variant: unhandled variant");
    }
}

SplitPair tps_augment(const SplitPair& pair, const TpsConfig& cfg) {
    return cfg.variant == TpsVariant::Standard ? tps_forecasting(pair, cfg)
                                               : tps_variant(pair, cfg);
}

SeriesBatch tps_classification(const SeriesBatch& x, const TpsConfig& cfg) {
    if (cfg.level != ShuffleLevel::Sample)
        throw std::invalid_argument(
            "tps_classification requires sample-level shuffling");
    cfg.validate(x.channels());
    const auto substreams = content_substreams(x);
    if (cfg.variant == TpsVariant::FrequencyDomain)
        return frequency_domain_core(x, cfg, substreams);
    return shuffle_reconstruct(x, cfg, substreams);
}

SplitPair tps_replicated(const SplitPair& pair, const TpsConfig& cfg,
                         std::size_t count) {
    if (count == 0)
        throw std::invalid_argument("tps_replicated: replica count must be >= 1");
    // Replica 0 keeps the master seed so count == 1 matches a plain call.
    std::optional<SplitPair> merged;
    for (std::size_t r = 0; r < count; ++r) {
        TpsConfig replica_cfg = cfg;
        if (r > 0) replica_cfg.seed = derive_seed(cfg.seed, kReplicaDomain + r);
        SplitPair synthetic = tps_augment(pair, replica_cfg);
        merged = merged ? merge_batches(*merged, synthetic) : std::move(synthetic);
    }
    return *merged;
}

SplitPair upsample_baseline(const SplitPair& pair, double segment_rate,
                            std::uint64_t seed, std::uint64_t substream_base) {
    if (!(segment_rate > 0.0) || segment_rate > 1.0)
        throw std::invalid_argument("upsample: segment rate must lie in (0, 1]");

    const SeriesBatch x = concat_time(pair.lookback, pair.horizon);
    const std::size_t B = x.batch(), T = x.length(), C = x.channels();
    const std::size_t seg_len = static_cast<std::size_t>(
        std::ceil(segment_rate * static_cast<double>(T)));
    if (seg_len < 2)
        throw std::invalid_argument(
            "upsample: segment length " + std::to_string(seg_len) +
            " too short to interpolate (need >= 2); raise the segment rate");

    SeriesBatch out(B, T, C);
    parallel_for(B, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t b = lo; b < hi; ++b) {
            RngStream rng(derive_seed(seed, kUpsampleDomain), substream_base + b);
            const std::size_t start =
                static_cast<std::size_t>(rng.below(T - seg_len + 1));
            for (std::size_t t = 0; t < T; ++t) {
                // Multiply before dividing so t = T-1 maps to exactly
                // seg_len-1 and grid points copy bit-exactly.
                const double pos = static_cast<double>(t) *
                                   static_cast<double>(seg_len - 1) /
                                   static_cast<double>(T - 1);
                const std::size_t left = static_cast<std::size_t>(pos);
                const double frac = pos - static_cast<double>(left);
                for (std::size_t c = 0; c < C; ++c) {
                    const double lo_v = x(b, start + left, c);
                    if (frac == 0.0) {
                        out(b, t, c) = lo_v;
                    } else {
                        const double hi_v = x(b, start + left + 1, c);
                        out(b, t, c) = lo_v + frac * (hi_v - lo_v);
                    }
                }
            }
        }
    });
    return split_time(out, pair.lookback_len());
}

} // namespace tps
