#ifndef TPS_AUGMENT_HPP
#define TPS_AUGMENT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tps/patching.hpp"
#include "tps/series.hpp"

namespace tps {

enum class TpsVariant {
    Standard,        ///< full pipeline: variance-ordered partial shuffle on overlapping patches
    NoVarianceOrder, ///< ablation: shuffled subset chosen uniformly at random
    NonOverlapping,  ///< ablation: stride forced to the patch length
    InputOnly,       ///< ablation: only the look-back window is augmented
    FrequencyDomain, ///< ablation: pipeline applied to the DFT of the signal
};

enum class ShuffleLevel { Batch, Sample };

TpsVariant parse_variant(const std::string& name);
std::string variant_name(TpsVariant v);

/// Augmentation parameters. `substream_base` offsets the per-element
/// substream key so a caller processing windows in chunks can key each
/// window by its global index.
struct TpsConfig {
    std::size_t patch_len = 32;
    std::size_t stride = 1;
    double shuffle_rate = 1.0;
    std::uint64_t seed = 0;
    TpsVariant variant = TpsVariant::Standard;
    ShuffleLevel level = ShuffleLevel::Batch;
    std::uint64_t substream_base = 0;

    /// Validates rate/stride/patch bounds for a series with C channels.
    void validate(std::size_t channels) const;

    /// Effective stride (equals patch_len for the non-overlapping variant).
    std::size_t effective_stride() const {
        return variant == TpsVariant::NonOverlapping ? patch_len : stride;
    }
};

/// Per-patch variance scores, shape [batch, num_patches].
struct PatchScores {
    std::size_t batch = 0;
    std::size_t num_patches = 0;
    std::vector<double> values;

    double operator()(std::size_t b, std::size_t i) const {
        return values[b * num_patches + i];
    }
};

/// For each batch element: the patch slots chosen for shuffling (in
/// argsort order, as produced by the selection rule) and the permutation
/// applied to them.
struct ShufflePlan {
    struct Element {
        std::vector<std::size_t> selected;
        std::vector<std::size_t> permutation;
    };
    std::size_t num_patches = 0;
    std::vector<Element> elements;

    /// True when no element permutes anything (N_s <= 1).
    bool is_noop() const;
};

/// Sample variance over all channels and offsets of each patch jointly,
/// with Bessel's C*p - 1 denominator. Requires C*p > 1.
PatchScores patch_variance(const PatchTensor& patches);

/// Select floor(rate * N_p) lowest-variance patches per element (stable
/// ascending sort, ties broken by lower patch index) and draw a uniform
/// permutation for them via Fisher-Yates from the element's substream.
/// Element b uses substream id substreams[b].
ShufflePlan plan_shuffle(const PatchScores& scores, double rate,
                         std::uint64_t master_seed,
                         std::span<const std::uint64_t> substreams);

/// Ablation counterpart of plan_shuffle: the shuffled subset is a uniform
/// random subset of the patch slots instead of the lowest-variance ones.
ShufflePlan plan_random_subset(const PatchScores& scores, double rate,
                               std::uint64_t master_seed,
                               std::span<const std::uint64_t> substreams);

/// Apply the plan: P_b[selected] <- P_b[selected][perm]. Unselected patches
/// are bit-identical; the per-element patch multiset is preserved.
PatchTensor apply_shuffle(const PatchTensor& patches, const ShufflePlan& plan);

/// Temporal Patch Shuffle for forecasting: concatenate the pair, unfold,
/// score, shuffle the selected patches per batch element, reconstruct with
/// overlap averaging (original values pass through any uncovered tail), and
/// split back at the look-back length.
SplitPair tps_forecasting(const SplitPair& pair, const TpsConfig& cfg);

/// Ablation variants (cfg.variant must not be Standard).
SplitPair tps_variant(const SplitPair& pair, const TpsConfig& cfg);

/// Dispatch on cfg.variant: Standard runs tps_forecasting, anything else
/// runs tps_variant.
SplitPair tps_augment(const SplitPair& pair, const TpsConfig& cfg);

/// Classification adaptation: the pipeline runs on the input sequence alone,
/// with each sample's substream keyed by the sample content so permuting the
/// sample order permutes the outputs identically. Requires sample level.
SeriesBatch tps_classification(const SeriesBatch& x, const TpsConfig& cfg);

/// Generate `count` independent synthetic replicas of `pair` and concatenate
/// them along the batch dimension (replica r keyed by (seed, r)).
SplitPair tps_replicated(const SplitPair& pair, const TpsConfig& cfg,
                         std::size_t count);

/// Upsample baseline: per batch element, pick a uniformly random consecutive
/// segment of length ceil(segment_rate * T) of the concatenated series and
/// stretch it back to length T by linear interpolation. Requires segment
/// length >= 2.
SplitPair upsample_baseline(const SplitPair& pair, double segment_rate,
                            std::uint64_t seed, std::uint64_t substream_base = 0);

} // namespace tps

#endif // TPS_AUGMENT_HPP
