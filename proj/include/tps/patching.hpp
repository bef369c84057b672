#ifndef TPS_PATCHING_HPP
#define TPS_PATCHING_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tps/series.hpp"

namespace tps {

/// Sliding-window geometry: patches of length `patch_len` taken every
/// `stride` steps from a series of length `source_len`.
struct PatchGeometry {
    std::size_t patch_len = 0;
    std::size_t stride = 0;
    std::size_t source_len = 0;

    /// floor((T - p) / s + 1); requires patch_len <= source_len.
    std::size_t num_patches() const {
        return (source_len - patch_len) / stride + 1;
    }

    /// True when every time index falls inside at least one window.
    bool fully_covers() const {
        return (source_len - patch_len) % stride == 0;
    }
};

/**
 * Patches extracted from a SeriesBatch, stored row-major as
 * [batch, patch, channel, offset]. Geometry is fixed at construction and
 * reconstruction must use it.
 */
class PatchTensor {
public:
    PatchTensor(std::size_t batch, std::size_t channels, PatchGeometry geometry);

    std::size_t batch() const { return batch_; }
    std::size_t channels() const { return channels_; }
    std::size_t num_patches() const { return geometry_.num_patches(); }
    const PatchGeometry& geometry() const { return geometry_; }

    std::size_t index(std::size_t b, std::size_t i, std::size_t c, std::size_t j) const {
        return ((b * num_patches_ + i) * channels_ + c) * geometry_.patch_len + j;
    }

    double operator()(std::size_t b, std::size_t i, std::size_t c, std::size_t j) const {
        return data_[index(b, i, c, j)];
    }
    double& operator()(std::size_t b, std::size_t i, std::size_t c, std::size_t j) {
        return data_[index(b, i, c, j)];
    }

    /// Contiguous [channels, patch_len] block of one patch.
    std::span<const double> patch(std::size_t b, std::size_t i) const {
        const std::size_t n = channels_ * geometry_.patch_len;
        return {data_.data() + (b * num_patches_ + i) * n, n};
    }
    std::span<double> patch(std::size_t b, std::size_t i) {
        const std::size_t n = channels_ * geometry_.patch_len;
        return {data_.data() + (b * num_patches_ + i) * n, n};
    }

    const std::vector<double>& values() const { return data_; }

private:
    std::size_t batch_;
    std::size_t channels_;
    std::size_t num_patches_;
    PatchGeometry geometry_;
    std::vector<double> data_;
};

/// Per-time-index overlap counts K_tau for a (T, p, s) geometry.
struct CoverageProfile {
    std::vector<std::uint32_t> counts;
    bool has_uncovered = false;
};

/// Extract overlapping patches: output[b,i,c,j] == x[b, i*stride + j, c].
/// Throws on invalid geometry (patch_len > length or stride == 0).
PatchTensor unfold(const SeriesBatch& x, std::size_t patch_len, std::size_t stride);

/// Count, for each time index, how many patch windows contain it.
CoverageProfile coverage(std::size_t length, std::size_t patch_len, std::size_t stride);

/// Overlap-average reconstruction: each output value is the mean of the
/// covering patches' entries, accumulated in ascending patch order and
/// divided once by the coverage count. Throws if any index is uncovered.
SeriesBatch reconstruct(const PatchTensor& patches);

/// As above, but indices with zero coverage (the tail left by a stride that
/// does not divide T - p) are copied verbatim from `passthrough`.
SeriesBatch reconstruct(const PatchTensor& patches, const SeriesBatch& passthrough);

} // namespace tps

#endif // TPS_PATCHING_HPP
