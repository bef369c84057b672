#include "tps/patching.hpp"

#include <stdexcept>
#include <string>

namespace tps {

namespace {
void check_geometry(std::size_t length, std::size_t patch_len, std::size_t stride) {
    if (patch_len == 0)
        throw std::invalid_argument("patch geometry: patch length must be >= 1");
    if (stride == 0)
        throw std::invalid_argument("patch geometry: stride must be >= 1");
    if (patch_len > length)
        throw std::invalid_argument("patch geometry: patch length " +
                                    std::to_string(patch_len) +
                                    " exceeds series length " + std::to_string(length));
}
} // namespace

PatchTensor::PatchTensor(std::size_t batch, std::size_t channels, PatchGeometry geometry)
    : batch_(batch), channels_(channels), geometry_(geometry) {
    check_geometry(geometry.source_len, geometry.patch_len, geometry.stride);
    num_patches_ = geometry_.num_patches();
    data_.assign(batch_ * num_patches_ * channels_ * geometry_.patch_len, 0.0);
}

PatchTensor unfold(const SeriesBatch& x, std::size_t patch_len, std::size_t stride) {
    check_geometry(x.length(), patch_len, stride);

    const PatchGeometry geom{patch_len, stride, x.length()};
    PatchTensor out(x.batch(), x.channels(), geom);

    const std::size_t B = x.batch();
    const std::size_t C = x.channels();
    const std::size_t Np = geom.num_patches();
    for (std::size_t b = 0; b < B; ++b)
        for (std::size_t i = 0; i < Np; ++i)
            for (std::size_t c = 0; c < C; ++c)
                for (std::size_t j = 0; j < patch_len; ++j)
                    out(b, i, c, j) = x(b, i * stride + j, c);
    return out;
}

CoverageProfile coverage(std::size_t length, std::size_t patch_len, std::size_t stride) {
    check_geometry(length, patch_len, stride);

    CoverageProfile profile;
    profile.counts.assign(length, 0);
    const std::size_t num = PatchGeometry{patch_len, stride, length}.num_patches();
    for (std::size_t i = 0; i < num; ++i)
        for (std::size_t j = 0; j < patch_len; ++j)
            ++profile.counts[i * stride + j];
    for (std::uint32_t k : profile.counts)
        if (k == 0) { profile.has_uncovered = true; break; }
    return profile;
}

namespace {
SeriesBatch reconstruct_impl(const PatchTensor& patches, const SeriesBatch* passthrough) {
    const PatchGeometry& geom = patches.geometry();
    const std::size_t B = patches.batch();
    const std::size_t C = patches.channels();
    const std::size_t T = geom.source_len;
    const std::size_t Np = geom.num_patches();

    if (passthrough) {
        if (passthrough->batch() != B || passthrough->length() != T ||
            passthrough->channels() != C)
            throw std::invalid_argument(
                "reconstruct: pass-through shape mismatch with patch geometry");
    }

    const CoverageProfile profile = coverage(T, geom.patch_len, geom.stride);
    if (profile.has_uncovered && !passthrough)
        throw std::invalid_argument(
            "reconstruct: geometry leaves uncovered indices (T=" + std::to_string(T) +
            ", p=" + std::to_string(geom.patch_len) + ", s=" +
            std::to_string(geom.stride) + ") and no pass-through source was given");

    SeriesBatch out(B, T, C);
    for (std::size_t b = 0; b < B; ++b) {
        // Fixed accumulation order: ascending patch index, one division at
        // the end, so results do not depend on scheduling.
        for (std::size_t i = 0; i < Np; ++i)
            for (std::size_t c = 0; c < C; ++c)
                for (std::size_t j = 0; j < geom.patch_len; ++j)
                    out(b, i * geom.stride + j, c) += patches(b, i, c, j);
        for (std::size_t t = 0; t < T; ++t) {
            const std::uint32_t k = profile.counts[t];
            for (std::size_t c = 0; c < C; ++c) {
                if (k == 0)
                    out(b, t, c) = (*passthrough)(b, t, c);
                else
                    out(b, t, c) /= static_cast<double>(k);
            }
        }
    }
    return out;
}
} // namespace

SeriesBatch reconstruct(const PatchTensor& patches) {
    return reconstruct_impl(patches, nullptr);
}

SeriesBatch reconstruct(const PatchTensor& patches, const SeriesBatch& passthrough) {
    return reconstruct_impl(patches, &passthrough);
}

} // namespace tps
