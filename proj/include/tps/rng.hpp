#ifndef TPS_RNG_HPP
#define TPS_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace tps {

namespace detail {
// SplitMix64 finalizer (Steele, Lea, Flood 2014). Pure 64-bit integer
// arithmetic, identical output on every platform.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}
} // namespace detail

/// Derive an independent 64-bit seed from a master seed and a domain tag.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
    return detail::mix64(detail::mix64(master) ^ (tag * 0xD1B54A32D192ED03ull));
}

/// FNV-1a over raw bytes; used to key sample-level substreams by content.
std::uint64_t hash_bytes(const void* data, std::size_t size);

/**
 * Deterministic counter-based random stream keyed by (master seed, substream
 * id). Two streams with the same key yield the same sequence on every
 * platform, so per-batch-element work can run in any order or in parallel
 * without affecting results.
 */
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t substream)
        : state_(derive_seed(master_seed, substream)), counter_(0) {}

    std::uint64_t next() {
        return detail::mix64(state_ + ++counter_ * 0x9E3779B97F4A7C15ull);
    }

    /// Uniform draw in [0, n), unbiased via rejection sampling. n >= 1.
    std::uint64_t below(std::uint64_t n);

    /// Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform random permutation of {0, ..., n-1} by Fisher-Yates.
    std::vector<std::size_t> permutation(std::size_t n);

    /// Uniform random subset of size k from {0, ..., n-1}, without
    /// replacement (partial Fisher-Yates). Result order is the draw order.
    std::vector<std::size_t> subset(std::size_t n, std::size_t k);

private:
    std::uint64_t state_;
    std::uint64_t counter_;
};

} // namespace tps

#endif // TPS_RNG_HPP
