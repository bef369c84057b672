#ifndef TPS_SYNTH_HPP
#define TPS_SYNTH_HPP

#include <cstdint>
#include <string>

#include "tps/series.hpp"

namespace tps {

/// Parameters for the synthetic benchmark-shaped series generator. Defaults
/// mimic an hourly electricity-transformer file: seven channels, two years
/// of rows, slow level drift dominating daily and weekly cycles.
struct SynthSpec {
    std::size_t rows = 17420;
    std::size_t channels = 7;
    std::uint64_t seed = 1;
};

/// Deterministic surrogate series (B = 1) with strong low-frequency level
/// movement, daily/weekly seasonality, and mild autocorrelated noise.
SeriesBatch make_synthetic_series(const SynthSpec& spec);

/// Write the surrogate as a CSV with a `date` column and channel headers
/// matching the hourly transformer-benchmark layout when channels == 7.
void write_synthetic_csv(const std::string& path, const SynthSpec& spec);

} // namespace tps

#endif // TPS_SYNTH_HPP
