#ifndef TPS_TOOLS_SELFTEST_HPP
#define TPS_TOOLS_SELFTEST_HPP

#include <cstdint>

namespace tps::cli {

/// Run the built-in oracle suite (round trips, brute-force recomputations,
/// determinism and uniformity checks). Prints one line per check and returns
/// 0 when everything passes, 3 otherwise.
int run_selftest(std::uint64_t seed);

} // namespace tps::cli

#endif // TPS_TOOLS_SELFTEST_HPP
