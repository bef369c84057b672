#ifndef TPS_TOOLS_SWEEP_HPP
#define TPS_TOOLS_SWEEP_HPP

#include <string>
#include <vector>

#include "options.hpp"

namespace tps::cli {

struct SweepTuple {
    std::size_t patch_len;
    std::size_t stride;
    double alpha;
};

struct SweepArgs {
    DataOptions data;
    AugOptions aug;          ///< variant/level/seed shared by every tuple
    std::string grid_file;   ///< empty = built-in default grid
    std::string scorer = "ridge";
    std::size_t batch_size = 64;
    std::string out_path;      ///< optional ranking JSON
    std::string apply_out;     ///< optional: augment with the winner into this file
};

/// The documented default candidate grid (20 tuples drawn from the published
/// per-parameter candidate lists).
std::vector<SweepTuple> default_grid();

/// Parse "p,s,alpha" lines; '#' starts a comment.
std::vector<SweepTuple> parse_grid_file(const std::string& path);

int run_sweep(const SweepArgs& args);

} // namespace tps::cli

#endif // TPS_TOOLS_SWEEP_HPP
