#ifndef TPS_TOOLS_COMMANDS_HPP
#define TPS_TOOLS_COMMANDS_HPP

#include <string>

#include "options.hpp"

namespace tps::cli {

struct AugmentArgs {
    DataOptions data;
    AugOptions aug;
    std::size_t batch_size = 64;
    std::string out_path;
    std::string format = "csv";
};

struct ReportArgs {
    // Either an augmented file produced by `tps augment` ...
    std::string augmented_path;
    // ... or a dataset plus augmentation config to generate pairs in memory.
    DataOptions data;
    AugOptions aug;
    std::size_t windows = 256; ///< evenly spaced window cap; 0 = all
    std::string out_path;      ///< optional JSON report
};

int run_augment(const AugmentArgs& args);
int run_report(const ReportArgs& args);

} // namespace tps::cli

#endif // TPS_TOOLS_COMMANDS_HPP
