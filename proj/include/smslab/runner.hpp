#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "smslab/config.hpp"

namespace smslab {

struct RunOptions {
    std::optional<Campaign> campaign_override;
    std::optional<std::string> output_dir_override;
    int jobs = 0;  ///< 0 = hardware concurrency
    int verbosity = 0;
};

/// Execute the selected campaigns: write one CSV + JSON metadata sidecar
/// (+ optional gnuplot script) per campaign into the output directory and
/// print a one-line summary each. Returns 0 on success, 1 when a hard
/// invariant (drift bound, Hermitian check) fails or a campaign aborts.
int run(const ExperimentConfig& cfg, const RunOptions& opt, std::ostream& log);

}  // namespace smslab
