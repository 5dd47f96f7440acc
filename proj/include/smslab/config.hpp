#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smslab/experiments.hpp"

namespace smslab {

enum class Campaign { Energy, Moderateness, Uniqueness, Consistency, Duhamel, All };

Campaign campaign_from_name(const std::string& name);
std::string campaign_name(Campaign c);

/// Fully materialized experiment description parsed from a TOML config.
struct ExperimentConfig {
    // [grid]
    int d = 1;
    double half_width = 1.0;
    int n = 256;
    // [coefficient] / [data]
    std::string coefficient_text;
    std::string data_text = "gaussian(center=0, a=1)";
    // [mollifier]
    std::string variant = "bump";
    std::string second_variant;
    bool mollify_data = true;
    // [ladder]
    double eps0 = 0.5;
    double ratio = 0.5;
    int count = 5;
    // [stepper]
    std::optional<double> dt;  ///< empty = "auto"
    double T = 1.0;
    double tolerance = 1e-10;
    int snapshot_stride = 0;
    std::string mean = "arithmetic";
    // [campaign]
    Campaign campaign = Campaign::Energy;
    std::optional<double> epsilon;  ///< energy/duhamel; defaults to the ladder minimum
    int refinement = 2;
    int halvings = 3;
    bool fit_h2 = false;
    // [output]
    std::string output_dir = "out";
    bool gnuplot = false;

    Problem to_problem() const;
    double single_epsilon() const;
};

/// Parse + validate; throws std::runtime_error with file:line context for
/// syntax errors and named-key messages for semantic ones.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

/// Canonical TOML echo with every default materialized; parsed again it
/// yields an identical config.
std::string emit_config(const ExperimentConfig& cfg);

}  // namespace smslab
