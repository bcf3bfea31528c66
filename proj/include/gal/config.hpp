#pragma once

#include <string>
#include <vector>

#include "gal/harness.hpp"

namespace gal {

// Experiment configs spanning several strategies; cmd_run fans out over
// (strategy, seed).
struct RunSpec {
    ExperimentConfig base;
    std::vector<Strategy> strategies;
};

// Flat key = value format, '#' comments. Schedules use "(cycles,budget)"
// stages: "(10,3),(20,7)". Seeds accept "0,1,2" or "0..9". K accepts "all".
RunSpec parse_config_text(const std::string& text);
RunSpec parse_config_file(const std::string& path);

std::vector<ScheduleStage> parse_schedule(const std::string& text);

}  // namespace gal
