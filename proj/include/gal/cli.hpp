#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace gal {

inline constexpr const char* kToolVersion = "0.1.0";

// Table-1-style toy study: generates the toy corpus, runs one selection
// batch for each of {random, kmeanspp, entropy, gal-svm}, and writes
// diagnostics plus decision-boundary samples under out_dir.
int cmd_toy(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override);

// Full experiment fan-out over (strategy, seed); writes the manifest before
// any run, then per-run curve files and a single summary.json.
int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override);

// Property suites; prints one line per check and returns nonzero on failure.
int cmd_verify(const std::string& scope);

// Aggregates summary.json into a per-strategy comparison table
// (text to stdout, CSV next to the summary).
int cmd_report(const std::string& out_dir);

}  // namespace gal
