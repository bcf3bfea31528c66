#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gal/rng.hpp"
#include "gal/types.hpp"

namespace gal {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Random GP geometry used by the greedy/submodularity property checks.
struct GpInstance {
    Mat X_base;   // already-labeled geometry (may be empty)
    Mat X_cand;   // candidate pool, doubles as the fixed objective pool
    double gamma = 1.0;
    double alpha = 1.0;
};

GpInstance random_gp_instance(Rng& rng, int max_pool = 12, int max_base = 3);

// Objective value of selecting `subset` (indices into inst.X_cand).
double instance_objective(const GpInstance& inst,
                          const std::vector<int>& subset);

// Greedy subset of size B under the instance objective (ties to lower index).
std::vector<int> instance_greedy(const GpInstance& inst, int B);

std::vector<CheckResult> verify_gp(std::uint64_t seed = 0);
std::vector<CheckResult> verify_greedy(std::uint64_t seed = 0);
std::vector<CheckResult> verify_classifiers(std::uint64_t seed = 0);
std::vector<CheckResult> verify_metrics();

// Scope "all" concatenates every suite.
std::vector<CheckResult> run_verify_scope(const std::string& scope);

}  // namespace gal
