#pragma once

#include <functional>
#include <vector>

#include "gal/acquisition.hpp"
#include "gal/data.hpp"

namespace gal {

struct CandidatePool {
    std::vector<int> ids;
    bool clipped = false;  // requested K exceeded the available pool
};

// Cycle 0 ranks the unlabeled pool by cosine similarity to the queries;
// later cycles take the top K unlabeled ids by model score (ties to lower
// id). K <= 0 selects the whole pool.
CandidatePool build_candidate_pool(const ParametricModel& model,
                                   const LabeledSet& labeled,
                                   const Dataset& data, int K, int cycle,
                                   const std::vector<int>& query_ids);

struct BatchSelection {
    std::vector<int> ids;
    std::vector<int> pseudo_labels;  // parallel to ids
    std::vector<double> impacts;     // parallel to ids
};

// Computes impact results for `remaining` candidates given the current
// working labeled set (true labels plus provisional pseudo entries). The
// callback refits its baseline model once per invocation.
using ImpactFn = std::function<std::vector<ImpactResult>(
    const LabeledSet& working, const std::vector<int>& remaining)>;

// Greedy batch construction: B rounds of argmax impact (ties to lower id),
// each followed by inserting the winner with its pseudo-label as a
// provisional entry. Provisional entries are dropped before returning.
BatchSelection gal_greedy(const std::vector<int>& candidates, int B,
                          const ImpactFn& impact_fn, LabeledSet working);

// Non-adaptive variant: impacts against the initial set only, top B taken
// at once (ties to lower id).
BatchSelection gal_batch_topB(const std::vector<int>& candidates, int B,
                              const ImpactFn& impact_fn,
                              const LabeledSet& labeled);

using SetValueFn = std::function<double(const std::vector<int>&)>;

struct OptimalBatch {
    std::vector<int> ids;
    double value = 0.0;
};

// Exhaustive search over all size-B subsets of the candidates; intended for
// small verification instances only.
OptimalBatch brute_force_optimal_batch(const std::vector<int>& candidates,
                                       int B, const SetValueFn& value_fn);

}  // namespace gal
