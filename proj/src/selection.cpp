#include "gal/selection.hpp"

#include <algorithm>
#include <limits>

namespace gal {

namespace {

constexpr double kTieTol = 1e-10;

std::vector<int> unlabeled_ids(const LabeledSet& labeled, const Dataset& data) {
    std::vector<int> out;
    out.reserve(data.n());
    for (int id : data.ids) {
        if (!labeled.contains(id)) out.push_back(id);
    }
    return out;
}

}  // namespace

CandidatePool build_candidate_pool(const ParametricModel& model,
                                   const LabeledSet& labeled,
                                   const Dataset& data, int K, int cycle,
                                   const std::vector<int>& query_ids) {
    const std::vector<int> pool = unlabeled_ids(labeled, data);
    if (pool.empty()) throw DataError("build_candidate_pool: no unlabeled ids");

    CandidatePool out;
    int k = K <= 0 ? static_cast<int>(pool.size()) : K;
    if (k > static_cast<int>(pool.size())) {
        k = static_cast<int>(pool.size());
        out.clipped = true;
    }

    if (cycle == 0) {
        // Bootstrap ranking by cosine similarity to the query vectors.
        const int n_non_query = data.n() - static_cast<int>(query_ids.size());
        const std::vector<int> ranked = cosine_topk(query_ids, data, n_non_query);
        for (int id : ranked) {
            if (labeled.contains(id)) continue;
            out.ids.push_back(id);
            if (static_cast<int>(out.ids.size()) == k) break;
        }
        return out;
    }

    std::vector<std::pair<double, int>> scored;  // (-score, id)
    scored.reserve(pool.size());
    for (int id : pool) {
        scored.emplace_back(-model.score(data.vector_of(id)), id);
    }
    std::sort(scored.begin(), scored.end());
    out.ids.reserve(k);
    for (int i = 0; i < k; ++i) out.ids.push_back(scored[i].second);
    return out;
}

BatchSelection gal_greedy(const std::vector<int>& candidates, int B,
                          const ImpactFn& impact_fn, LabeledSet working) {
    BatchSelection sel;
    std::vector<int> remaining = candidates;
    const int steps = std::min<int>(B, static_cast<int>(candidates.size()));
    for (int step = 0; step < steps; ++step) {
        const std::vector<ImpactResult> impacts = impact_fn(working, remaining);
        int best = -1;
        double best_impact = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < static_cast<int>(remaining.size()); ++i) {
            if (impacts[i].impact > best_impact + kTieTol ||
                (std::abs(impacts[i].impact - best_impact) <= kTieTol &&
                 (best == -1 || remaining[i] < remaining[best]))) {
                best_impact = impacts[i].impact;
                best = i;
            }
        }
        sel.ids.push_back(remaining[best]);
        sel.pseudo_labels.push_back(impacts[best].pseudo_label);
        sel.impacts.push_back(impacts[best].impact);
        working.add(remaining[best], impacts[best].pseudo_label,
                    /*provisional=*/true);
        remaining.erase(remaining.begin() + best);
    }
    working.drop_provisional();
    return sel;
}

BatchSelection gal_batch_topB(const std::vector<int>& candidates, int B,
                              const ImpactFn& impact_fn,
                              const LabeledSet& labeled) {
    const std::vector<ImpactResult> impacts = impact_fn(labeled, candidates);
    std::vector<int> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (impacts[a].impact != impacts[b].impact) {
            return impacts[a].impact > impacts[b].impact;
        }
        return candidates[a] < candidates[b];
    });

    BatchSelection sel;
    const int take = std::min<int>(B, static_cast<int>(candidates.size()));
    for (int i = 0; i < take; ++i) {
        sel.ids.push_back(candidates[order[i]]);
        sel.pseudo_labels.push_back(impacts[order[i]].pseudo_label);
        sel.impacts.push_back(impacts[order[i]].impact);
    }
    return sel;
}

namespace {

void subsets_rec(const std::vector<int>& candidates, int B, int start,
                 std::vector<int>& cur, const SetValueFn& value_fn,
                 OptimalBatch& best, bool& has_best) {
    if (static_cast<int>(cur.size()) == B) {
        const double v = value_fn(cur);
        if (!has_best || v > best.value) {
            best.ids = cur;
            best.value = v;
            has_best = true;
        }
        return;
    }
    const int need = B - static_cast<int>(cur.size());
    for (int i = start; i + need <= static_cast<int>(candidates.size()); ++i) {
        cur.push_back(candidates[i]);
        subsets_rec(candidates, B, i + 1, cur, value_fn, best, has_best);
        cur.pop_back();
    }
}

}  // namespace

OptimalBatch brute_force_optimal_batch(const std::vector<int>& candidates,
                                       int B, const SetValueFn& value_fn) {
    if (B <= 0 || B > static_cast<int>(candidates.size())) {
        throw ConfigError("brute_force_optimal_batch: invalid B");
    }
    OptimalBatch best;
    bool has_best = false;
    std::vector<int> cur;
    subsets_rec(candidates, B, 0, cur, value_fn, best, has_best);
    return best;
}

}  // namespace gal
