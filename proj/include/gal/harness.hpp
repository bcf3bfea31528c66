#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gal/data.hpp"
#include "gal/gp.hpp"
#include "gal/rng.hpp"
#include "gal/selection.hpp"

namespace gal {

enum class Strategy {
    random,
    entropy,
    kmeanspp,
    coreset,
    cod,
    maximin,
    rbmal,
    posterior_uncertainty,
    gal_svm,
    gal_mlp,
    gal_gp,
};

Strategy parse_strategy(const std::string& name);
std::string strategy_name(Strategy s);
std::vector<std::string> strategy_vocabulary();

enum class ClassifierKind { svm, gp };
enum class SelectionMode { greedy, topb };

struct ScheduleStage {
    int cycles = 0;
    int budget = 0;
};

struct ExperimentConfig {
    // Data source: the toy generator (re-seeded per run) or a CSV corpus.
    bool use_toy = true;
    ToyConfig toy;
    std::string csv_path;

    // Initial labels: query positives plus optional seeded negatives.
    // Negative values fall back to the toy defaults.
    int n_query_pos = -1;
    int n_seed_neg = -1;

    Strategy strategy = Strategy::random;
    ClassifierKind classifier = ClassifierKind::svm;
    SelectionMode selection = SelectionMode::greedy;
    std::vector<ScheduleStage> schedule{{10, 3}};
    int K = -1;  // candidate pool size per cycle; <= 0 means the whole pool

    double c_reg = 1.0;
    bool include_bias = true;
    double gamma = 0.0;  // <= 0 selects the median-distance heuristic
    double alpha = 1.0;
    double jitter = 1e-6;
    MlpOptions mlp;

    double nauc_lo = -1.0;  // < 0 means the curve's own extent
    double nauc_hi = -1.0;

    std::vector<std::uint64_t> seeds{0};

    int total_cycles() const;
    int budget_at(int cycle) const;
    void validate() const;
};

struct CycleRecord {
    int cycle = 0;
    int n_labeled = 0;
    double map = 0.0;
    std::vector<int> batch_ids;
    std::vector<int> pseudo_correct;  // 1/0 per batch item; gal-svm/gal-mlp only
    double wall_s = 0.0;
};

struct LearningCurve {
    std::vector<CycleRecord> records;
    double normalized_auc = 0.0;
};

// Ground-truth labels for the requested ids (the perfect simulated annotator).
std::vector<int> simulate_oracle(const std::vector<int>& ids,
                                 const Dataset& data);

// AP over an already-ranked relevance sequence (+1 relevant, -1 not);
// zero relevant items yields 0 by convention.
double average_precision(const std::vector<int>& ranked_relevance);

// Trapezoidal area of mAP over labeled count within [lo, hi], divided by the
// covered width; lo/hi < 0 default to the curve extent.
double normalized_auc(const std::vector<CycleRecord>& records, double lo = -1.0,
                      double hi = -1.0);

struct Diagnostics {
    double uncertainty = 0.0;  // mean entropy of the batch under model_pre
    double diversity = 0.0;    // mean pairwise L2 distance within the batch
    double theta_gap = 0.0;    // |theta(model_post) - theta(model_all)|
};

Diagnostics selection_diagnostics(const Dataset& data,
                                  const std::vector<int>& batch,
                                  const ParametricModel& model_pre,
                                  const ParametricModel& model_post,
                                  const ParametricModel& model_all);

// Cumulative accuracy of all pseudo-label flags in the curve; empty when the
// strategy produced none.
std::optional<double> pseudo_label_accuracy(const LearningCurve& curve);

// Expected batch pseudo-label quality: (1/B) sum_{i=1..B} p^i.
double normalized_pseudo_prob(double p, int B);

struct RuntimeTrend {
    Vec coeffs;  // cubic fit, ascending powers
    double r2 = 0.0;
};

RuntimeTrend runtime_trend(const std::vector<double>& seconds);

// One full simulated retrieval session; deterministic given (config, seed).
LearningCurve run_al_experiment(const ExperimentConfig& cfg,
                                std::uint64_t seed);

// Retrieval model shared by the harness and the CLI.
std::unique_ptr<ParametricModel> fit_retrieval_model(
    const ExperimentConfig& cfg, const Dataset& data, const LabeledSet& labeled,
    double gamma);

// Corpus, initial labels (query positives plus seeded negatives), query ids
// and resolved kernel length scale for one run.
struct RunInit {
    Dataset data;
    LabeledSet labeled;
    std::vector<int> queries;
    double gamma = 1.0;
};

RunInit initialize_run(const ExperimentConfig& cfg, std::uint64_t seed);

// One batch under cfg.strategy. sel_rng carries the run's selection
// randomness (random strategy); run_seed and cycle derive the k-means++
// seeding and per-cycle MLP initialization; prev_model feeds cod.
BatchSelection select_batch(const ExperimentConfig& cfg, const Dataset& data,
                            const LabeledSet& labeled,
                            const ParametricModel& model,
                            const std::vector<int>& candidates, int B,
                            int cycle, std::uint64_t run_seed, Rng& sel_rng,
                            double gamma,
                            const ParametricModel* prev_model = nullptr);

}  // namespace gal
