#include "gal/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <unordered_set>

#include "gal/rng.hpp"

namespace gal {

namespace {

const std::pair<const char*, Strategy> kStrategies[] = {
    {"random", Strategy::random},
    {"entropy", Strategy::entropy},
    {"kmeanspp", Strategy::kmeanspp},
    {"coreset", Strategy::coreset},
    {"cod", Strategy::cod},
    {"maximin", Strategy::maximin},
    {"rbmal", Strategy::rbmal},
    {"posterior-uncertainty", Strategy::posterior_uncertainty},
    {"gal-svm", Strategy::gal_svm},
    {"gal-mlp", Strategy::gal_mlp},
    {"gal-gp", Strategy::gal_gp},
};

}  // namespace

Strategy parse_strategy(const std::string& name) {
    for (const auto& [key, value] : kStrategies) {
        if (name == key) return value;
    }
    std::string valid;
    for (const auto& [key, value] : kStrategies) {
        if (!valid.empty()) valid += ", ";
        valid += key;
    }
    throw ConfigError("unknown strategy '" + name + "' (valid: " + valid + ")");
}

std::string strategy_name(Strategy s) {
    for (const auto& [key, value] : kStrategies) {
        if (value == s) return key;
    }
    return "?";
}

std::vector<std::string> strategy_vocabulary() {
    std::vector<std::string> out;
    for (const auto& [key, value] : kStrategies) out.emplace_back(key);
    return out;
}

int ExperimentConfig::total_cycles() const {
    int total = 0;
    for (const auto& s : schedule) total += s.cycles;
    return total;
}

int ExperimentConfig::budget_at(int cycle) const {
    int at = 0;
    for (const auto& s : schedule) {
        at += s.cycles;
        if (cycle < at) return s.budget;
    }
    return schedule.empty() ? 0 : schedule.back().budget;
}

void ExperimentConfig::validate() const {
    if (seeds.empty()) throw ConfigError("seeds must be non-empty");
    if (schedule.empty()) throw ConfigError("schedule must be non-empty");
    for (const auto& s : schedule) {
        if (s.cycles < 0 || s.budget < 1) {
            throw ConfigError("schedule stages need cycles >= 0 and budget >= 1");
        }
    }
    const bool needs_gp = strategy == Strategy::gal_gp ||
                          strategy == Strategy::posterior_uncertainty;
    if (needs_gp && classifier != ClassifierKind::gp) {
        throw ConfigError("strategy " + strategy_name(strategy) +
                          " requires classifier = gp");
    }
    if (!use_toy && csv_path.empty()) {
        throw ConfigError("dataset source missing: need toy config or csv path");
    }
    if (!use_toy && n_query_pos < 1) {
        throw ConfigError("csv datasets need n_query_pos >= 1");
    }
    if (c_reg <= 0.0) throw ConfigError("c_reg must be positive");
    if (alpha < 0.0) throw ConfigError("alpha must be non-negative");
}

std::vector<int> simulate_oracle(const std::vector<int>& ids,
                                 const Dataset& data) {
    std::vector<int> labels;
    labels.reserve(ids.size());
    for (int id : ids) labels.push_back(data.truth_of(id));
    return labels;
}

double average_precision(const std::vector<int>& ranked_relevance) {
    int n_rel = 0;
    for (int r : ranked_relevance) {
        if (r == 1) ++n_rel;
    }
    if (n_rel == 0) return 0.0;
    int hits = 0;
    double sum = 0.0;
    for (std::size_t k = 0; k < ranked_relevance.size(); ++k) {
        if (ranked_relevance[k] == 1) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(k + 1);
        }
    }
    return sum / n_rel;
}

double normalized_auc(const std::vector<CycleRecord>& records, double lo,
                      double hi) {
    if (records.empty()) throw DataError("normalized_auc: empty curve");
    const double n0 = records.front().n_labeled;
    const double n1 = records.back().n_labeled;
    double a = lo < 0.0 ? n0 : lo;
    double b = hi < 0.0 ? n1 : hi;
    if (a > b) throw ConfigError("normalized_auc: range_lo exceeds range_hi");

    // Clip to the curve extent; the intersection must be non-empty.
    const double lo_eff = std::max(a, n0);
    const double hi_eff = std::min(b, n1);
    if (lo_eff > hi_eff) {
        throw ConfigError("normalized_auc: range does not intersect the curve");
    }

    auto value_at = [&](double x) {
        for (std::size_t i = 0; i + 1 < records.size(); ++i) {
            const double xa = records[i].n_labeled;
            const double xb = records[i + 1].n_labeled;
            if (x >= xa && x <= xb) {
                if (xb == xa) return records[i].map;
                const double t = (x - xa) / (xb - xa);
                return records[i].map + t * (records[i + 1].map - records[i].map);
            }
        }
        return x <= n0 ? records.front().map : records.back().map;
    };

    if (hi_eff == lo_eff) return value_at(lo_eff);

    double area = 0.0;
    double prev_x = lo_eff;
    double prev_y = value_at(lo_eff);
    for (const auto& rec : records) {
        const double x = rec.n_labeled;
        if (x <= lo_eff || x > hi_eff) continue;
        area += 0.5 * (prev_y + rec.map) * (x - prev_x);
        prev_x = x;
        prev_y = rec.map;
    }
    if (prev_x < hi_eff) {
        const double y = value_at(hi_eff);
        area += 0.5 * (prev_y + y) * (hi_eff - prev_x);
    }
    return area / (hi_eff - lo_eff);
}

Diagnostics selection_diagnostics(const Dataset& data,
                                  const std::vector<int>& batch,
                                  const ParametricModel& model_pre,
                                  const ParametricModel& model_post,
                                  const ParametricModel& model_all) {
    Diagnostics d;
    if (batch.empty()) throw DataError("selection_diagnostics: empty batch");
    double h = 0.0;
    for (int id : batch) {
        h += entropy_score(model_pre.predict_proba(data.vector_of(id)));
    }
    d.uncertainty = h / batch.size();

    if (batch.size() >= 2) {
        double sum = 0.0;
        int pairs = 0;
        for (std::size_t i = 0; i < batch.size(); ++i) {
            for (std::size_t j = i + 1; j < batch.size(); ++j) {
                sum += (data.vector_of(batch[i]) - data.vector_of(batch[j])).norm();
                ++pairs;
            }
        }
        d.diversity = sum / pairs;
    }

    d.theta_gap = (model_post.theta() - model_all.theta()).norm();
    return d;
}

std::optional<double> pseudo_label_accuracy(const LearningCurve& curve) {
    int total = 0;
    int correct = 0;
    for (const auto& rec : curve.records) {
        for (int flag : rec.pseudo_correct) {
            ++total;
            correct += flag;
        }
    }
    if (total == 0) return std::nullopt;
    return static_cast<double>(correct) / total;
}

double normalized_pseudo_prob(double p, int B) {
    if (p < 0.0 || p > 1.0) throw ConfigError("normalized_pseudo_prob: p outside [0,1]");
    if (B < 1) throw ConfigError("normalized_pseudo_prob: B must be >= 1");
    double sum = 0.0;
    double pk = 1.0;
    for (int i = 1; i <= B; ++i) {
        pk *= p;
        sum += pk;
    }
    return sum / B;
}

RuntimeTrend runtime_trend(const std::vector<double>& seconds) {
    const int n = static_cast<int>(seconds.size());
    if (n < 4) throw ConfigError("runtime_trend: need at least 4 samples");
    Mat A(n, 4);
    Vec y(n);
    for (int i = 0; i < n; ++i) {
        const double x = i;
        A(i, 0) = 1.0;
        A(i, 1) = x;
        A(i, 2) = x * x;
        A(i, 3) = x * x * x;
        y[i] = seconds[i];
    }
    RuntimeTrend t;
    t.coeffs = A.colPivHouseholderQr().solve(y);
    const Vec resid = y - A * t.coeffs;
    const double ss_res = resid.squaredNorm();
    const double mean = y.mean();
    const double ss_tot = (y.array() - mean).square().sum();
    t.r2 = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return t;
}

std::unique_ptr<ParametricModel> fit_retrieval_model(
    const ExperimentConfig& cfg, const Dataset& data, const LabeledSet& labeled,
    double gamma) {
    if (cfg.classifier == ClassifierKind::svm) {
        SvmOptions opts;
        opts.c_reg = cfg.c_reg;
        return std::make_unique<SvmModel>(
            fit_svm(labeled.features(data), labeled.labels(), opts));
    }
    return std::make_unique<GpModel>(fit_gp(labeled.features(data),
                                            labeled.labels(), gamma,
                                            cfg.jitter));
}

namespace {

std::vector<int> unlabeled_ids(const LabeledSet& labeled, const Dataset& data) {
    std::unordered_set<int> taken;
    for (const auto& e : labeled.entries) taken.insert(e.id);
    std::vector<int> out;
    out.reserve(data.n());
    for (int id : data.ids) {
        if (!taken.count(id)) out.push_back(id);
    }
    return out;
}

std::vector<int> rank_by_score(const ParametricModel& model,
                               const Dataset& data,
                               const std::vector<int>& pool) {
    std::vector<std::pair<double, int>> scored;
    scored.reserve(pool.size());
    for (int id : pool) scored.emplace_back(-model.score(data.vector_of(id)), id);
    std::sort(scored.begin(), scored.end());
    std::vector<int> out;
    out.reserve(pool.size());
    for (const auto& [neg, id] : scored) out.push_back(id);
    return out;
}

// Top-B candidate ids by a per-candidate score, ties to lower id.
std::vector<int> top_b(const std::vector<int>& candidates,
                       const std::vector<double>& scores, int B) {
    std::vector<int> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return candidates[a] < candidates[b];
    });
    std::vector<int> out;
    const int take = std::min<int>(B, static_cast<int>(candidates.size()));
    out.reserve(take);
    for (int i = 0; i < take; ++i) out.push_back(candidates[order[i]]);
    return out;
}

Mat rows_of(const Dataset& data, const std::vector<int>& ids) {
    Mat X(ids.size(), data.dim());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        X.row(i) = data.X.row(data.row_of(ids[i]));
    }
    return X;
}

}  // namespace

BatchSelection select_batch(const ExperimentConfig& cfg, const Dataset& data,
                            const LabeledSet& labeled,
                            const ParametricModel& model,
                            const std::vector<int>& candidates, int B,
                            int cycle, std::uint64_t run_seed, Rng& sel_rng,
                            double gamma, const ParametricModel* prev_model) {
    BatchSelection sel;

    switch (cfg.strategy) {
        case Strategy::random: {
            const int take = std::min<int>(B, candidates.size());
            for (int idx : sel_rng.sample_without_replacement(
                     static_cast<int>(candidates.size()), take)) {
                sel.ids.push_back(candidates[idx]);
            }
            return sel;
        }
        case Strategy::entropy: {
            std::vector<double> scores;
            scores.reserve(candidates.size());
            for (int id : candidates) {
                scores.push_back(entropy_score(model.predict_proba(data.vector_of(id))));
            }
            sel.ids = top_b(candidates, scores, B);
            return sel;
        }
        case Strategy::cod: {
            std::vector<double> scores;
            scores.reserve(candidates.size());
            for (int id : candidates) {
                const double p = model.predict_proba(data.vector_of(id));
                scores.push_back(prev_model
                                     ? cod_score(p, prev_model->predict_proba(
                                                        data.vector_of(id)))
                                     : entropy_score(p));
            }
            sel.ids = top_b(candidates, scores, B);
            return sel;
        }
        case Strategy::maximin: {
            const Mat X_l = labeled.features(data);
            const Vec y_l = labeled.labels();
            SvmOptions opts;
            opts.c_reg = cfg.c_reg;
            std::vector<double> scores;
            scores.reserve(candidates.size());
            for (int id : candidates) {
                scores.push_back(maximin_score(data.vector_of(id), X_l, y_l, opts,
                                               cfg.include_bias));
            }
            sel.ids = top_b(candidates, scores, B);
            return sel;
        }
        case Strategy::rbmal: {
            const Mat X_l = labeled.features(data);
            const int n_l = labeled.size();
            const int n_u = data.n() - n_l;
            std::vector<double> scores;
            scores.reserve(candidates.size());
            for (int id : candidates) {
                const Vec x = data.vector_of(id);
                scores.push_back(
                    rbmal_score(x, X_l, model.predict_proba(x), n_u, n_l));
            }
            sel.ids = top_b(candidates, scores, B);
            return sel;
        }
        case Strategy::posterior_uncertainty: {
            const auto* gp = dynamic_cast<const GpModel*>(&model);
            if (gp == nullptr) {
                throw ConfigError("posterior-uncertainty requires the gp classifier");
            }
            std::vector<double> scores;
            scores.reserve(candidates.size());
            for (int id : candidates) {
                const Vec x = data.vector_of(id);
                scores.push_back(
                    posterior_uncertainty_score(gp->score(x), gp->variance(x)));
            }
            sel.ids = top_b(candidates, scores, B);
            return sel;
        }
        case Strategy::kmeanspp:
        case Strategy::coreset: {
            const Mat X_c = rows_of(data, candidates);
            const auto mode = cfg.strategy == Strategy::kmeanspp
                                  ? DiversityMode::kmeanspp
                                  : DiversityMode::coreset;
            const int take = std::min<int>(B, candidates.size());
            const std::uint64_t seed = run_seed * 31 + cycle;
            for (int idx : diversity_select(X_c, take, mode, seed)) {
                sel.ids.push_back(candidates[idx]);
            }
            return sel;
        }
        case Strategy::gal_svm: {
            SvmOptions opts;
            opts.c_reg = cfg.c_reg;
            ImpactFn fn = [&](const LabeledSet& working,
                              const std::vector<int>& remaining) {
                const Mat X_l = working.features(data);
                const Vec y_l = working.labels();
                const SvmModel base = fit_svm(X_l, y_l, opts);
                std::vector<ImpactResult> out;
                out.reserve(remaining.size());
                for (int id : remaining) {
                    out.push_back(svm_impact(data.vector_of(id), X_l, y_l, base,
                                             opts, cfg.include_bias));
                }
                return out;
            };
            return cfg.selection == SelectionMode::greedy
                       ? gal_greedy(candidates, B, fn, labeled)
                       : gal_batch_topB(candidates, B, fn, labeled);
        }
        case Strategy::gal_mlp: {
            MlpOptions opts = cfg.mlp;
            opts.seed = run_seed * 31 + cycle;
            ImpactFn fn = [&, opts](const LabeledSet& working,
                                    const std::vector<int>& remaining) {
                const Mat X_l = working.features(data);
                const Vec y_l = working.labels();
                const MlpModel base = fit_mlp(X_l, y_l, opts);
                std::vector<ImpactResult> out;
                out.reserve(remaining.size());
                for (int id : remaining) {
                    out.push_back(
                        mlp_impact(data.vector_of(id), X_l, y_l, base, opts));
                }
                return out;
            };
            return cfg.selection == SelectionMode::greedy
                       ? gal_greedy(candidates, B, fn, labeled)
                       : gal_batch_topB(candidates, B, fn, labeled);
        }
        case Strategy::gal_gp: {
            // The candidate pool is frozen for the whole greedy pass.
            const Mat X_c = rows_of(data, candidates);
            const Mat empty(0, data.dim());
            ImpactFn fn = [&, X_c](const LabeledSet& working,
                                   const std::vector<int>& remaining) {
                const Mat X_base = working.features(data);
                std::vector<ImpactResult> out;
                out.reserve(remaining.size());
                for (int id : remaining) {
                    ImpactResult r;
                    r.impact = gp_impact(data.vector_of(id), X_base, empty, X_c,
                                         gamma, cfg.alpha, cfg.jitter);
                    r.f_minus = r.f_plus = r.impact;
                    out.push_back(r);
                }
                return out;
            };
            return cfg.selection == SelectionMode::greedy
                       ? gal_greedy(candidates, B, fn, labeled)
                       : gal_batch_topB(candidates, B, fn, labeled);
        }
    }
    throw ConfigError("unhandled strategy");
}

RunInit initialize_run(const ExperimentConfig& cfg, std::uint64_t seed) {
    RunInit init;
    if (cfg.use_toy) {
        ToyConfig tc = cfg.toy;
        tc.seed = seed;
        if (cfg.n_query_pos >= 0) tc.n_seed_pos = cfg.n_query_pos;
        if (cfg.n_seed_neg >= 0) tc.n_seed_neg = cfg.n_seed_neg;
        if (tc.n_seed_pos < 1) {
            throw ConfigError("need at least one query positive");
        }
        ToyResult toy = generate_gaussian_toy(tc);
        init.data = std::move(toy.dataset);
        init.labeled = std::move(toy.seed_labels);
    } else {
        init.data = load_dataset(cfg.csv_path);
        std::vector<int> pos, neg;
        for (int i = 0; i < init.data.n(); ++i) {
            (init.data.truth[i] == 1 ? pos : neg).push_back(init.data.ids[i]);
        }
        const int n_q = cfg.n_query_pos;
        const int n_n = std::max(cfg.n_seed_neg, 0);
        if (n_q > static_cast<int>(pos.size()) ||
            n_n > static_cast<int>(neg.size())) {
            throw ConfigError("seed label counts exceed class sizes");
        }
        Rng rng(seed);
        for (int idx : rng.sample_without_replacement(
                 static_cast<int>(pos.size()), n_q)) {
            init.labeled.add(pos[idx], 1);
        }
        for (int idx : rng.sample_without_replacement(
                 static_cast<int>(neg.size()), n_n)) {
            init.labeled.add(neg[idx], -1);
        }
    }
    for (const auto& e : init.labeled.entries) {
        if (e.label == 1) init.queries.push_back(e.id);
    }

    init.gamma = cfg.gamma;
    if (init.gamma <= 0.0) {
        init.gamma = median_pairwise_distance(
            rows_of(init.data, unlabeled_ids(init.labeled, init.data)));
    }
    return init;
}

LearningCurve run_al_experiment(const ExperimentConfig& cfg,
                                std::uint64_t seed) {
    cfg.validate();

    RunInit init = initialize_run(cfg, seed);
    const Dataset& data = init.data;
    LabeledSet& labeled = init.labeled;

    Rng sel_rng(seed ^ 0x9E3779B97F4A7C15ull);
    std::unique_ptr<ParametricModel> prev_model;

    LearningCurve curve;
    const int total = cfg.total_cycles();
    for (int t = 0; t <= total; ++t) {
        const auto t0 = std::chrono::steady_clock::now();
        auto model = fit_retrieval_model(cfg, data, labeled, init.gamma);

        const std::vector<int> pool = unlabeled_ids(labeled, data);
        CycleRecord rec;
        rec.cycle = t;
        rec.n_labeled = labeled.size();
        if (!pool.empty()) {
            std::vector<int> flags;
            flags.reserve(pool.size());
            for (int id : rank_by_score(*model, data, pool)) {
                flags.push_back(data.truth_of(id));
            }
            rec.map = average_precision(flags);
        }

        if (t == total || pool.empty()) {
            rec.wall_s = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
            curve.records.push_back(std::move(rec));
            break;
        }

        const CandidatePool cand =
            build_candidate_pool(*model, labeled, data, cfg.K, t, init.queries);
        const int B = cfg.budget_at(t);
        BatchSelection batch =
            select_batch(cfg, data, labeled, *model, cand.ids, B, t, seed,
                         sel_rng, init.gamma, prev_model.get());

        const std::vector<int> oracle = simulate_oracle(batch.ids, data);
        const bool has_pseudo = cfg.strategy == Strategy::gal_svm ||
                                cfg.strategy == Strategy::gal_mlp;
        for (std::size_t i = 0; i < batch.ids.size(); ++i) {
            labeled.add(batch.ids[i], oracle[i]);
            if (has_pseudo) {
                rec.pseudo_correct.push_back(
                    batch.pseudo_labels[i] == oracle[i] ? 1 : 0);
            }
        }
        rec.batch_ids = batch.ids;

        if (cfg.strategy == Strategy::cod) {
            prev_model = std::move(model);
        }
        rec.wall_s = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
        curve.records.push_back(std::move(rec));
    }

    curve.normalized_auc = normalized_auc(curve.records, cfg.nauc_lo, cfg.nauc_hi);
    return curve;
}

}  // namespace gal
