#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "gal/types.hpp"

namespace gal {

// Immutable corpus of feature vectors with hidden ground-truth relevance.
struct Dataset {
    Mat X;                    // n x d, one feature vector per row
    std::vector<int> truth;   // ground-truth relevance in {-1, +1}
    std::vector<int> ids;     // external ids, unique

    int n() const { return static_cast<int>(X.rows()); }
    int dim() const { return static_cast<int>(X.cols()); }

    int row_of(int id) const;
    Vec vector_of(int id) const { return X.row(row_of(id)); }
    int truth_of(int id) const { return truth[row_of(id)]; }

    void rebuild_index();

private:
    std::unordered_map<int, int> id_to_row_;
};

struct LabeledEntry {
    int id;
    int label;         // -1 or +1
    bool provisional;  // true for greedy-phase pseudo-labels
};

// The growing train set (X_l, Y_l); pseudo-labels are flagged provisional.
struct LabeledSet {
    std::vector<LabeledEntry> entries;

    int size() const { return static_cast<int>(entries.size()); }
    bool contains(int id) const;
    void add(int id, int label, bool provisional = false);
    void drop_provisional();

    std::vector<int> ids() const;
    Mat features(const Dataset& data) const;
    Vec labels() const;
};

struct ToyConfig {
    Vec mean_pos = (Vec(2) << 2.0, 0.0).finished();
    Vec mean_neg = (Vec(2) << -2.0, 0.0).finished();
    double stddev = 0.7;
    int n_pos = 30;
    int n_neg = 220;
    int n_seed_pos = 1;
    int n_seed_neg = 13;
    std::uint64_t seed = 0;
};

struct ToyResult {
    Dataset dataset;
    LabeledSet seed_labels;
};

// Two-Gaussian toy: positive ids 0..n_pos-1, negative ids n_pos..n_pos+n_neg-1.
// Seed labels sample n_seed_pos positives and n_seed_neg negatives.
ToyResult generate_gaussian_toy(const ToyConfig& cfg);

// CSV with header "id,label,f0,...,f{d-1}"; labels restricted to {-1, 1}.
Dataset load_dataset(const std::string& path);
void save_dataset(const Dataset& data, const std::string& path);

// Top-k ids by mean cosine similarity to the query vectors; queries excluded,
// ties broken by lower id.
std::vector<int> cosine_topk(const std::vector<int>& query_ids,
                             const Dataset& data, int k);

}  // namespace gal
