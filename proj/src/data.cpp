#include "gal/data.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "gal/rng.hpp"

namespace gal {

int Dataset::row_of(int id) const {
    auto it = id_to_row_.find(id);
    if (it == id_to_row_.end()) {
        throw DataError("unknown id " + std::to_string(id));
    }
    return it->second;
}

void Dataset::rebuild_index() {
    id_to_row_.clear();
    id_to_row_.reserve(ids.size());
    for (int r = 0; r < static_cast<int>(ids.size()); ++r) {
        if (!id_to_row_.emplace(ids[r], r).second) {
            throw DataError("duplicate id " + std::to_string(ids[r]));
        }
    }
}

bool LabeledSet::contains(int id) const {
    return std::any_of(entries.begin(), entries.end(),
                       [id](const LabeledEntry& e) { return e.id == id; });
}

void LabeledSet::add(int id, int label, bool provisional) {
    if (label != -1 && label != 1) {
        throw DataError("label must be -1 or +1, got " + std::to_string(label));
    }
    if (contains(id)) {
        throw DataError("id " + std::to_string(id) + " already labeled");
    }
    entries.push_back({id, label, provisional});
}

void LabeledSet::drop_provisional() {
    entries.erase(std::remove_if(entries.begin(), entries.end(),
                                 [](const LabeledEntry& e) { return e.provisional; }),
                  entries.end());
}

std::vector<int> LabeledSet::ids() const {
    std::vector<int> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.id);
    return out;
}

Mat LabeledSet::features(const Dataset& data) const {
    Mat X(entries.size(), data.dim());
    for (int i = 0; i < size(); ++i) {
        X.row(i) = data.X.row(data.row_of(entries[i].id));
    }
    return X;
}

Vec LabeledSet::labels() const {
    Vec y(entries.size());
    for (int i = 0; i < size(); ++i) y[i] = entries[i].label;
    return y;
}

ToyResult generate_gaussian_toy(const ToyConfig& cfg) {
    if (cfg.mean_pos.size() != cfg.mean_neg.size()) {
        throw ConfigError("mean_pos and mean_neg must have equal dimension");
    }
    if (cfg.stddev <= 0.0) throw ConfigError("stddev must be positive");
    if (cfg.n_pos <= 0 || cfg.n_neg <= 0) {
        throw ConfigError("n_pos and n_neg must be positive");
    }
    if (cfg.n_seed_pos < 0 || cfg.n_seed_pos > cfg.n_pos ||
        cfg.n_seed_neg < 0 || cfg.n_seed_neg > cfg.n_neg) {
        throw ConfigError("seed label counts exceed class sizes");
    }

    const int d = static_cast<int>(cfg.mean_pos.size());
    const int n = cfg.n_pos + cfg.n_neg;
    Rng rng(cfg.seed);

    ToyResult out;
    out.dataset.X.resize(n, d);
    out.dataset.truth.resize(n);
    out.dataset.ids.resize(n);
    for (int i = 0; i < n; ++i) {
        const bool pos = i < cfg.n_pos;
        const Vec& mean = pos ? cfg.mean_pos : cfg.mean_neg;
        for (int j = 0; j < d; ++j) {
            out.dataset.X(i, j) = mean[j] + cfg.stddev * rng.normal();
        }
        out.dataset.truth[i] = pos ? 1 : -1;
        out.dataset.ids[i] = i;
    }
    out.dataset.rebuild_index();

    for (int i : rng.sample_without_replacement(cfg.n_pos, cfg.n_seed_pos)) {
        out.seed_labels.add(i, 1);
    }
    for (int i : rng.sample_without_replacement(cfg.n_neg, cfg.n_seed_neg)) {
        out.seed_labels.add(cfg.n_pos + i, -1);
    }
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, int line_no) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) {
        throw DataError("line " + std::to_string(line_no) +
                        ": non-numeric field '" + s + "'");
    }
    return v;
}

}  // namespace

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "id" || header[1] != "label") {
        throw DataError(path + ": header must be id,label,f0,...");
    }
    const int d = static_cast<int>(header.size()) - 2;
    for (int j = 0; j < d; ++j) {
        if (header[j + 2] != "f" + std::to_string(j)) {
            throw DataError(path + ": feature column " + std::to_string(j) +
                            " must be named f" + std::to_string(j));
        }
    }

    std::vector<double> values;
    std::vector<int> ids, truth;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != d + 2) {
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(d + 2) + " fields, got " +
                            std::to_string(fields.size()));
        }
        ids.push_back(static_cast<int>(parse_double(fields[0], line_no)));
        const double lab = parse_double(fields[1], line_no);
        if (lab != -1.0 && lab != 1.0) {
            throw DataError("line " + std::to_string(line_no) +
                            ": label must be -1 or 1");
        }
        truth.push_back(static_cast<int>(lab));
        for (int j = 0; j < d; ++j) {
            values.push_back(parse_double(fields[j + 2], line_no));
        }
    }
    if (ids.empty()) throw DataError(path + ": no data rows");

    Dataset data;
    const int n = static_cast<int>(ids.size());
    data.X.resize(n, d);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) data.X(i, j) = values[i * d + j];
    }
    data.ids = std::move(ids);
    data.truth = std::move(truth);
    data.rebuild_index();
    return data;
}

void save_dataset(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "id,label";
    for (int j = 0; j < data.dim(); ++j) out << ",f" << j;
    out << "\n";
    out.precision(17);
    for (int i = 0; i < data.n(); ++i) {
        out << data.ids[i] << "," << data.truth[i];
        for (int j = 0; j < data.dim(); ++j) out << "," << data.X(i, j);
        out << "\n";
    }
}

std::vector<int> cosine_topk(const std::vector<int>& query_ids,
                             const Dataset& data, int k) {
    if (query_ids.empty()) throw ConfigError("cosine_topk: no query ids");

    std::vector<char> is_query(data.n(), 0);
    Mat Q(query_ids.size(), data.dim());
    for (int qi = 0; qi < static_cast<int>(query_ids.size()); ++qi) {
        const int r = data.row_of(query_ids[qi]);
        const double norm = data.X.row(r).norm();
        if (norm == 0.0) {
            throw NumericError("zero-norm vector for id " +
                               std::to_string(query_ids[qi]));
        }
        Q.row(qi) = data.X.row(r) / norm;
        is_query[r] = 1;
    }

    std::vector<std::pair<double, int>> scored;  // (-mean_sim, id)
    for (int r = 0; r < data.n(); ++r) {
        if (is_query[r]) continue;
        const double norm = data.X.row(r).norm();
        if (norm == 0.0) {
            throw NumericError("zero-norm vector for id " +
                               std::to_string(data.ids[r]));
        }
        const double sim = (Q * (data.X.row(r).transpose() / norm)).mean();
        scored.emplace_back(-sim, data.ids[r]);
    }
    if (k > static_cast<int>(scored.size())) {
        throw ConfigError("cosine_topk: k exceeds pool size");
    }
    std::sort(scored.begin(), scored.end());
    std::vector<int> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) out.push_back(scored[i].second);
    return out;
}

}  // namespace gal
