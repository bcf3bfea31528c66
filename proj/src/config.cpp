#include "gal/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace gal {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& s, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + s + "'");
    }
}

long to_long(const std::string& s, const std::string& key) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError(key + ": expected an integer, got '" + s + "'");
    }
    return v;
}

bool to_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(key + ": expected true/false, got '" + s + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

Vec to_vec(const std::string& s, const std::string& key) {
    const auto parts = split(s, ',');
    Vec v(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        v[i] = to_double(parts[i], key);
    }
    return v;
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
    const auto range_at = s.find("..");
    if (range_at != std::string::npos) {
        const long lo = to_long(trim(s.substr(0, range_at)), "seeds");
        const long hi = to_long(trim(s.substr(range_at + 2)), "seeds");
        if (lo > hi) throw ConfigError("seeds: descending range");
        std::vector<std::uint64_t> out;
        for (long v = lo; v <= hi; ++v) out.push_back(static_cast<std::uint64_t>(v));
        return out;
    }
    std::vector<std::uint64_t> out;
    for (const auto& part : split(s, ',')) {
        out.push_back(static_cast<std::uint64_t>(to_long(part, "seeds")));
    }
    return out;
}

}  // namespace

std::vector<ScheduleStage> parse_schedule(const std::string& text) {
    // "(10,3),(20,7)" -> two stages.
    std::vector<ScheduleStage> out;
    std::size_t at = 0;
    while (at < text.size()) {
        while (at < text.size() && (text[at] == ',' || text[at] == ' ')) ++at;
        if (at >= text.size()) break;
        if (text[at] != '(') throw ConfigError("schedule: expected '(' in '" + text + "'");
        const auto close = text.find(')', at);
        if (close == std::string::npos) {
            throw ConfigError("schedule: missing ')' in '" + text + "'");
        }
        const auto inner = split(text.substr(at + 1, close - at - 1), ',');
        if (inner.size() != 2) {
            throw ConfigError("schedule: stages need (cycles,budget)");
        }
        ScheduleStage s;
        s.cycles = static_cast<int>(to_long(inner[0], "schedule"));
        s.budget = static_cast<int>(to_long(inner[1], "schedule"));
        out.push_back(s);
        at = close + 1;
    }
    if (out.empty()) throw ConfigError("schedule: no stages in '" + text + "'");
    return out;
}

RunSpec parse_config_text(const std::string& text) {
    RunSpec spec;
    spec.strategies = {Strategy::random};

    bool saw_schedule = false;
    long cycles_short = -1, budget_short = -1;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) {
            throw ConfigError(key + ": empty value");
        }

        ExperimentConfig& c = spec.base;
        if (key == "dataset") {
            if (value == "toy") {
                c.use_toy = true;
            } else {
                c.use_toy = false;
                c.csv_path = value;
            }
        } else if (key == "strategy" || key == "strategies") {
            spec.strategies.clear();
            for (const auto& name : split(value, ',')) {
                spec.strategies.push_back(parse_strategy(name));
            }
        } else if (key == "classifier") {
            if (value == "svm") {
                c.classifier = ClassifierKind::svm;
            } else if (value == "gp") {
                c.classifier = ClassifierKind::gp;
            } else {
                throw ConfigError("classifier: expected svm or gp, got '" + value + "'");
            }
        } else if (key == "selection") {
            if (value == "greedy") {
                c.selection = SelectionMode::greedy;
            } else if (value == "topb") {
                c.selection = SelectionMode::topb;
            } else {
                throw ConfigError("selection: expected greedy or topb, got '" +
                                  value + "'");
            }
        } else if (key == "schedule") {
            c.schedule = parse_schedule(value);
            saw_schedule = true;
        } else if (key == "cycles") {
            cycles_short = to_long(value, key);
        } else if (key == "budget") {
            budget_short = to_long(value, key);
        } else if (key == "K") {
            c.K = value == "all" ? -1 : static_cast<int>(to_long(value, key));
        } else if (key == "c_reg") {
            c.c_reg = to_double(value, key);
        } else if (key == "include_bias") {
            c.include_bias = to_bool(value, key);
        } else if (key == "gamma") {
            c.gamma = value == "median" ? 0.0 : to_double(value, key);
        } else if (key == "alpha") {
            c.alpha = to_double(value, key);
        } else if (key == "jitter") {
            c.jitter = to_double(value, key);
        } else if (key == "seeds") {
            c.seeds = parse_seeds(value);
        } else if (key == "n_query_pos") {
            c.n_query_pos = static_cast<int>(to_long(value, key));
        } else if (key == "n_seed_neg") {
            c.n_seed_neg = static_cast<int>(to_long(value, key));
        } else if (key == "nauc_lo") {
            c.nauc_lo = to_double(value, key);
        } else if (key == "nauc_hi") {
            c.nauc_hi = to_double(value, key);
        } else if (key == "mlp.epochs") {
            c.mlp.epochs = static_cast<int>(to_long(value, key));
        } else if (key == "mlp.lr") {
            c.mlp.lr = to_double(value, key);
        } else if (key == "mlp.hidden") {
            c.mlp.hidden = static_cast<int>(to_long(value, key));
        } else if (key == "toy.n_pos") {
            c.toy.n_pos = static_cast<int>(to_long(value, key));
        } else if (key == "toy.n_neg") {
            c.toy.n_neg = static_cast<int>(to_long(value, key));
        } else if (key == "toy.std") {
            c.toy.stddev = to_double(value, key);
        } else if (key == "toy.mean_pos") {
            c.toy.mean_pos = to_vec(value, key);
        } else if (key == "toy.mean_neg") {
            c.toy.mean_neg = to_vec(value, key);
        } else if (key == "toy.n_seed_pos") {
            c.toy.n_seed_pos = static_cast<int>(to_long(value, key));
        } else if (key == "toy.n_seed_neg") {
            c.toy.n_seed_neg = static_cast<int>(to_long(value, key));
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }

    if (cycles_short >= 0 || budget_short >= 0) {
        if (saw_schedule) {
            throw ConfigError("give either schedule or cycles/budget, not both");
        }
        if (cycles_short < 0 || budget_short < 0) {
            throw ConfigError("cycles and budget must be given together");
        }
        spec.base.schedule = {
            {static_cast<int>(cycles_short), static_cast<int>(budget_short)}};
    }

    if (spec.strategies.empty()) throw ConfigError("no strategies given");
    return spec;
}

RunSpec parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace gal
