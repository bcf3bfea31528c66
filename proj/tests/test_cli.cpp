#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gal/cli.hpp"
#include "gal/types.hpp"

using namespace gal;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() /
               ("gal_cli_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

// Curve rows minus the wall-clock column, for determinism comparisons.
std::string strip_wall(const std::string& csv) {
    std::string out;
    for (const auto& line : lines_of(csv)) {
        const auto cut = line.rfind(',');
        out += line.substr(0, cut) + "\n";
    }
    return out;
}

const char* kRunConfig =
    "strategies = random,entropy\n"
    "seeds = 0..1\n"
    "schedule = (2,1)\n"
    "toy.n_pos = 10\n"
    "toy.n_neg = 30\n"
    "toy.n_seed_neg = 5\n";

}  // namespace

TEST_CASE("cmd_toy writes the study files deterministically") {
    TempDir cfg_dir("toycfg");
    const fs::path cfg = cfg_dir.path / "toy.cfg";
    spit(cfg, "seeds = 0\ntoy.n_pos = 12\ntoy.n_neg = 36\ntoy.n_seed_neg = 5\n");

    TempDir a("toy_a"), b("toy_b");
    CHECK(cmd_toy(cfg.string(), a.str(), std::nullopt) == 0);
    CHECK(cmd_toy(cfg.string(), b.str(), std::nullopt) == 0);

    for (const char* name : {"toy.csv", "diagnostics.csv", "boundary.csv"}) {
        INFO("file " << name);
        REQUIRE(fs::exists(a.path / name));
        CHECK(slurp(a.path / name) == slurp(b.path / name));
    }

    const auto diag = lines_of(slurp(a.path / "diagnostics.csv"));
    REQUIRE(diag.size() == 5);  // header + 4 preset strategies
    CHECK(diag[0] == "strategy,uncertainty,diversity,theta_gap");
    CHECK(diag[1].rfind("random,", 0) == 0);
    CHECK(diag[2].rfind("kmeanspp,", 0) == 0);
    CHECK(diag[3].rfind("entropy,", 0) == 0);
    CHECK(diag[4].rfind("gal-svm,", 0) == 0);

    const auto grid = lines_of(slurp(a.path / "boundary.csv"));
    REQUIRE(grid.size() == 1 + 61 * 61);
    CHECK(grid[0] == "x0,x1,initial,random,kmeanspp,entropy,gal-svm,full");
}

TEST_CASE("cmd_toy honors --seed") {
    TempDir cfg_dir("toyseed");
    const fs::path cfg = cfg_dir.path / "toy.cfg";
    spit(cfg, "toy.n_pos = 12\ntoy.n_neg = 36\ntoy.n_seed_neg = 5\n");
    TempDir out("toy_seed_out");
    CHECK(cmd_toy(cfg.string(), out.str(), 3) == 0);
    CHECK(fs::exists(out.path / "diagnostics.csv"));
}

TEST_CASE("cmd_run produces manifest, curves and summary") {
    TempDir cfg_dir("runcfg");
    const fs::path cfg = cfg_dir.path / "run.cfg";
    spit(cfg, kRunConfig);

    TempDir out("run_out");
    REQUIRE(cmd_run(cfg.string(), out.str(), std::nullopt) == 0);

    const json manifest = json::parse(slurp(out.path / "manifest.json"));
    CHECK(manifest.at("tool_version").get<std::string>() == kToolVersion);
    CHECK(manifest.at("config").at("dataset") == "toy");
    CHECK(manifest.at("config").at("strategies") ==
          json::array({"random", "entropy"}));
    REQUIRE(manifest.at("outputs").size() == 5);  // 4 curves + summary.json

    const std::vector<std::string> curves = {
        "curve_random_seed0.csv", "curve_random_seed1.csv",
        "curve_entropy_seed0.csv", "curve_entropy_seed1.csv"};
    for (const auto& name : curves) {
        INFO("curve " << name);
        REQUIRE(fs::exists(out.path / name));
        const auto rows = lines_of(slurp(out.path / name));
        REQUIRE(rows.size() == 4);  // header + 2 cycles + final record
        CHECK(rows[0] == "cycle,n_labeled,mAP,batch_ids,pseudo_correct,wall_s");
        CHECK(rows[1].rfind("0,6,", 0) == 0);
        CHECK(rows[2].rfind("1,7,", 0) == 0);
        CHECK(rows[3].rfind("2,8,", 0) == 0);
    }

    const json summary = json::parse(slurp(out.path / "summary.json"));
    REQUIRE(summary.at("runs").size() == 4);
    for (const auto& run : summary.at("runs")) {
        CHECK(run.at("ok").get<bool>());
        CHECK(run.at("normalized_auc").get<double>() >= 0.0);
        CHECK(run.at("normalized_auc").get<double>() <= 1.0);
        CHECK(run.at("n_labeled_final").get<int>() == 8);
        CHECK(run.contains("first_batch"));
        CHECK(!run.contains("pseudo_label_accuracy"));
    }

    // Same config into a fresh dir: identical apart from wall-clock times.
    TempDir out2("run_out2");
    REQUIRE(cmd_run(cfg.string(), out2.str(), std::nullopt) == 0);
    for (const auto& name : curves) {
        CHECK(strip_wall(slurp(out.path / name)) ==
              strip_wall(slurp(out2.path / name)));
    }
}

TEST_CASE("cmd_run --seed narrows to one seed per strategy") {
    TempDir cfg_dir("runseed");
    const fs::path cfg = cfg_dir.path / "run.cfg";
    spit(cfg, kRunConfig);
    TempDir out("run_seed_out");
    REQUIRE(cmd_run(cfg.string(), out.str(), 5) == 0);
    CHECK(fs::exists(out.path / "curve_random_seed5.csv"));
    CHECK(fs::exists(out.path / "curve_entropy_seed5.csv"));
    CHECK(!fs::exists(out.path / "curve_random_seed0.csv"));
    const json summary = json::parse(slurp(out.path / "summary.json"));
    CHECK(summary.at("runs").size() == 2);
}

TEST_CASE("cmd_run rejects unknown strategies with the vocabulary") {
    TempDir cfg_dir("badcfg");
    const fs::path cfg = cfg_dir.path / "bad.cfg";
    spit(cfg, "strategies = frobnicate\n");
    TempDir out("bad_out");
    CHECK_THROWS_AS(cmd_run(cfg.string(), out.str(), std::nullopt),
                    ConfigError);
    try {
        cmd_run(cfg.string(), out.str(), std::nullopt);
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("frobnicate") != std::string::npos);
        CHECK(msg.find("gal-svm") != std::string::npos);
        CHECK(msg.find("random") != std::string::npos);
    }
}

TEST_CASE("cmd_run keeps going when one strategy fails") {
    TempDir cfg_dir("partial");
    const fs::path cfg = cfg_dir.path / "run.cfg";
    // posterior-uncertainty demands the gp classifier; validation fails per
    // run while the random runs still succeed.
    spit(cfg,
         "strategies = random,posterior-uncertainty\n"
         "seeds = 0\n"
         "schedule = (1,1)\n"
         "toy.n_pos = 10\n"
         "toy.n_neg = 30\n"
         "toy.n_seed_neg = 5\n");
    TempDir out("partial_out");
    CHECK(cmd_run(cfg.string(), out.str(), std::nullopt) == 1);
    const json summary = json::parse(slurp(out.path / "summary.json"));
    REQUIRE(summary.at("runs").size() == 2);
    CHECK(summary.at("runs")[0].at("ok").get<bool>());
    CHECK(!summary.at("runs")[1].at("ok").get<bool>());
    CHECK(!summary.at("runs")[1].at("error").get<std::string>().empty());
    CHECK(fs::exists(out.path / "curve_random_seed0.csv"));
}

TEST_CASE("cmd_verify metrics scope passes and unknown scopes throw") {
    CHECK(cmd_verify("metrics") == 0);
    CHECK_THROWS_AS(cmd_verify("bogus"), ConfigError);
}

TEST_CASE("cmd_report aggregates summary.json") {
    TempDir cfg_dir("repcfg");
    const fs::path cfg = cfg_dir.path / "run.cfg";
    spit(cfg, kRunConfig);
    TempDir out("rep_out");
    REQUIRE(cmd_run(cfg.string(), out.str(), std::nullopt) == 0);
    REQUIRE(cmd_report(out.str()) == 0);

    const auto rows = lines_of(slurp(out.path / "report.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] ==
          "strategy,n_runs,nauc_mean,nauc_std,final_map_mean,final_map_std");
    CHECK(rows[1].rfind("random,2,", 0) == 0);
    CHECK(rows[2].rfind("entropy,2,", 0) == 0);

    // The reported mean must match a recomputation from summary.json.
    const json summary = json::parse(slurp(out.path / "summary.json"));
    double sum = 0.0;
    int n = 0;
    for (const auto& run : summary.at("runs")) {
        if (run.at("strategy") != "random") continue;
        sum += run.at("normalized_auc").get<double>();
        ++n;
    }
    REQUIRE(n == 2);
    std::istringstream field(rows[1].substr(std::string("random,2,").size()));
    std::string mean_txt;
    std::getline(field, mean_txt, ',');
    CHECK(std::stod(mean_txt) == doctest::Approx(sum / n).epsilon(1e-12));
}

TEST_CASE("cmd_report failure modes") {
    TempDir empty("rep_empty");
    CHECK_THROWS_AS(cmd_report(empty.str()), DataError);

    TempDir garbled("rep_garbled");
    spit(garbled.path / "summary.json", "{not json");
    CHECK_THROWS_AS(cmd_report(garbled.str()), DataError);

    TempDir no_ok("rep_no_ok");
    spit(no_ok.path / "summary.json",
         R"({"runs": [{"strategy": "random", "seed": 0, "ok": false,)"
         R"( "error": "boom"}]})");
    CHECK_THROWS_AS(cmd_report(no_ok.str()), DataError);
}
