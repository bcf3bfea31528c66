#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "gal/cli.hpp"
#include "gal/types.hpp"

int main(int argc, char** argv) {
    CLI::App app{"greedy batch-mode active learning toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string scope = "all";
    std::optional<std::uint64_t> seed;

    auto* toy = app.add_subcommand(
        "toy", "2-d Gaussian study: strategy diagnostics and boundary grids");
    toy->add_option("--config", config_path,
                    "config file overriding the toy defaults");
    toy->add_option("--out", out_dir, "output directory");
    toy->add_option("--seed", seed, "run a single seed");

    auto* run = app.add_subcommand("run",
                                   "execute the configured experiment grid");
    run->add_option("--config", config_path, "experiment config")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed", seed, "override the config seed list");

    auto* verify = app.add_subcommand("verify", "run the property suites");
    verify->add_option("--scope", scope,
                       "gp, greedy, classifiers, metrics, or all");

    auto* report = app.add_subcommand(
        "report", "aggregate run summaries into a comparison table");
    report->add_option("--out", out_dir, "directory holding summary.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // bad usage is a config error
    }

    try {
        if (app.got_subcommand(toy)) {
            return gal::cmd_toy(config_path, out_dir, seed);
        }
        if (app.got_subcommand(run)) {
            return gal::cmd_run(config_path, out_dir, seed);
        }
        if (app.got_subcommand(verify)) {
            return gal::cmd_verify(scope);
        }
        return gal::cmd_report(out_dir);
    } catch (const gal::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const gal::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
