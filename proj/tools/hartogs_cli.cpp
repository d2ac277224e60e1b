#include "hartogs/errors.hpp"
#include "hartogs/parallel.hpp"
#include "hartogs/report.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace hartogs;

int main(int argc, char** argv) {
    CLI::App app{"Bergman projection and Toeplitz operator experiments on Hartogs-type domains"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::vector<std::string> tolerance_overrides;
    std::string regime;

    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--threads", threads, "worker threads (overrides HARTOGS_THREADS)");
    app.add_option("--tolerance", tolerance_overrides, "per-suite override, suite=value")->take_all();

    auto* verify = app.add_subcommand("verify", "basis, kernel, Green and estimate suites");
    auto* scan = app.add_subcommand("phase-scan", "empirical boundedness scan against predicted regimes");
    auto* witness = app.add_subcommand("witness", "regime 1 or regime 3 unboundedness witnesses");
    witness->add_option("--regime", regime, "1 or 3");
    auto* kernel = app.add_subcommand("kernel", "kernel values for the point pairs of the config 'kernel' section");
    for (auto* sub : {verify, scan, witness, kernel}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitConfig;
    }

    try {
        RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (seed) config.seed = *seed;
        if (threads) config.threads = *threads;
        for (const auto& o : tolerance_overrides) apply_tolerance_override(config, o);
        if (!regime.empty()) config.params["witness"]["regime"] = regime;
        validate_config(config);
        if (config.threads) set_thread_count(*config.threads);

        if (*verify) return cmd_verify(config, std::cout);
        if (*scan) return cmd_phase_scan(config, std::cout);
        if (*witness) return cmd_witness(config, std::cout);
        return cmd_kernel(config, std::cerr, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return kExitFailure;
    }
}
