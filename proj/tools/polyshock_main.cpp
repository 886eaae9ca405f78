#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "polyshock/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Front-tracking solver and kinetic-statistics verifier for scalar "
                 "conservation laws with convex polygonal flux"};

    std::string config_path;
    std::string command;
    polyshock::CliOptions opt;
    long long seed_override = -1;
    int n_override = -1;
    double horizon_override = -1.0;
    int workers_override = -1;

    app.add_option("--config", config_path, "Path to the JSON run config")->required();
    app.add_option("--command", command,
                   "One of: solve, oracle, crosscheck, ensemble, verify-h1, verify-h2, report")
        ->required();
    app.add_option("--out", opt.out_dir, "Output directory (created if absent)");
    app.add_option("--seed", seed_override, "Override config seed");
    app.add_option("--n", n_override, "Override realization count");
    app.add_option("--horizon", horizon_override, "Override horizon");
    app.add_option("--workers", workers_override, "Override worker thread count");
    app.add_option("--points", opt.points_path, "Oracle query points CSV (columns x,t)");
    app.add_flag("--expect-breakdown", opt.expect_breakdown,
                 "verify-h1: post-collision breakdown is the expected outcome");

    CLI11_PARSE(app, argc, argv);

    try {
        polyshock::RunConfig cfg = polyshock::load_config(config_path);
        if (seed_override >= 0) {
            cfg.seed = static_cast<std::uint64_t>(seed_override);
            cfg.model.seed = static_cast<std::uint64_t>(seed_override);
        }
        if (n_override >= 0) cfg.realizations = n_override;
        if (horizon_override > 0.0) cfg.horizon = horizon_override;
        if (workers_override > 0) cfg.workers = workers_override;
        return polyshock::run_command(command, cfg, opt);
    } catch (const polyshock::Error& e) {
        std::cerr << "{\"error\":{\"code\":\"" << polyshock::errc_name(e.code())
                  << "\",\"message\":" << nlohmann::json(std::string(e.what())).dump()
                  << "}}\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":{\"code\":\"Internal\",\"message\":"
                  << nlohmann::json(std::string(e.what())).dump() << "}}\n";
        return 2;
    }
}
