#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hippo/harness.hpp"
#include "hippo/report.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct RunFlags {
    std::string config;
    std::optional<std::string> problem;
    std::optional<std::string> method;
    std::optional<std::size_t> batch_size;
    std::optional<std::size_t> init_points;
    std::optional<std::size_t> budget;
    std::optional<std::string> seeds;
    std::optional<std::string> out;
    std::optional<std::size_t> fit_restarts;
    std::optional<std::size_t> optimiser_budget;
    std::optional<std::size_t> optimiser_restarts;
    bool no_timing = false;
};

hippo::ExperimentConfig resolve(const RunFlags& flags) {
    hippo::ExperimentConfig cfg = flags.config.empty() ? hippo::ExperimentConfig{} : hippo::load_config(flags.config);
    if (flags.problem)
        cfg.problem = *flags.problem;
    if (flags.method)
        cfg.method = hippo::parse_method(*flags.method);
    if (flags.batch_size)
        cfg.batch_size = *flags.batch_size;
    if (flags.init_points)
        cfg.init_points = *flags.init_points;
    if (flags.budget)
        cfg.total_budget = *flags.budget;
    if (flags.seeds)
        cfg.seeds = hippo::parse_seed_list(*flags.seeds);
    if (flags.out)
        cfg.output = *flags.out;
    if (flags.fit_restarts)
        cfg.fit_restarts = *flags.fit_restarts;
    if (flags.optimiser_budget)
        cfg.optimiser.budget_per_dim = *flags.optimiser_budget;
    if (flags.optimiser_restarts)
        cfg.optimiser.restarts = *flags.optimiser_restarts;
    if (flags.no_timing)
        cfg.record_timing = false;
    hippo::validate(cfg);
    return cfg;
}

int run(const RunFlags& flags) {
    hippo::ExperimentConfig cfg;
    try {
        cfg = resolve(flags);
    } catch (const hippo::Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        const auto result = hippo::run_experiment(cfg);
        const auto path = hippo::csv_path_for(cfg);
        hippo::write_csv(result.records, path);
        for (const auto& f : result.failures)
            std::cerr << "seed " << f.seed << " failed at step " << f.step << ": " << f.message << '\n';
        if (result.all_seeds_failed(cfg.seeds.size()))
            return kRuntimeError;
        std::cout << "wrote " << result.records.size() << " records to " << path.string() << '\n';
        return kOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}

int plot(const std::string& in, const std::string& out, const std::string& title) {
    try {
        const auto bands = hippo::load_regret_bands(in);
        if (bands.empty()) {
            std::cerr << "no CSV results found in " << in << '\n';
            return kConfigError;
        }
        hippo::write_regret_svg(bands, out, title);
        std::cout << "wrote " << bands.size() << " series to " << out << '\n';
        return kOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Batch multi-objective Bayesian optimisation experiments"};
    app.require_subcommand(1);

    RunFlags flags;
    auto* run_cmd = app.add_subcommand("run", "Run an optimisation experiment and write a regret CSV");
    run_cmd->add_option("--config", flags.config, "JSON file with ExperimentConfig fields")->check(CLI::ExistingFile);
    run_cmd->add_option("--problem", flags.problem, "vlmop2 | dtlz2 | hartmann_ackley");
    run_cmd->add_option("--method", flags.method, "hippo | kb | random | sequential-ehvi");
    run_cmd->add_option("--batch-size", flags.batch_size, "Points per optimisation step");
    run_cmd->add_option("--init", flags.init_points, "Initial design size (default 2n+2)");
    run_cmd->add_option("--budget", flags.budget, "Total evaluations including the initial design");
    run_cmd->add_option("--seeds", flags.seeds, "Seed list, e.g. 0..9 or 1,2,3");
    run_cmd->add_option("--out", flags.out, "Output directory");
    run_cmd->add_option("--fit-restarts", flags.fit_restarts, "Random restarts per GP fit");
    run_cmd->add_option("--optimiser-budget", flags.optimiser_budget, "Acquisition samples per input dimension");
    run_cmd->add_option("--optimiser-restarts", flags.optimiser_restarts, "Pattern-search restarts");
    run_cmd->add_flag("--no-timing", flags.no_timing, "Write 0 for step wall time");

    std::string plot_in, plot_out, title = "HV regret";
    auto* plot_cmd = app.add_subcommand("plot", "Render regret CSVs in a directory to SVG");
    plot_cmd->add_option("--in", plot_in, "Directory of regret CSVs")->required();
    plot_cmd->add_option("--out", plot_out, "Output SVG file")->required();
    plot_cmd->add_option("--title", title, "Plot title");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    if (*run_cmd)
        return run(flags);
    return plot(plot_in, plot_out, title);
}
