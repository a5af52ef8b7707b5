#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hippo/benchmarks.hpp"
#include "hippo/pareto.hpp"

namespace hippo {

/// Invalid experiment configuration (CLI exit code 1).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A seed's run stopped at `step`.
class StepFailure : public Error {
public:
    StepFailure(std::size_t step, const std::string& what) : Error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

enum class Method { hippo, kb, random, sequential_ehvi };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

struct OptimiserSettings {
    std::size_t budget_per_dim = 2000;
    std::size_t restarts = 5;
};

struct ExperimentConfig {
    std::string problem = "vlmop2";
    Method method = Method::hippo;
    std::size_t batch_size = 4;
    /// 0 selects 2n + 2.
    std::size_t init_points = 0;
    /// Total evaluations including the initial design.
    std::size_t total_budget = 50;
    std::vector<std::uint64_t> seeds{0};
    OptimiserSettings optimiser;
    std::filesystem::path output = "results";
    /// Random restarts per GP fit; the previous step's hyperparameters are
    /// always tried as an additional start.
    std::size_t fit_restarts = 3;
    /// When false, step_wall_time is written as 0 so output is reproducible
    /// byte for byte.
    bool record_timing = true;
};

/// Throws ConfigError. Warns when the batches do not divide the budget.
void validate(const ExperimentConfig& cfg);

/// JSON object whose keys are the ExperimentConfig field names; absent keys
/// keep their defaults, unknown keys are rejected.
ExperimentConfig config_from_json(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& cfg);

/// "0..9" (inclusive range), "1,4,7", or a mix such as "0..2,10".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

struct StepRecord {
    std::uint64_t seed = 0;
    std::size_t step = 0;
    std::size_t evaluations = 0;
    double hv_regret = 0.0;
    /// Model fitting plus batch construction, seconds.
    double step_wall_time = 0.0;
    /// Batch construction alone, seconds. Not part of the CSV output.
    double batch_wall_time = 0.0;

    friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct SeedFailure {
    std::uint64_t seed = 0;
    std::size_t step = 0;
    std::string message;
};

struct ExperimentResult {
    std::vector<StepRecord> records;
    std::vector<SeedFailure> failures;

    bool all_seeds_failed(std::size_t seed_count) const { return seed_count > 0 && failures.size() >= seed_count; }
};

/// Regret of the observed set: HV(true front) - HV(front of observations).
double observed_regret(const BenchmarkProblem& problem, std::span<const ObjectiveVector> observations);

struct SeedRun {
    std::vector<StepRecord> records;
    /// Every evaluation in order, inputs on the unit box.
    Dataset history;
};

/// One seed: initial Sobol design, then fit / batch / evaluate until the
/// budget is spent. Step 0 records the initial design. Throws StepFailure.
SeedRun run_seed(const ExperimentConfig& cfg, const BenchmarkProblem& problem, std::uint64_t seed);

/// Every seed in order; failures are collected and the remaining seeds still run.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const BenchmarkProblem& problem);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// `<output>/<problem>_<method>_b<batch>.csv`
std::filesystem::path csv_path_for(const ExperimentConfig& cfg);

}  // namespace hippo
