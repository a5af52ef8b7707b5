#include "hippo/harness.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "hippo/acquisition.hpp"
#include "hippo/batch.hpp"
#include "hippo/log.hpp"
#include "hippo/qmc.hpp"
#include "hippo/surrogate.hpp"

namespace hippo {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t initial_size(const ExperimentConfig& cfg, std::size_t n) {
    return cfg.init_points > 0 ? cfg.init_points : 2 * n + 2;
}

template <typename T>
T get_field(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

}  // namespace

std::string_view to_string(Method method) {
    switch (method) {
    case Method::hippo:
        return "hippo";
    case Method::kb:
        return "kb";
    case Method::random:
        return "random";
    case Method::sequential_ehvi:
        return "sequential-ehvi";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (Method m : {Method::hippo, Method::kb, Method::random, Method::sequential_ehvi})
        if (to_string(m) == name)
            return m;
    throw ConfigError("unknown method '" + std::string(name) + "' (expected hippo, kb, random or sequential-ehvi)");
}

void validate(const ExperimentConfig& cfg) {
    const auto names = problem_names();
    if (std::find(names.begin(), names.end(), cfg.problem) == names.end())
        throw ConfigError("unknown problem '" + cfg.problem + "'");
    if (cfg.batch_size < 1)
        throw ConfigError("batch_size must be at least 1");
    if (cfg.init_points != 0 && cfg.init_points < 2)
        throw ConfigError("init_points must be at least 2");
    if (cfg.seeds.empty())
        throw ConfigError("at least one seed is required");
    if (cfg.optimiser.budget_per_dim < 1)
        throw ConfigError("optimiser.budget_per_dim must be positive");
    if (cfg.init_points != 0) {
        if (cfg.total_budget < cfg.init_points)
            throw ConfigError("total_budget is smaller than init_points");
        if ((cfg.total_budget - cfg.init_points) % cfg.batch_size != 0)
            log::warn("total_budget - init_points is not a multiple of batch_size; the last batch will be partial");
    }
}

ExperimentConfig config_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");

    static const std::vector<std::string> known{"problem", "method", "batch_size", "init_points",
                                                "total_budget", "seeds", "optimiser", "output",
                                                "fit_restarts", "record_timing"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown config field '" + key + "'");

    ExperimentConfig cfg;
    if (j.contains("problem"))
        cfg.problem = get_field<std::string>(j, "problem");
    if (j.contains("method"))
        cfg.method = parse_method(get_field<std::string>(j, "method"));
    if (j.contains("batch_size"))
        cfg.batch_size = get_field<std::size_t>(j, "batch_size");
    if (j.contains("init_points"))
        cfg.init_points = get_field<std::size_t>(j, "init_points");
    if (j.contains("total_budget"))
        cfg.total_budget = get_field<std::size_t>(j, "total_budget");
    if (j.contains("seeds")) {
        const auto& s = j.at("seeds");
        cfg.seeds = s.is_string() ? parse_seed_list(s.get<std::string>()) : get_field<std::vector<std::uint64_t>>(j, "seeds");
    }
    if (j.contains("optimiser")) {
        const auto& o = j.at("optimiser");
        if (!o.is_object())
            throw ConfigError("config field 'optimiser' must be an object");
        for (const auto& [key, _] : o.items())
            if (key != "budget_per_dim" && key != "restarts")
                throw ConfigError("unknown optimiser field '" + key + "'");
        if (o.contains("budget_per_dim"))
            cfg.optimiser.budget_per_dim = get_field<std::size_t>(o, "budget_per_dim");
        if (o.contains("restarts"))
            cfg.optimiser.restarts = get_field<std::size_t>(o, "restarts");
    }
    if (j.contains("output"))
        cfg.output = get_field<std::string>(j, "output");
    if (j.contains("fit_restarts"))
        cfg.fit_restarts = get_field<std::size_t>(j, "fit_restarts");
    if (j.contains("record_timing"))
        cfg.record_timing = get_field<bool>(j, "record_timing");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return config_from_json(buffer.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j{
        {"problem", cfg.problem},
        {"method", std::string(to_string(cfg.method))},
        {"batch_size", cfg.batch_size},
        {"init_points", cfg.init_points},
        {"total_budget", cfg.total_budget},
        {"seeds", cfg.seeds},
        {"optimiser", {{"budget_per_dim", cfg.optimiser.budget_per_dim}, {"restarts", cfg.optimiser.restarts}}},
        {"output", cfg.output.string()},
        {"fit_restarts", cfg.fit_restarts},
        {"record_timing", cfg.record_timing},
    };
    return j.dump(2);
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
    auto parse_one = [&](std::string_view s) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
            throw ConfigError("invalid seed '" + std::string(s) + "' in '" + std::string(text) + "'");
        return v;
    };

    std::vector<std::uint64_t> seeds;
    std::string_view rest = text;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        std::string_view item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (const auto dots = item.find(".."); dots != std::string_view::npos) {
            std::string_view lo = item.substr(0, dots), hi = item.substr(dots + 2);
            // accept an "s" prefix as in s0..s9
            if (!lo.empty() && lo.front() == 's')
                lo.remove_prefix(1);
            if (!hi.empty() && hi.front() == 's')
                hi.remove_prefix(1);
            const auto a = parse_one(lo), b = parse_one(hi);
            if (b < a)
                throw ConfigError("descending seed range '" + std::string(item) + "'");
            for (auto s = a; s <= b; ++s)
                seeds.push_back(s);
        } else {
            if (!item.empty() && item.front() == 's')
                item.remove_prefix(1);
            seeds.push_back(parse_one(item));
        }
    }
    if (seeds.empty())
        throw ConfigError("empty seed list");
    return seeds;
}

double observed_regret(const BenchmarkProblem& problem, std::span<const ObjectiveVector> observations) {
    HypervolumeOptions quiet;
    quiet.warn_on_drop = false;
    const ParetoFront found = clip_to_reference(extract_front(observations), problem.ref_point);
    return hv_regret(found, problem.true_front, problem.ref_point, quiet);
}

SeedRun run_seed(const ExperimentConfig& cfg, const BenchmarkProblem& problem, std::uint64_t seed) {
    const std::size_t n = problem.input_dim;
    const std::size_t k = problem.objective_count;
    const std::size_t init = initial_size(cfg, n);
    if (cfg.total_budget < init)
        throw ConfigError("total_budget is smaller than the initial design");

    // Models work on the unit box; the problem is evaluated on its own bounds.
    const SearchSpace unit = SearchSpace::unit_box(n);
    auto evaluate = [&](const DesignPoint& u) { return problem.evaluate(problem.bounds.from_unit(u)); };

    Dataset data;
    const Eigen::MatrixXd design = sobol_points(init, n, mix_seed(seed, 0xD5));
    for (Eigen::Index i = 0; i < design.rows(); ++i) {
        DesignPoint u = design.row(i).transpose();
        auto y = evaluate(u);
        data.add(std::move(u), std::move(y));
    }

    std::vector<StepRecord> records;
    records.push_back({seed, 0, data.size(), observed_regret(problem, data.observations()), 0.0, 0.0});

    BatchOptimiser optimiser{unit, {}, true};
    optimiser.options.budget = cfg.optimiser.budget_per_dim * n;
    optimiser.options.restarts = cfg.optimiser.restarts;

    std::vector<std::optional<KernelHyperparams>> warm(k);
    for (std::size_t step = 1; data.size() < cfg.total_budget; ++step) {
        const std::size_t b = std::min(cfg.batch_size, cfg.total_budget - data.size());
        const std::uint64_t step_seed = mix_seed(seed, step);

        const auto started = Clock::now();
        double batch_time = 0.0;
        std::vector<DesignPoint> batch;
        try {
            if (cfg.method == Method::random) {
                std::mt19937_64 rng(step_seed);
                std::uniform_real_distribution<double> u01(0.0, 1.0);
                for (std::size_t i = 0; i < b; ++i) {
                    DesignPoint u(n);
                    for (std::size_t d = 0; d < n; ++d)
                        u[static_cast<Eigen::Index>(d)] = u01(rng);
                    batch.push_back(std::move(u));
                }
                batch_time = seconds_since(started);
            } else {
                const Eigen::MatrixXd inputs = data.input_matrix();
                std::vector<GpModel> models;
                for (std::size_t i = 0; i < k; ++i) {
                    FitOptions fo;
                    fo.restarts = cfg.fit_restarts;
                    fo.seed = mix_seed(step_seed, 100 + i);
                    fo.warm_start = warm[i];
                    models.push_back(fit(inputs, data.objective_column(i), fo));
                    warm[i] = models.back().hyperparams();
                }
                EhviOptions eo;
                eo.seed = step_seed;
                const AcquisitionContext ctx =
                    make_context(std::move(models), data.observations(), problem.ref_point, eo);

                const auto batch_started = Clock::now();
                switch (cfg.method) {
                case Method::hippo:
                    batch = build_hippo_batch(ctx, b, optimiser, WarpFunction::scaled_arctan(), step_seed).points;
                    break;
                case Method::kb:
                    batch = build_kb_batch(ctx, b, optimiser, step_seed).points;
                    break;
                case Method::sequential_ehvi:
                    // One point per step regardless of batch_size.
                    batch = maximise_ehvi(ctx, optimiser, step_seed).points;
                    break;
                case Method::random:
                    break;
                }
                batch_time = seconds_since(batch_started);
            }
        } catch (const Error& e) {
            throw StepFailure(step, "step " + std::to_string(step) + ": " + e.what());
        }
        const double step_time = seconds_since(started);

        for (auto& u : batch) {
            auto y = evaluate(u);
            data.add(std::move(u), std::move(y));
        }
        StepRecord rec{seed, step, data.size(), observed_regret(problem, data.observations()), 0.0, 0.0};
        if (cfg.record_timing) {
            rec.step_wall_time = step_time;
            rec.batch_wall_time = batch_time;
        }
        records.push_back(rec);
    }
    return {std::move(records), std::move(data)};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const BenchmarkProblem& problem) {
    ExperimentResult result;
    for (const auto seed : cfg.seeds) {
        try {
            auto run = run_seed(cfg, problem, seed);
            result.records.insert(result.records.end(), run.records.begin(), run.records.end());
        } catch (const StepFailure& e) {
            log::warn("seed " + std::to_string(seed) + " failed: " + e.what());
            result.failures.push_back({seed, e.step(), e.what()});
        } catch (const std::exception& e) {
            log::warn("seed " + std::to_string(seed) + " failed: " + e.what());
            result.failures.push_back({seed, 0, e.what()});
        }
    }
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    const BenchmarkProblem problem = make_problem(cfg.problem);
    return run_experiment(cfg, problem);
}

std::filesystem::path csv_path_for(const ExperimentConfig& cfg) {
    return cfg.output / (cfg.problem + "_" + std::string(to_string(cfg.method)) + "_b" + std::to_string(cfg.batch_size) + ".csv");
}

}  // namespace hippo
