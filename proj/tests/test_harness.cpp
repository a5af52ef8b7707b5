#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hippo/harness.hpp"
#include "hippo/log.hpp"
#include "hippo/report.hpp"

namespace fs = std::filesystem;

namespace {

hippo::ExperimentConfig quick_config(hippo::Method method, std::size_t batch) {
    hippo::ExperimentConfig cfg;
    cfg.problem = "vlmop2";
    cfg.method = method;
    cfg.batch_size = batch;
    cfg.init_points = 6;
    cfg.total_budget = 14;
    cfg.seeds = {3};
    cfg.optimiser.budget_per_dim = 150;
    cfg.optimiser.restarts = 2;
    cfg.fit_restarts = 1;
    cfg.record_timing = false;
    return cfg;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("hippo_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Percentile straight from the definition: sort, index (n-1)q, interpolate.
double sorted_percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

TEST_CASE("method names") {
    for (const auto m : {hippo::Method::hippo, hippo::Method::kb, hippo::Method::random, hippo::Method::sequential_ehvi})
        CHECK(hippo::parse_method(hippo::to_string(m)) == m);
    CHECK(hippo::to_string(hippo::Method::sequential_ehvi) == "sequential-ehvi");
    CHECK_THROWS_AS(hippo::parse_method("qehvi"), hippo::ConfigError);
}

TEST_CASE("seed lists") {
    CHECK(hippo::parse_seed_list("0..3") == std::vector<std::uint64_t>{0, 1, 2, 3});
    CHECK(hippo::parse_seed_list("1,4,7") == std::vector<std::uint64_t>{1, 4, 7});
    CHECK(hippo::parse_seed_list("s0..s2") == std::vector<std::uint64_t>{0, 1, 2});
    CHECK(hippo::parse_seed_list("0..1,10") == std::vector<std::uint64_t>{0, 1, 10});
    CHECK_THROWS_AS(hippo::parse_seed_list(""), hippo::ConfigError);
    CHECK_THROWS_AS(hippo::parse_seed_list("3..1"), hippo::ConfigError);
    CHECK_THROWS_AS(hippo::parse_seed_list("a,b"), hippo::ConfigError);
}

TEST_CASE("config JSON") {
    const auto cfg = hippo::config_from_json(R"({
        "problem": "dtlz2", "method": "kb", "batch_size": 5, "init_points": 8,
        "total_budget": 48, "seeds": "0..2", "optimiser": {"budget_per_dim": 100, "restarts": 3},
        "output": "out", "fit_restarts": 2, "record_timing": false})");
    CHECK(cfg.problem == "dtlz2");
    CHECK(cfg.method == hippo::Method::kb);
    CHECK(cfg.batch_size == 5);
    CHECK(cfg.init_points == 8);
    CHECK(cfg.total_budget == 48);
    CHECK(cfg.seeds == std::vector<std::uint64_t>{0, 1, 2});
    CHECK(cfg.optimiser.budget_per_dim == 100);
    CHECK(cfg.optimiser.restarts == 3);
    CHECK(cfg.output == fs::path("out"));
    CHECK(cfg.fit_restarts == 2);
    CHECK_FALSE(cfg.record_timing);

    const auto round = hippo::config_from_json(hippo::config_to_json(cfg));
    CHECK(hippo::config_to_json(round) == hippo::config_to_json(cfg));

    CHECK(hippo::config_from_json(R"({"seeds": [4, 5]})").seeds == std::vector<std::uint64_t>{4, 5});
    CHECK_THROWS_AS(hippo::config_from_json("{"), hippo::ConfigError);
    CHECK_THROWS_AS(hippo::config_from_json("[]"), hippo::ConfigError);
    CHECK_THROWS_AS(hippo::config_from_json(R"({"batchsize": 4})"), hippo::ConfigError);
    CHECK_THROWS_AS(hippo::config_from_json(R"({"batch_size": "four"})"), hippo::ConfigError);
    CHECK_THROWS_AS(hippo::config_from_json(R"({"optimiser": {"iters": 1}})"), hippo::ConfigError);
    CHECK_THROWS_AS(hippo::load_config("/nonexistent/config.json"), hippo::ConfigError);
}

TEST_CASE("config validation") {
    hippo::log::warnings_enabled() = false;
    auto cfg = quick_config(hippo::Method::hippo, 4);
    CHECK_NOTHROW(hippo::validate(cfg));
    cfg.problem = "zdt1";
    CHECK_THROWS_AS(hippo::validate(cfg), hippo::ConfigError);
    cfg = quick_config(hippo::Method::hippo, 0);
    CHECK_THROWS_AS(hippo::validate(cfg), hippo::ConfigError);
    cfg = quick_config(hippo::Method::hippo, 4);
    cfg.init_points = 1;
    CHECK_THROWS_AS(hippo::validate(cfg), hippo::ConfigError);
    cfg = quick_config(hippo::Method::hippo, 4);
    cfg.seeds.clear();
    CHECK_THROWS_AS(hippo::validate(cfg), hippo::ConfigError);
    cfg = quick_config(hippo::Method::hippo, 4);
    cfg.total_budget = 3;
    CHECK_THROWS_AS(hippo::validate(cfg), hippo::ConfigError);
    cfg = quick_config(hippo::Method::hippo, 3);  // 8 evaluations in batches of 3: allowed
    CHECK_NOTHROW(hippo::validate(cfg));
    hippo::log::warnings_enabled() = true;
}

TEST_CASE("random baseline: regret is non-increasing and evaluations are exact") {
    auto cfg = quick_config(hippo::Method::random, 3);
    cfg.total_budget = 30;
    cfg.seeds = {0, 1};
    const auto result = hippo::run_experiment(cfg);
    REQUIRE(result.failures.empty());
    for (const auto seed : cfg.seeds) {
        std::vector<hippo::StepRecord> rows;
        for (const auto& r : result.records)
            if (r.seed == seed)
                rows.push_back(r);
        REQUIRE(rows.size() == 1 + 8);  // 24 evaluations: 8 batches of 3
        CHECK(rows.front().evaluations == 6);
        CHECK(rows.back().evaluations == 30);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            CHECK(rows[i].evaluations > rows[i - 1].evaluations);
            CHECK(rows[i].hv_regret <= rows[i - 1].hv_regret);
            CHECK(rows[i].step == i);
        }
    }
}

TEST_CASE("partial final batch") {
    hippo::log::warnings_enabled() = false;
    auto cfg = quick_config(hippo::Method::hippo, 3);
    cfg.total_budget = 13;  // 7 evaluations: 3 + 3 + 1
    const auto run = hippo::run_seed(cfg, hippo::make_problem("vlmop2"), 1);
    hippo::log::warnings_enabled() = true;
    REQUIRE(run.records.size() == 4);
    CHECK(run.records[1].evaluations == 9);
    CHECK(run.records[2].evaluations == 12);
    CHECK(run.records[3].evaluations == 13);
    CHECK(run.history.size() == 13);
}

TEST_CASE("HIPPO with b = 1 reproduces sequential EHVI") {
    const auto problem = hippo::make_problem("vlmop2");
    auto hippo_cfg = quick_config(hippo::Method::hippo, 1);
    hippo_cfg.total_budget = 10;
    auto seq_cfg = hippo_cfg;
    seq_cfg.method = hippo::Method::sequential_ehvi;
    const auto a = hippo::run_seed(hippo_cfg, problem, 5);
    const auto b = hippo::run_seed(seq_cfg, problem, 5);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i)
        CHECK(a.history.points()[i] == b.history.points()[i]);
    CHECK(a.records == b.records);
}

TEST_CASE("all methods produce byte-identical CSV on reruns") {
    for (const auto m : {hippo::Method::hippo, hippo::Method::kb, hippo::Method::random, hippo::Method::sequential_ehvi}) {
        CAPTURE(hippo::to_string(m));
        auto cfg = quick_config(m, 2);
        cfg.seeds = {0, 1};
        const auto dir = scratch("det");
        const auto first = hippo::run_experiment(cfg);
        const auto second = hippo::run_experiment(cfg);
        hippo::write_csv(first.records, dir / "a.csv");
        hippo::write_csv(second.records, dir / "b.csv");
        CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
        fs::remove_all(dir);
    }
}

TEST_CASE("timing columns") {
    auto cfg = quick_config(hippo::Method::kb, 4);
    cfg.record_timing = true;
    const auto result = hippo::run_experiment(cfg);
    REQUIRE(result.records.size() == 3);
    CHECK(result.records[0].step_wall_time == 0.0);
    for (std::size_t i = 1; i < result.records.size(); ++i) {
        CHECK(result.records[i].step_wall_time > 0.0);
        CHECK(result.records[i].batch_wall_time > 0.0);
        CHECK(result.records[i].batch_wall_time <= result.records[i].step_wall_time);
    }
}

TEST_CASE("seed isolation") {
    auto cfg = quick_config(hippo::Method::hippo, 4);
    cfg.seeds = {2, 7};
    const auto forward = hippo::run_experiment(cfg);
    cfg.seeds = {7, 2};
    const auto backward = hippo::run_experiment(cfg);
    for (const std::uint64_t seed : {2u, 7u}) {
        std::vector<hippo::StepRecord> a, b;
        for (const auto& r : forward.records)
            if (r.seed == seed)
                a.push_back(r);
        for (const auto& r : backward.records)
            if (r.seed == seed)
                b.push_back(r);
        CHECK(a == b);
        CHECK_FALSE(a.empty());
    }
}

TEST_CASE("CSV output") {
    CHECK(hippo::format_csv({}) == std::string(hippo::kCsvHeader) + "\n");

    const std::vector<hippo::StepRecord> one{{4, 0, 6, 0.125, 0.0, 0.0}};
    const auto text = hippo::format_csv(one);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    CHECK(text == std::string(hippo::kCsvHeader) + "\n4,0,6,0.125,0\n");

    const std::vector<hippo::StepRecord> many{{0, 0, 6, 0.3333333333333333, 0.0, 0.0},
                                              {0, 1, 10, 1e-17, 0.0123456789, 0.0},
                                              {9, 0, 6, 0.0, 1234.5, 0.0}};
    const auto parsed = hippo::parse_csv(hippo::format_csv(many));
    CHECK(parsed == many);

    const auto dir = scratch("csv");
    hippo::write_csv(many, dir / "x.csv");
    CHECK(hippo::read_csv(dir / "x.csv") == many);
    hippo::write_csv(many, dir / "nested" / "x.csv");
    CHECK(hippo::read_csv(dir / "nested" / "x.csv") == many);
    CHECK_THROWS_AS(hippo::write_csv(many, dir / "x.csv" / "y.csv"), hippo::Error);
    fs::remove_all(dir);

    CHECK_THROWS_AS(hippo::parse_csv(""), hippo::Error);
    CHECK_THROWS_AS(hippo::parse_csv("a,b\n"), hippo::Error);
    CHECK_THROWS_AS(hippo::parse_csv(std::string(hippo::kCsvHeader) + "\n1,2,3\n"), hippo::Error);
    CHECK_THROWS_AS(hippo::parse_csv(std::string(hippo::kCsvHeader) + "\n1,2,x,4,5\n"), hippo::Error);
}

TEST_CASE("csv path naming") {
    auto cfg = quick_config(hippo::Method::sequential_ehvi, 4);
    cfg.output = "res";
    CHECK(hippo::csv_path_for(cfg) == fs::path("res") / "vlmop2_sequential-ehvi_b4.csv");
}

TEST_CASE("percentiles match a sort-based oracle") {
    const std::vector<double> v{5.0, 1.0, 4.0, 2.0, 3.0, 10.0, -1.0};
    for (double q : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0})
        CHECK(hippo::percentile(v, q) == doctest::Approx(sorted_percentile(v, q)).epsilon(1e-15));
    CHECK(hippo::percentile({7.0}, 0.25) == 7.0);
    CHECK_THROWS_AS(hippo::percentile({}, 0.5), hippo::Error);
    CHECK_THROWS_AS(hippo::percentile({1.0}, 1.5), hippo::Error);
}

TEST_CASE("regret bands") {
    std::vector<hippo::StepRecord> records;
    const std::vector<std::vector<double>> regrets{{1.0, 0.6, 0.2}, {0.9, 0.5, 0.4}, {1.2, 0.7, 0.1}, {0.8, 0.8, 0.3}};
    for (std::size_t s = 0; s < regrets.size(); ++s)
        for (std::size_t i = 0; i < 3; ++i)
            records.push_back({s, i, 6 + 4 * i, regrets[s][i], 0.0, 0.0});
    const auto band = hippo::summarise_regret(records);
    CHECK(band.seeds == 4);
    REQUIRE(band.evaluations == std::vector<double>{6, 10, 14});
    for (std::size_t i = 0; i < 3; ++i) {
        std::vector<double> column;
        for (const auto& r : regrets)
            column.push_back(r[i]);
        double mean = 0.0;
        for (double c : column)
            mean += c / 4.0;
        CHECK(band.mean[i] == doctest::Approx(mean));
        CHECK(band.p25[i] == doctest::Approx(sorted_percentile(column, 0.25)));
        CHECK(band.p75[i] == doctest::Approx(sorted_percentile(column, 0.75)));
    }

    SUBCASE("a single seed collapses the band onto the mean") {
        const std::vector<hippo::StepRecord> single(records.begin(), records.begin() + 3);
        const auto b = hippo::summarise_regret(single);
        CHECK(b.p25 == b.mean);
        CHECK(b.p75 == b.mean);
    }

    SUBCASE("mismatched grids are resampled onto the coarsest") {
        hippo::log::warnings_enabled() = false;
        std::vector<hippo::StepRecord> mixed(records.begin(), records.begin() + 3);  // 6, 10, 14
        for (std::size_t i = 0; i < 5; ++i)
            mixed.push_back({1, i, 6 + 2 * i, 1.0 - 0.1 * static_cast<double>(i), 0.0, 0.0});  // 6, 8, ..., 14
        const auto b = hippo::summarise_regret(mixed);
        hippo::log::warnings_enabled() = true;
        REQUIRE(b.evaluations == std::vector<double>{6, 10, 14});
        CHECK(b.mean[1] == doctest::Approx((0.6 + 0.8) / 2.0));
        CHECK(b.mean[2] == doctest::Approx((0.2 + 0.6) / 2.0));
    }
}

TEST_CASE("regret SVG") {
    std::vector<hippo::StepRecord> a, b;
    for (std::size_t i = 0; i < 4; ++i) {
        a.push_back({0, i, 6 + 4 * i, 1.0 / static_cast<double>(i + 1), 0.0, 0.0});
        b.push_back({0, i, 6 + 4 * i, 1.5 / static_cast<double>(i + 1), 0.0, 0.0});
    }
    const std::vector<hippo::LabelledBand> series{{"hippo", hippo::summarise_regret(a)},
                                                  {"random", hippo::summarise_regret(b)}};
    const auto svg = hippo::render_regret_svg(series, "VLMOP2");
    CHECK((svg.starts_with("<svg") || svg.starts_with("<?xml")));
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find(R"(data-label="hippo")") != std::string::npos);
    CHECK(svg.find(R"(data-label="random")") != std::string::npos);
    CHECK(svg.find("VLMOP2") != std::string::npos);

    const auto dir = scratch("svg");
    hippo::write_csv(a, dir / "vlmop2_hippo_b4.csv");
    hippo::write_csv(b, dir / "vlmop2_random_b4.csv");
    const auto loaded = hippo::load_regret_bands(dir);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].first == "vlmop2_hippo_b4");
    CHECK(loaded[1].first == "vlmop2_random_b4");
    hippo::write_regret_svg(loaded, dir / "plot.svg");
    CHECK(fs::file_size(dir / "plot.svg") > 0);
    fs::remove_all(dir);
}
