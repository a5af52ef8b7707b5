#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "hippo/optimiser.hpp"
#include "hippo/qmc.hpp"

using hippo::DesignPoint;
using hippo::SearchSpace;

namespace {

// Negated Branin on its usual domain, so the maximum is about -0.397887.
double neg_branin(double x1, double x2) {
    const double pi = std::numbers::pi;
    const double b = 5.1 / (4 * pi * pi), c = 5 / pi, t = 1 / (8 * pi);
    const double u = x2 - b * x1 * x1 + c * x1 - 6;
    return -(u * u + 10 * (1 - t) * std::cos(x1) + 10);
}

}  // namespace

TEST_CASE("search space construction and membership") {
    SearchSpace s;
    s.add_continuous(-1.0, 2.0).add_discrete({3.0, 1.0, 2.0});
    REQUIRE(s.size() == 2);
    CHECK(s[1].discrete());
    CHECK(s[1].values == std::vector<double>{1.0, 2.0, 3.0});
    DesignPoint x(2);
    x << 0.5, 2.0;
    CHECK(s.contains(x));
    x << 0.5, 2.5;
    CHECK_FALSE(s.contains(x));
    x << 2.5, 2.0;
    CHECK_FALSE(s.contains(x));
    CHECK_THROWS_AS(SearchSpace().add_continuous(1.0, 1.0), hippo::Error);
    CHECK_THROWS_AS(SearchSpace().add_discrete({}), hippo::Error);

    const auto unit = SearchSpace::unit_box(3);
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(3, 0.25);
    CHECK(unit.from_unit(u) == u);
    CHECK(unit.to_unit(u) == u);
}

TEST_CASE("unique quadratic maximum") {
    const auto space = SearchSpace::unit_box(1);
    hippo::MaximiseOptions opts;
    opts.budget = 1000;
    const auto r = hippo::maximise([](const DesignPoint& x) { return -(x[0] - 0.5) * (x[0] - 0.5); }, space, opts);
    CHECK(std::abs(r.x[0] - 0.5) < 1e-2);
    CHECK(r.value >= r.sample_value);
}

TEST_CASE("constant objective") {
    const auto space = SearchSpace::unit_box(2);
    const auto r = hippo::maximise([](const DesignPoint&) { return 3.5; }, space);
    CHECK(r.value == 3.5);
    CHECK(space.contains(r.x));
}

TEST_CASE("Branin is within 1% of a dense grid scan") {
    SearchSpace space;
    space.add_continuous(-5.0, 10.0).add_continuous(0.0, 15.0);
    double grid_best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 1000; ++i)
        for (int j = 0; j < 1000; ++j)
            grid_best = std::max(grid_best, neg_branin(-5.0 + 15.0 * i / 999.0, 15.0 * j / 999.0));
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        hippo::MaximiseOptions opts;
        opts.seed = seed;
        const auto r = hippo::maximise([](const DesignPoint& x) { return neg_branin(x[0], x[1]); }, space, opts);
        CHECK(r.value >= grid_best - 0.01 * std::abs(grid_best));
        CHECK(space.contains(r.x));
    }
}

TEST_CASE("refinement never regresses below the best sample") {
    const auto space = SearchSpace::unit_box(3);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        hippo::MaximiseOptions opts;
        opts.seed = seed;
        opts.budget = 64;
        const auto f = [](const DesignPoint& x) {
            return std::sin(9 * x[0]) * std::cos(7 * x[1]) + x[2] * x[2] - 0.3 * x[0];
        };
        const auto r = hippo::maximise(f, space, opts);
        CHECK(r.value >= r.sample_value);
        CHECK(r.value == f(r.x));

        // the sample phase uses the first `budget` points of the seeded sequence
        const auto pts = hippo::sobol_points(64, 3, seed);
        double best = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < pts.rows(); ++i)
            best = std::max(best, f(space.from_unit(pts.row(i).transpose())));
        CHECK(r.sample_value >= best);
    }
}

TEST_CASE("maximise is deterministic for a fixed seed") {
    const auto space = SearchSpace::unit_box(2);
    const auto f = [](const DesignPoint& x) { return std::cos(12 * x[0]) + std::sin(5 * x[1] * x[0]); };
    hippo::MaximiseOptions opts;
    opts.seed = 77;
    const auto a = hippo::maximise(f, space, opts), b = hippo::maximise(f, space, opts);
    CHECK(a.x == b.x);
    CHECK(a.value == b.value);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("returned points respect bounds when the optimum is on the boundary") {
    SearchSpace space;
    space.add_continuous(-2.0, 3.0).add_continuous(0.5, 0.75);
    const auto r = hippo::maximise([](const DesignPoint& x) { return x[0] - x[1]; }, space);
    CHECK(space.contains(r.x));
    CHECK(r.x[0] == doctest::Approx(3.0).epsilon(1e-5));
    CHECK(r.x[1] == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("discrete dimensions") {
    SearchSpace space;
    space.add_continuous(0.0, 1.0).add_discrete({0.0, 0.1, 0.25, 0.5, 1.0, 2.0});
    const auto r = hippo::maximise(
        [](const DesignPoint& x) { return -(x[0] - 0.3) * (x[0] - 0.3) - (x[1] - 0.4) * (x[1] - 0.4); }, space);
    CHECK(space.contains(r.x));
    CHECK(r.x[1] == 0.5);
    CHECK(std::abs(r.x[0] - 0.3) < 1e-3);

    SearchSpace all_discrete;
    all_discrete.add_discrete({1.0, 2.0, 3.0}).add_discrete({-1.0, 0.0});
    const auto d = hippo::maximise([](const DesignPoint& x) { return x[0] * x[1] + x[0]; }, all_discrete);
    CHECK(d.x[0] == 3.0);
    CHECK(d.x[1] == 0.0);
}

TEST_CASE("non-finite values") {
    const auto space = SearchSpace::unit_box(1);
    const auto partial = hippo::maximise(
        [](const DesignPoint& x) { return x[0] < 0.5 ? std::numeric_limits<double>::quiet_NaN() : -x[0]; }, space);
    CHECK(std::isfinite(partial.value));
    CHECK(partial.x[0] >= 0.5);
    CHECK_THROWS_AS(hippo::maximise([](const DesignPoint&) { return std::numeric_limits<double>::quiet_NaN(); }, space),
                    hippo::Error);
}
