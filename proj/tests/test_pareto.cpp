#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "hippo/pareto.hpp"
#include "oracles.hpp"

using hippo::ObjectiveVector;
using hippo::ParetoFront;

using oracle::brute_force_front;
using oracle::inclusion_exclusion_hv;
using oracle::near_simplex;
using oracle::random_vectors;

TEST_CASE("dominates follows the minimisation convention") {
    CHECK(hippo::dominates({1, 1}, {2, 2}));
    CHECK_FALSE(hippo::dominates({1, 2}, {2, 1}));
    CHECK_FALSE(hippo::dominates({1, 1}, {1, 1}));
    CHECK(hippo::dominates({1, 2}, {1, 3}));
    CHECK_THROWS_AS(hippo::dominates({1, 1}, {1, 1, 1}), hippo::Error);
}

TEST_CASE("objective vectors reject invalid contents") {
    CHECK_THROWS_AS(ObjectiveVector({1.0}), hippo::Error);
    CHECK_THROWS_AS(ObjectiveVector({1.0, std::nan("")}), hippo::Error);
    CHECK_THROWS_AS(ObjectiveVector({1.0, INFINITY}), hippo::Error);
}

TEST_CASE("dominance is a strict partial order") {
    std::mt19937_64 rng(11);
    // Coarse grid values so ties and comparable pairs are common.
    std::uniform_int_distribution<int> u(0, 3);
    std::vector<ObjectiveVector> ys;
    for (int i = 0; i < 60; ++i)
        ys.push_back({double(u(rng)), double(u(rng)), double(u(rng))});
    for (const auto& a : ys) {
        CHECK_FALSE(hippo::dominates(a, a));
        for (const auto& b : ys) {
            if (hippo::dominates(a, b))
                CHECK_FALSE(hippo::dominates(b, a));
            for (const auto& c : ys)
                if (hippo::dominates(a, b) && hippo::dominates(b, c))
                    CHECK(hippo::dominates(a, c));
        }
    }
}

TEST_CASE("extract_front examples") {
    const std::vector<ObjectiveVector> ys{{1, 2}, {2, 1}, {2, 2}};
    const auto front = hippo::extract_front(ys);
    REQUIRE(front.size() == 2);
    CHECK(front.members()[0] == ObjectiveVector{1, 2});
    CHECK(front.members()[1] == ObjectiveVector{2, 1});

    const std::vector<ObjectiveVector> single{{0, 0}};
    CHECK(hippo::extract_front(single).size() == 1);
    CHECK(hippo::extract_front({}).empty());

    const std::vector<ObjectiveVector> dupes{{1, 2}, {1, 2}, {2, 1}};
    CHECK(hippo::extract_front(dupes).size() == 2);

    const std::vector<ObjectiveVector> mixed{{1, 2}, {1, 2, 3}};
    CHECK_THROWS_AS(hippo::extract_front(mixed), hippo::Error);
}

TEST_CASE("extract_front matches the pairwise brute-force scan") {
    std::mt19937_64 rng(3);
    for (std::size_t k : {2u, 3u, 4u}) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto ys = random_vectors(rng, 100, k);
            const auto front = hippo::extract_front(ys);
            const std::set<ObjectiveVector> got(front.begin(), front.end());
            CHECK(got == brute_force_front(ys));
        }
    }
}

TEST_CASE("extract_front is idempotent") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const auto ys = near_simplex(rng, 80, 3);
        const auto once = hippo::extract_front(ys);
        const auto twice = hippo::extract_front(once.members());
        CHECK(once == twice);
    }
}

TEST_CASE("hypervolume examples") {
    const std::vector<ObjectiveVector> origin{{0, 0}};
    CHECK(hippo::hypervolume(hippo::extract_front(origin), {1, 1}) == doctest::Approx(1.0));

    const std::vector<ObjectiveVector> pair{{1, 2}, {2, 1}};
    CHECK(std::abs(hippo::hypervolume(hippo::extract_front(pair), {3, 3}) - 3.0) < 1e-10);

    CHECK(hippo::hypervolume(ParetoFront{}, {1, 1}) == 0.0);
    CHECK_THROWS_AS(hippo::hypervolume(hippo::extract_front(pair), {3, 3, 3}), hippo::Error);
}

TEST_CASE("members not dominating the reference are dropped") {
    hippo::HypervolumeOptions quiet;
    quiet.warn_on_drop = false;
    const std::vector<ObjectiveVector> ys{{0.5, 0.5}, {2, 0}, {1, 1}};
    const auto est = hippo::hypervolume_estimate(hippo::extract_front(ys), {1, 1}, quiet);
    CHECK(est.dropped == 1);  // (1,1) is dominated by (0.5,0.5); (2,0) lies outside
    CHECK(est.value == doctest::Approx(0.25));
}

TEST_CASE("2-D and 3-D hypervolume equal inclusion-exclusion") {
    std::mt19937_64 rng(17);
    for (std::size_t k : {2u, 3u}) {
        for (int trial = 0; trial < 30; ++trial) {
            const auto front = hippo::extract_front(near_simplex(rng, 10, k));
            const std::vector<ObjectiveVector> members(front.begin(), front.end());
            const ObjectiveVector ref(std::vector<double>(k, 1.2));
            CHECK(hippo::hypervolume(front, ref) == doctest::Approx(inclusion_exclusion_hv(members, ref)).epsilon(1e-12));
        }
    }
}

TEST_CASE("2-D sweep agrees with a Monte-Carlo oracle within 3 standard errors") {
    std::mt19937_64 rng(23);
    int within = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto front = hippo::extract_front(near_simplex(rng, 12, 2));
        const std::vector<ObjectiveVector> members(front.begin(), front.end());
        const ObjectiveVector ref{1.1, 1.1};
        const auto mc = oracle::monte_carlo_hv(members, ref, 0.0, 200'000, 100 + trial);
        within += std::abs(hippo::hypervolume(front, ref) - mc.value) <= 3.0 * mc.se;
    }
    // 3-sigma coverage is ~99.7%; allow a couple of outliers.
    CHECK(within >= 48);
}

TEST_CASE("4-D Monte-Carlo hypervolume reports a usable standard error") {
    std::mt19937_64 rng(29);
    const auto front = hippo::extract_front(near_simplex(rng, 8, 4));
    const std::vector<ObjectiveVector> members(front.begin(), front.end());
    const ObjectiveVector ref(std::vector<double>(4, 1.1));
    hippo::HypervolumeOptions opts;
    opts.mc_samples = 400'000;
    opts.seed = 4;
    const auto est = hippo::hypervolume_estimate(front, ref, opts);
    CHECK(est.std_error > 0.0);
    CHECK(std::abs(est.value - inclusion_exclusion_hv(members, ref)) <= 4.0 * est.std_error);
}

TEST_CASE("hypervolume is monotone under insertion") {
    std::mt19937_64 rng(31);
    const ObjectiveVector ref{1.2, 1.2};
    for (int trial = 0; trial < 20; ++trial) {
        auto ys = near_simplex(rng, 15, 2);
        const double before = hippo::hypervolume(hippo::extract_front(ys), ref);
        const auto front = hippo::extract_front(ys);

        // a point dominated by an existing member changes nothing
        const auto& anchor = front.members().front();
        auto with_dominated = ys;
        with_dominated.push_back({anchor[0] + 0.01, anchor[1] + 0.01});
        CHECK(hippo::hypervolume(hippo::extract_front(with_dominated), ref) == doctest::Approx(before).epsilon(1e-14));

        auto with_new = ys;
        with_new.push_back(near_simplex(rng, 1, 2).front());
        CHECK(hippo::hypervolume(hippo::extract_front(with_new), ref) >= before - 1e-15);
    }
}

TEST_CASE("hv_regret examples and monotonicity") {
    std::mt19937_64 rng(37);
    const ObjectiveVector ref{1.2, 1.2};
    const auto truth = hippo::extract_front(near_simplex(rng, 40, 2));
    CHECK(hippo::hv_regret(truth, truth, ref) == 0.0);
    CHECK(hippo::hv_regret({}, truth, ref) == doctest::Approx(hippo::hypervolume(truth, ref)));

    // discovered: the true front shifted up, i.e. strictly dominated
    std::vector<ObjectiveVector> shifted;
    for (const auto& y : truth)
        shifted.push_back({y[0] + 0.05, y[1] + 0.05});
    const auto discovered = hippo::extract_front(shifted);
    const double regret = hippo::hv_regret(discovered, truth, ref);
    CHECK(regret > 0.0);
    CHECK(regret == doctest::Approx(hippo::hypervolume(truth, ref) - hippo::hypervolume(discovered, ref)));

    std::vector<ObjectiveVector> grown;
    double last = hippo::hv_regret({}, truth, ref);
    for (const auto& y : shifted) {
        grown.push_back(y);
        const double now = hippo::hv_regret(hippo::extract_front(grown), truth, ref);
        CHECK(now <= last + 1e-15);
        last = now;
    }
}
