#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hippo/optimiser.hpp"
#include "hippo/pareto.hpp"

namespace hippo {

/// A black-box test problem with its known Pareto front.
struct BenchmarkProblem {
    std::string name;
    std::size_t input_dim = 0;
    std::size_t objective_count = 0;
    SearchSpace bounds;
    std::function<ObjectiveVector(const DesignPoint&)> evaluate;
    ParetoFront true_front;
    ObjectiveVector ref_point;
};

ObjectiveVector vlmop2(const DesignPoint& x);
/// DTLZ2 with the distance function over the last n - k + 1 coordinates.
ObjectiveVector dtlz2(const DesignPoint& x, std::size_t objectives = 2);

/// Standard six-dimensional Hartmann function on [0,1]^6 (minimum about -3.32237).
double hartmann6(const DesignPoint& x);
/// Ackley function on its native coordinates (minimum 0 at the origin).
double ackley(const DesignPoint& z);
/// (Hartmann-6(x), Ackley(4x - 2)) for x in [0,1]^6.
ObjectiveVector hartmann_ackley(const DesignPoint& x);

/// Dense samples of the analytic fronts.
ParetoFront vlmop2_front(std::size_t samples = 2000);
ParetoFront dtlz2_front(std::size_t samples = 2000);

/// Per axis: worst front value plus 10% of the front's extent.
ObjectiveVector reference_from_front(const ParetoFront& front, double inflation = 0.1);

BenchmarkProblem make_vlmop2();
BenchmarkProblem make_dtlz2(std::size_t input_dim = 6);
/// Loads the precomputed front from `<data dir>/hartmann_ackley_front.csv`.
BenchmarkProblem make_hartmann_ackley();
BenchmarkProblem make_hartmann_ackley(const ParetoFront& true_front);

/// One of "vlmop2", "dtlz2", "hartmann_ackley".
BenchmarkProblem make_problem(std::string_view name);
std::vector<std::string> problem_names();

/// $HIPPO_DATA_DIR if set, else the data directory of the source tree.
std::filesystem::path data_directory();

/// CSV with header f1,f2,...; one objective vector per row.
ParetoFront read_front_csv(const std::filesystem::path& path);
void write_front_csv(const ParetoFront& front, const std::filesystem::path& path);

}  // namespace hippo
