#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Core>

namespace hippo {

/// Sobol points in [0,1)^dim with a seeded random digital shift.
/// Row i of the result is the i-th point.
Eigen::MatrixXd sobol_points(std::size_t count, std::size_t dim, std::uint64_t seed);

/// Sobol points pushed through the standard normal quantile.
Eigen::MatrixXd sobol_normal_points(std::size_t count, std::size_t dim, std::uint64_t seed);

double normal_pdf(double z);
double normal_cdf(double z);

/// splitmix64 finaliser applied to a combination of the inputs; used to
/// derive independent sub-seeds (per step, per batch point).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace hippo
