#include "hippo/qmc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/distributions/normal.hpp>
#include <boost/random/sobol.hpp>

namespace hippo {

Eigen::MatrixXd sobol_points(std::size_t count, std::size_t dim, std::uint64_t seed) {
    Eigen::MatrixXd points(count, dim);
    if (count == 0 || dim == 0)
        return points;

    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> shift(dim);
    for (auto& s : shift)
        s = rng();

    boost::random::sobol engine(dim);
    // The first Sobol point is the origin; skip it.
    engine.discard(dim);
    constexpr double scale = 0x1.0p-64;
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t d = 0; d < dim; ++d)
            points(i, d) = static_cast<double>(static_cast<std::uint64_t>(engine()) ^ shift[d]) * scale;
    // Guard against rounding up to exactly 1.0.
    return points.cwiseMin(std::nextafter(1.0, 0.0));
}

Eigen::MatrixXd sobol_normal_points(std::size_t count, std::size_t dim, std::uint64_t seed) {
    Eigen::MatrixXd u = sobol_points(count, dim, seed);
    const boost::math::normal standard;
    constexpr double eps = 1e-12;
    return u.unaryExpr([&](double p) { return boost::math::quantile(standard, std::clamp(p, eps, 1.0 - eps)); });
}

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace hippo
