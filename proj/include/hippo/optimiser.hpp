#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "hippo/pareto.hpp"

namespace hippo {

/// One search dimension: a continuous interval or a finite value set.
struct Dimension {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> values;  ///< sorted; non-empty for discrete dimensions

    bool discrete() const noexcept { return !values.empty(); }
};

class SearchSpace {
public:
    SearchSpace() = default;
    static SearchSpace unit_box(std::size_t n);

    SearchSpace& add_continuous(double lo, double hi);
    SearchSpace& add_discrete(std::vector<double> values);

    std::size_t size() const noexcept { return dims_.size(); }
    const Dimension& operator[](std::size_t i) const { return dims_[i]; }
    const std::vector<Dimension>& dimensions() const noexcept { return dims_; }

    bool contains(const DesignPoint& x) const;
    /// Maps a point of [0,1)^n onto the space.
    DesignPoint from_unit(const Eigen::Ref<const Eigen::VectorXd>& u) const;
    /// Inverse of from_unit on continuous dimensions (discrete ones map to bin centres).
    Eigen::VectorXd to_unit(const DesignPoint& x) const;

private:
    std::vector<Dimension> dims_;
};

using ScalarFunction = std::function<double(const DesignPoint&)>;

struct MaximiseOptions {
    /// Space-filling samples; 0 selects 2000 per dimension.
    std::size_t budget = 0;
    /// Number of best samples refined by pattern search.
    std::size_t restarts = 5;
    std::uint64_t seed = 0;
    /// Evaluation cap per refinement; 0 selects 100 per dimension + 100.
    std::size_t refine_evaluations = 0;
    /// Pattern-search step below which a continuous coordinate is settled,
    /// relative to the dimension's width.
    double min_step = 1e-6;
};

struct MaximiseResult {
    DesignPoint x;
    double value = 0.0;
    std::size_t evaluations = 0;
    /// Best value among the space-filling samples alone.
    double sample_value = 0.0;
};

/// Derivative-free maximisation: scrambled Sobol sampling followed by
/// compass/pattern search from the best `restarts` samples. Non-finite
/// values count as -inf. Throws if every sample is non-finite.
MaximiseResult maximise(const ScalarFunction& f, const SearchSpace& space, const MaximiseOptions& options = {});

}  // namespace hippo
