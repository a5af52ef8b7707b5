#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace hippo {

/// Raised for contract violations: dimension mismatches, invalid configs.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point in the (normalised) input space.
using DesignPoint = Eigen::VectorXd;

/// Objective values of one evaluation, minimisation convention.
/// Holds at least two finite entries.
class ObjectiveVector {
public:
    ObjectiveVector() = default;
    explicit ObjectiveVector(std::vector<double> values);
    ObjectiveVector(std::initializer_list<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
    friend auto operator<=>(const ObjectiveVector&, const ObjectiveVector&) = default;

private:
    std::vector<double> values_;
};

/// Paired design points and their observed objectives.
class Dataset {
public:
    void add(DesignPoint x, ObjectiveVector y);

    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    std::size_t input_dim() const noexcept { return points_.empty() ? 0 : points_.front().size(); }
    std::size_t objective_count() const noexcept { return observations_.empty() ? 0 : observations_.front().size(); }

    const std::vector<DesignPoint>& points() const noexcept { return points_; }
    const std::vector<ObjectiveVector>& observations() const noexcept { return observations_; }

    /// Inputs stacked as rows (size() x input_dim()).
    Eigen::MatrixXd input_matrix() const;
    /// One objective column.
    Eigen::VectorXd objective_column(std::size_t i) const;

private:
    std::vector<DesignPoint> points_;
    std::vector<ObjectiveVector> observations_;
};

/// Mutually non-dominated, duplicate-free objective vectors, sorted
/// lexicographically. Only obtainable through extract_front.
class ParetoFront {
public:
    ParetoFront() = default;

    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    std::size_t objective_count() const noexcept { return members_.empty() ? 0 : members_.front().size(); }
    const std::vector<ObjectiveVector>& members() const noexcept { return members_; }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }

    friend bool operator==(const ParetoFront&, const ParetoFront&) = default;

private:
    friend ParetoFront extract_front(std::span<const ObjectiveVector>);
    explicit ParetoFront(std::vector<ObjectiveVector> members) : members_(std::move(members)) {}

    std::vector<ObjectiveVector> members_;
};

/// True iff `a` is no worse than `b` everywhere and strictly better somewhere.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

ParetoFront extract_front(std::span<const ObjectiveVector> observations);

/// Members of `front` that strictly dominate `ref_point` in every coordinate.
ParetoFront clip_to_reference(const ParetoFront& front, const ObjectiveVector& ref_point);

struct HypervolumeOptions {
    /// Sample count of the Monte-Carlo estimator used for k > 3.
    std::size_t mc_samples = 1'000'000;
    std::uint64_t seed = 0;
    /// Print a warning when members not dominating the reference are dropped.
    bool warn_on_drop = true;
};

struct HypervolumeEstimate {
    double value = 0.0;
    /// Zero for the exact k = 2 and k = 3 algorithms.
    double std_error = 0.0;
    std::size_t dropped = 0;
};

/// Dominated volume bounded by `ref_point`: exact sweep for k = 2, exact
/// slicing for k = 3, Monte-Carlo for k > 3.
HypervolumeEstimate hypervolume_estimate(const ParetoFront& front, const ObjectiveVector& ref_point,
                                         const HypervolumeOptions& options = {});

double hypervolume(const ParetoFront& front, const ObjectiveVector& ref_point,
                   const HypervolumeOptions& options = {});

/// HV(true_front) - HV(discovered).
double hv_regret(const ParetoFront& discovered, const ParetoFront& true_front,
                 const ObjectiveVector& ref_point, const HypervolumeOptions& options = {});

namespace detail {
// Exact 2-D sweep over points already known to dominate the reference.
double hypervolume_2d(std::vector<std::pair<double, double>> points, double ref_x, double ref_y);
}  // namespace detail

}  // namespace hippo
