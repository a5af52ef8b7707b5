#include "hippo/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "hippo/log.hpp"

namespace hippo {

namespace {

void check_objective_values(const std::vector<double>& values) {
    if (values.size() < 2)
        throw Error("objective vector needs at least two objectives, got " + std::to_string(values.size()));
    for (double v : values)
        if (!std::isfinite(v))
            throw Error("objective vector has a non-finite entry");
}

void check_same_size(const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a.size() != b.size())
        throw Error("objective dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
}

bool strictly_dominates_reference(const ObjectiveVector& y, const ObjectiveVector& ref) {
    for (std::size_t i = 0; i < y.size(); ++i)
        if (!(y[i] < ref[i]))
            return false;
    return true;
}

double hypervolume_3d(std::vector<ObjectiveVector> points, const ObjectiveVector& ref) {
    std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a[2] < b[2]; });
    double volume = 0.0;
    std::vector<std::pair<double, double>> slice;
    slice.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        slice.emplace_back(points[i][0], points[i][1]);
        const double upper = (i + 1 < points.size()) ? points[i + 1][2] : ref[2];
        const double depth = upper - points[i][2];
        if (depth > 0.0)
            volume += depth * detail::hypervolume_2d(slice, ref[0], ref[1]);
    }
    return volume;
}

HypervolumeEstimate hypervolume_monte_carlo(const std::vector<ObjectiveVector>& points, const ObjectiveVector& ref,
                                            const HypervolumeOptions& options) {
    const std::size_t k = ref.size();
    std::vector<double> lower(k);
    for (std::size_t d = 0; d < k; ++d) {
        lower[d] = ref[d];
        for (const auto& p : points)
            lower[d] = std::min(lower[d], p[d]);
    }
    double box = 1.0;
    for (std::size_t d = 0; d < k; ++d)
        box *= ref[d] - lower[d];

    std::mt19937_64 rng(options.seed);
    std::vector<std::uniform_real_distribution<double>> axes;
    for (std::size_t d = 0; d < k; ++d)
        axes.emplace_back(lower[d], ref[d]);

    const std::size_t n = std::max<std::size_t>(options.mc_samples, 1);
    std::vector<double> sample(k);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t d = 0; d < k; ++d)
            sample[d] = axes[d](rng);
        for (const auto& p : points) {
            bool covers = true;
            for (std::size_t d = 0; d < k && covers; ++d)
                covers = p[d] <= sample[d];
            if (covers) {
                ++hits;
                break;
            }
        }
    }
    const double frac = static_cast<double>(hits) / static_cast<double>(n);
    return {box * frac, box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(n)), 0};
}

}  // namespace

ObjectiveVector::ObjectiveVector(std::vector<double> values) : values_(std::move(values)) {
    check_objective_values(values_);
}

ObjectiveVector::ObjectiveVector(std::initializer_list<double> values) : values_(values) {
    check_objective_values(values_);
}

void Dataset::add(DesignPoint x, ObjectiveVector y) {
    if (x.size() < 1)
        throw Error("design point must have at least one coordinate");
    if (!points_.empty()) {
        if (static_cast<std::size_t>(x.size()) != input_dim())
            throw Error("design point dimension mismatch");
        if (y.size() != objective_count())
            throw Error("observation objective count mismatch");
    }
    points_.push_back(std::move(x));
    observations_.push_back(std::move(y));
}

Eigen::MatrixXd Dataset::input_matrix() const {
    Eigen::MatrixXd m(size(), input_dim());
    for (std::size_t i = 0; i < size(); ++i)
        m.row(i) = points_[i].transpose();
    return m;
}

Eigen::VectorXd Dataset::objective_column(std::size_t i) const {
    if (i >= objective_count())
        throw Error("objective index out of range");
    Eigen::VectorXd col(size());
    for (std::size_t r = 0; r < size(); ++r)
        col[r] = observations_[r][i];
    return col;
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    check_same_size(a, b);
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i])
            return false;
        if (a[i] < b[i])
            strict = true;
    }
    return strict;
}

ParetoFront extract_front(std::span<const ObjectiveVector> observations) {
    if (observations.empty())
        return {};
    std::vector<ObjectiveVector> sorted(observations.begin(), observations.end());
    for (const auto& y : sorted)
        check_same_size(y, sorted.front());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    // After a lexicographic sort a vector can only be dominated by one
    // that precedes it, so a single pass against the running front suffices.
    std::vector<ObjectiveVector> front;
    for (auto& y : sorted) {
        const bool dominated =
            std::any_of(front.begin(), front.end(), [&](const ObjectiveVector& f) { return dominates(f, y); });
        if (!dominated)
            front.push_back(std::move(y));
    }
    return ParetoFront(std::move(front));
}

ParetoFront clip_to_reference(const ParetoFront& front, const ObjectiveVector& ref_point) {
    std::vector<ObjectiveVector> kept;
    for (const auto& y : front) {
        check_same_size(y, ref_point);
        if (strictly_dominates_reference(y, ref_point))
            kept.push_back(y);
    }
    return extract_front(kept);
}

double detail::hypervolume_2d(std::vector<std::pair<double, double>> points, double ref_x, double ref_y) {
    std::sort(points.begin(), points.end());
    double volume = 0.0;
    double floor_y = ref_y;
    for (const auto& [x, y] : points) {
        if (y < floor_y) {
            volume += (ref_x - x) * (floor_y - y);
            floor_y = y;
        }
    }
    return volume;
}

HypervolumeEstimate hypervolume_estimate(const ParetoFront& front, const ObjectiveVector& ref_point,
                                         const HypervolumeOptions& options) {
    std::vector<ObjectiveVector> inside;
    std::size_t dropped = 0;
    for (const auto& y : front) {
        check_same_size(y, ref_point);
        if (strictly_dominates_reference(y, ref_point))
            inside.push_back(y);
        else
            ++dropped;
    }
    if (dropped > 0 && options.warn_on_drop)
        log::warn(std::to_string(dropped) + " front member(s) do not dominate the reference point; ignored");

    HypervolumeEstimate result;
    result.dropped = dropped;
    if (inside.empty())
        return result;

    switch (ref_point.size()) {
    case 2: {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(inside.size());
        for (const auto& y : inside)
            pts.emplace_back(y[0], y[1]);
        result.value = detail::hypervolume_2d(std::move(pts), ref_point[0], ref_point[1]);
        break;
    }
    case 3:
        result.value = hypervolume_3d(std::move(inside), ref_point);
        break;
    default: {
        const auto mc = hypervolume_monte_carlo(inside, ref_point, options);
        result.value = mc.value;
        result.std_error = mc.std_error;
    }
    }
    return result;
}

double hypervolume(const ParetoFront& front, const ObjectiveVector& ref_point, const HypervolumeOptions& options) {
    return hypervolume_estimate(front, ref_point, options).value;
}

double hv_regret(const ParetoFront& discovered, const ParetoFront& true_front, const ObjectiveVector& ref_point,
                 const HypervolumeOptions& options) {
    if (!discovered.empty() && !true_front.empty() && discovered.objective_count() != true_front.objective_count())
        throw Error("discovered and true fronts have different objective counts");
    return hypervolume(true_front, ref_point, options) - hypervolume(discovered, ref_point, options);
}

}  // namespace hippo
