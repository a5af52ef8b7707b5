#include "hippo/optimiser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hippo/qmc.hpp"

namespace hippo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_eval(const ScalarFunction& f, const DesignPoint& x) {
    const double v = f(x);
    return std::isfinite(v) ? v : kNegInf;
}

std::size_t nearest_index(const std::vector<double>& values, double v) {
    const auto it = std::lower_bound(values.begin(), values.end(), v);
    if (it == values.end())
        return values.size() - 1;
    if (it == values.begin())
        return 0;
    const auto i = static_cast<std::size_t>(it - values.begin());
    return (v - values[i - 1] <= values[i] - v) ? i - 1 : i;
}

struct Refinement {
    DesignPoint x;
    double value;
    std::size_t evaluations;
};

Refinement pattern_search(const ScalarFunction& f, const SearchSpace& space, DesignPoint x, double value,
                          std::size_t cap, double min_step) {
    const std::size_t n = space.size();
    std::vector<double> step(n);
    for (std::size_t d = 0; d < n; ++d)
        step[d] = space[d].discrete() ? 0.0 : 0.1 * (space[d].hi - space[d].lo);

    std::size_t evals = 0;
    while (evals < cap) {
        bool improved = false;
        for (std::size_t d = 0; d < n && evals < cap; ++d) {
            const Dimension& dim = space[d];
            for (int sign : {+1, -1}) {
                DesignPoint trial = x;
                if (dim.discrete()) {
                    const auto idx = static_cast<long>(nearest_index(dim.values, x[d])) + sign;
                    if (idx < 0 || idx >= static_cast<long>(dim.values.size()))
                        continue;
                    trial[d] = dim.values[static_cast<std::size_t>(idx)];
                } else {
                    trial[d] = std::clamp(x[d] + sign * step[d], dim.lo, dim.hi);
                    if (trial[d] == x[d])
                        continue;
                }
                const double v = safe_eval(f, trial);
                ++evals;
                if (v > value) {
                    x = std::move(trial);
                    value = v;
                    improved = true;
                    break;
                }
                if (evals >= cap)
                    break;
            }
        }
        if (improved)
            continue;
        bool settled = true;
        for (std::size_t d = 0; d < n; ++d) {
            if (space[d].discrete())
                continue;
            step[d] *= 0.5;
            if (step[d] >= min_step * (space[d].hi - space[d].lo))
                settled = false;
        }
        if (settled)
            break;
    }
    return {std::move(x), value, evals};
}

}  // namespace

SearchSpace SearchSpace::unit_box(std::size_t n) {
    SearchSpace s;
    for (std::size_t i = 0; i < n; ++i)
        s.add_continuous(0.0, 1.0);
    return s;
}

SearchSpace& SearchSpace::add_continuous(double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw Error("continuous dimension needs finite lo < hi");
    dims_.push_back({lo, hi, {}});
    return *this;
}

SearchSpace& SearchSpace::add_discrete(std::vector<double> values) {
    if (values.empty())
        throw Error("discrete dimension needs at least one value");
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    const double lo = values.front(), hi = values.back();
    dims_.push_back({lo, hi, std::move(values)});
    return *this;
}

bool SearchSpace::contains(const DesignPoint& x) const {
    if (static_cast<std::size_t>(x.size()) != size())
        return false;
    for (std::size_t d = 0; d < size(); ++d) {
        const Dimension& dim = dims_[d];
        if (dim.discrete()) {
            if (!std::binary_search(dim.values.begin(), dim.values.end(), x[d]))
                return false;
        } else if (!(x[d] >= dim.lo && x[d] <= dim.hi)) {
            return false;
        }
    }
    return true;
}

DesignPoint SearchSpace::from_unit(const Eigen::Ref<const Eigen::VectorXd>& u) const {
    if (static_cast<std::size_t>(u.size()) != size())
        throw Error("unit point dimension mismatch");
    DesignPoint x(size());
    for (std::size_t d = 0; d < size(); ++d) {
        const Dimension& dim = dims_[d];
        const double ud = std::clamp(u[d], 0.0, 1.0);
        if (dim.discrete()) {
            const auto idx = std::min(static_cast<std::size_t>(ud * static_cast<double>(dim.values.size())),
                                      dim.values.size() - 1);
            x[d] = dim.values[idx];
        } else {
            x[d] = std::clamp(dim.lo + ud * (dim.hi - dim.lo), dim.lo, dim.hi);
        }
    }
    return x;
}

Eigen::VectorXd SearchSpace::to_unit(const DesignPoint& x) const {
    if (static_cast<std::size_t>(x.size()) != size())
        throw Error("design point dimension mismatch");
    Eigen::VectorXd u(size());
    for (std::size_t d = 0; d < size(); ++d) {
        const Dimension& dim = dims_[d];
        if (dim.discrete()) {
            const double count = static_cast<double>(dim.values.size());
            u[d] = (static_cast<double>(nearest_index(dim.values, x[d])) + 0.5) / count;
        } else {
            u[d] = (x[d] - dim.lo) / (dim.hi - dim.lo);
        }
    }
    return u;
}

MaximiseResult maximise(const ScalarFunction& f, const SearchSpace& space, const MaximiseOptions& options) {
    const std::size_t n = space.size();
    if (n == 0)
        throw Error("cannot maximise over an empty search space");
    const std::size_t budget = options.budget > 0 ? options.budget : 2000 * n;
    const std::size_t cap = options.refine_evaluations > 0 ? options.refine_evaluations : 100 * n + 100;

    const Eigen::MatrixXd unit = sobol_points(budget, n, options.seed);
    std::vector<DesignPoint> samples;
    std::vector<double> values;
    samples.reserve(budget);
    values.reserve(budget);
    for (std::size_t i = 0; i < budget; ++i) {
        samples.push_back(space.from_unit(unit.row(static_cast<Eigen::Index>(i)).transpose()));
        values.push_back(safe_eval(f, samples.back()));
    }

    std::vector<std::size_t> order(budget);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    if (values[order.front()] == kNegInf)
        throw Error("objective is non-finite at every sampled point");

    MaximiseResult best{samples[order.front()], values[order.front()], budget, values[order.front()]};
    const std::size_t starts = std::min(options.restarts, budget);
    for (std::size_t r = 0; r < starts; ++r) {
        const std::size_t i = order[r];
        if (values[i] == kNegInf)
            break;
        auto refined = pattern_search(f, space, samples[i], values[i], cap, options.min_step);
        best.evaluations += refined.evaluations;
        if (refined.value > best.value) {
            best.x = std::move(refined.x);
            best.value = refined.value;
        }
    }
    return best;
}

}  // namespace hippo
