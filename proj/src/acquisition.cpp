#include "hippo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hippo/qmc.hpp"

namespace hippo {

namespace {

void check_reference(const ParetoFront& front, const ObjectiveVector& ref_point, std::size_t k) {
    if (ref_point.size() != k)
        throw Error("reference point has " + std::to_string(ref_point.size()) + " objectives, expected " +
                    std::to_string(k));
    for (const auto& y : front) {
        if (y.size() != k)
            throw Error("front member objective count mismatch");
        for (std::size_t i = 0; i < k; ++i)
            if (!(y[i] < ref_point[i]))
                throw Error("front member does not dominate the reference point");
    }
}

// Integral of P(Y <= z) for z from -inf to h, Y ~ N(mean, sd^2).
double gaussian_cdf_integral(double h, double mean, double sd) {
    if (h == -std::numeric_limits<double>::infinity())
        return 0.0;
    if (sd <= 0.0)
        return std::max(h - mean, 0.0);
    const double s = (h - mean) / sd;
    return (h - mean) * normal_cdf(s) + sd * normal_pdf(s);
}

}  // namespace

bool AcquisitionContext::uses_exact_ehvi() const {
    switch (method) {
    case EhviMethod::exact:
        return true;
    case EhviMethod::monte_carlo:
        return false;
    case EhviMethod::automatic:
        break;
    }
    return objective_count() == 2;
}

AcquisitionContext make_context(std::vector<GpModel> models, ParetoFront front, ObjectiveVector ref_point,
                                const EhviOptions& options) {
    if (models.size() < 2)
        throw Error("acquisition context needs at least two objective models");
    for (const auto& m : models)
        if (m.input_dim() != models.front().input_dim())
            throw Error("objective models disagree on input dimension");
    if (ref_point.size() != models.size())
        throw Error("reference point dimension does not match the number of objective models");
    if (options.method == EhviMethod::exact && models.size() != 2)
        throw Error("exact EHVI is only available for two objectives");

    AcquisitionContext ctx;
    ctx.front = clip_to_reference(front, ref_point);
    ctx.models = std::move(models);
    ctx.ref_point = std::move(ref_point);
    ctx.method = options.method;
    if (!ctx.uses_exact_ehvi())
        ctx.mc_normals = sobol_normal_points(options.mc_samples, ctx.objective_count(), options.seed);
    return ctx;
}

AcquisitionContext make_context(std::vector<GpModel> models, std::span<const ObjectiveVector> observations,
                                ObjectiveVector ref_point, const EhviOptions& options) {
    return make_context(std::move(models), extract_front(observations), std::move(ref_point), options);
}

std::vector<Posterior> predict_objectives(std::span<const GpModel> models, const DesignPoint& x) {
    std::vector<Posterior> out;
    out.reserve(models.size());
    for (const auto& m : models)
        out.push_back(m.predict(x));
    return out;
}

double ehvi_exact_2d(const ParetoFront& front, const ObjectiveVector& ref_point, std::span<const Posterior> posterior) {
    if (posterior.size() != 2)
        throw Error("exact EHVI needs exactly two objective posteriors");
    check_reference(front, ref_point, 2);

    const double m1 = posterior[0].mean, s1 = std::sqrt(std::max(posterior[0].variance, 0.0));
    const double m2 = posterior[1].mean, s2 = std::sqrt(std::max(posterior[1].variance, 0.0));

    // Members are sorted by f1 ascending, hence f2 descending.
    const auto& members = front.members();
    const std::size_t m = members.size();
    double total = 0.0;
    double left = -std::numeric_limits<double>::infinity();
    double ceiling = ref_point[1];
    for (std::size_t i = 0; i <= m; ++i) {
        const double right = (i < m) ? members[i][0] : ref_point[0];
        const double width = gaussian_cdf_integral(right, m1, s1) - gaussian_cdf_integral(left, m1, s1);
        if (width > 0.0)
            total += width * gaussian_cdf_integral(ceiling, m2, s2);
        if (i < m) {
            left = members[i][0];
            ceiling = members[i][1];
        }
    }
    return std::max(total, 0.0);
}

double ehvi_monte_carlo(const ParetoFront& front, const ObjectiveVector& ref_point,
                        std::span<const Posterior> posterior, const Eigen::MatrixXd& normals) {
    const std::size_t k = posterior.size();
    check_reference(front, ref_point, k);
    if (static_cast<std::size_t>(normals.cols()) != k)
        throw Error("Monte-Carlo draws have the wrong number of columns");
    if (normals.rows() == 0)
        throw Error("Monte-Carlo EHVI needs at least one draw");

    HypervolumeOptions hv_opts;
    hv_opts.warn_on_drop = false;
    hv_opts.mc_samples = 20'000;
    const double base = hypervolume(front, ref_point, hv_opts);

    std::vector<ObjectiveVector> augmented(front.begin(), front.end());
    augmented.emplace_back();
    std::vector<double> y(k);
    double sum = 0.0;
    for (Eigen::Index s = 0; s < normals.rows(); ++s) {
        bool inside = true;
        for (std::size_t i = 0; i < k; ++i) {
            y[i] = posterior[i].mean + std::sqrt(posterior[i].variance) * normals(s, static_cast<Eigen::Index>(i));
            inside = inside && y[i] < ref_point[i];
        }
        if (!inside)
            continue;
        const ObjectiveVector sample(y);
        const bool dominated =
            std::any_of(front.begin(), front.end(), [&](const ObjectiveVector& f) { return dominates(f, sample) || f == sample; });
        if (dominated)
            continue;
        augmented.back() = sample;
        sum += std::max(hypervolume(extract_front(augmented), ref_point, hv_opts) - base, 0.0);
    }
    return sum / static_cast<double>(normals.rows());
}

double ehvi(const AcquisitionContext& ctx, const DesignPoint& x) {
    const auto posterior = predict_objectives(ctx.models, x);
    if (ctx.uses_exact_ehvi())
        return ehvi_exact_2d(ctx.front, ctx.ref_point, posterior);
    return ehvi_monte_carlo(ctx.front, ctx.ref_point, posterior, ctx.mc_normals);
}

double probability_of_feasibility(const Posterior& posterior, double threshold, ConstraintDirection direction) {
    if (!std::isfinite(threshold))
        throw Error("constraint threshold must be finite");
    const double margin = direction == ConstraintDirection::less_equal ? threshold - posterior.mean
                                                                       : posterior.mean - threshold;
    const double sd = std::sqrt(std::max(posterior.variance, 0.0));
    if (sd == 0.0)
        return margin >= 0.0 ? 1.0 : 0.0;
    return normal_cdf(margin / sd);
}

double probability_of_feasibility(const ConstraintModel& constraint, const DesignPoint& x) {
    return probability_of_feasibility(constraint.model.predict(x), constraint.threshold, constraint.direction);
}

double constrained_ehvi(const AcquisitionContext& ctx, std::span<const ConstraintModel> constraints,
                        const DesignPoint& x) {
    double value = ehvi(ctx, x);
    for (const auto& c : constraints)
        value *= probability_of_feasibility(c, x);
    return value;
}

}  // namespace hippo
