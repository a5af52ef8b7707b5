#include "hippo/batch.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hippo/qmc.hpp"

namespace hippo {

namespace {

double to_search_scale(double value, bool log_domain) {
    if (!log_domain)
        return value;
    if (!(value > 0.0))
        return kLogAcquisitionFloor;
    return std::max(std::log(value), kLogAcquisitionFloor);
}

Batch run_step(Batch batch, const ScalarFunction& f, const BatchOptimiser& optimiser, std::uint64_t seed,
               std::size_t index) {
    MaximiseOptions opts = optimiser.options;
    opts.seed = mix_seed(seed, index);
    try {
        auto found = maximise(f, optimiser.space, opts);
        batch.points.push_back(std::move(found.x));
    } catch (const Error& e) {
        throw Error("batch point " + std::to_string(index) + ": " + e.what());
    }
    return batch;
}

}  // namespace

WarpFunction::WarpFunction(Family family, double scale) : family_(family), scale_(scale) {
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw Error("warp scale must be positive and finite");
}

double WarpFunction::operator()(double distance) const {
    if (!(distance >= 0.0))
        throw Error("warp is defined for non-negative distances only");
    const double u = distance / scale_;
    switch (family_) {
    case Family::tanh:
        return std::tanh(u);
    case Family::exponential:
        return -std::expm1(-u);
    case Family::scaled_arctan:
        break;
    }
    return 2.0 / std::numbers::pi * std::atan(u);
}

double objective_distance(std::span<const double> means_at_x, std::span<const Posterior> at_y) {
    if (means_at_x.size() != at_y.size())
        throw Error("objective distance: objective count mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < at_y.size(); ++i) {
        const double diff = means_at_x[i] - at_y[i].mean;
        sum += diff * diff / std::max(at_y[i].variance, kVarianceFloor);
    }
    return std::sqrt(sum);
}

double objective_distance(std::span<const GpModel> models, const DesignPoint& x, const DesignPoint& y) {
    std::vector<double> means;
    std::vector<Posterior> at_y;
    for (const auto& m : models) {
        means.push_back(m.predict_mean_standardised(x));
        at_y.push_back(m.predict_standardised(y));
    }
    return objective_distance(means, at_y);
}

PenaltyState::PenaltyState(std::span<const GpModel> models, std::size_t batch_size)
    : models_(models), batch_size_(batch_size) {}

void PenaltyState::add(const DesignPoint& x) {
    std::vector<Posterior> posterior;
    for (const auto& m : models_)
        posterior.push_back(m.predict_standardised(x));
    add(x, std::move(posterior));
}

void PenaltyState::add(DesignPoint x, std::vector<Posterior> posterior) {
    if (!chosen_.empty() && posterior.size() != chosen_.front().posterior.size())
        throw Error("penalty state: objective count mismatch");
    chosen_.push_back({std::move(x), std::move(posterior)});
}

std::vector<double> PenaltyState::standardised_means(const DesignPoint& x) const {
    if (models_.empty())
        throw Error("penalty state has no models to predict with");
    std::vector<double> means;
    means.reserve(models_.size());
    for (const auto& m : models_)
        means.push_back(m.predict_mean_standardised(x));
    return means;
}

double PenaltyState::penalty(const WarpFunction& w, std::span<const double> means_at_x) const {
    double product = 1.0;
    for (const auto& c : chosen_)
        product *= w(objective_distance(means_at_x, c.posterior));
    return product;
}

double PenaltyState::penalty(const WarpFunction& w, const DesignPoint& x) const {
    if (chosen_.empty())
        return 1.0;
    return penalty(w, standardised_means(x));
}

double PenaltyState::log_penalty(const WarpFunction& w, const DesignPoint& x) const {
    if (chosen_.empty())
        return 0.0;
    const auto means = standardised_means(x);
    double sum = 0.0;
    for (const auto& c : chosen_) {
        const double factor = w(objective_distance(means, c.posterior));
        if (!(factor > 0.0))
            return -std::numeric_limits<double>::infinity();
        sum += std::log(factor);
    }
    return sum;
}

double penalised_acquisition(const ScalarFunction& base, const PenaltyState& state, const WarpFunction& w,
                             const DesignPoint& x) {
    const double alpha = base(x);
    if (state.count() == 0 || alpha == 0.0)
        return alpha;
    return alpha * state.penalty(w, x);
}

double log_penalised_acquisition(const ScalarFunction& base, const PenaltyState& state, const WarpFunction& w,
                                 const DesignPoint& x) {
    const double log_alpha = to_search_scale(base(x), true);
    if (state.count() == 0 || log_alpha <= kLogAcquisitionFloor)
        return log_alpha;
    return std::max(log_alpha + state.log_penalty(w, x), kLogAcquisitionFloor);
}

Batch maximise_ehvi(const AcquisitionContext& ctx, const BatchOptimiser& optimiser, std::uint64_t seed) {
    auto f = [&](const DesignPoint& x) { return to_search_scale(ehvi(ctx, x), optimiser.log_domain); };
    Batch batch = run_step({}, f, optimiser, seed, 0);
    batch.values.push_back(ehvi(ctx, batch.points.back()));
    return batch;
}

Batch build_hippo_batch(const AcquisitionContext& ctx, std::size_t batch_size, const BatchOptimiser& optimiser,
                        const WarpFunction& w, std::uint64_t seed) {
    if (batch_size < 1)
        throw Error("batch size must be at least 1");
    const ScalarFunction base = [&](const DesignPoint& x) { return ehvi(ctx, x); };
    PenaltyState state(ctx.models, batch_size);
    Batch batch;
    for (std::size_t t = 0; t < batch_size; ++t) {
        ScalarFunction f;
        if (optimiser.log_domain)
            f = [&](const DesignPoint& x) { return log_penalised_acquisition(base, state, w, x); };
        else
            f = [&](const DesignPoint& x) { return penalised_acquisition(base, state, w, x); };
        batch = run_step(std::move(batch), f, optimiser, seed, t);
        batch.values.push_back(penalised_acquisition(base, state, w, batch.points.back()));
        state.add(batch.points.back());
    }
    return batch;
}

AcquisitionContext believe(const AcquisitionContext& ctx, const DesignPoint& x) {
    AcquisitionContext next;
    std::vector<double> fantasy;
    next.models.reserve(ctx.models.size());
    for (const auto& m : ctx.models) {
        fantasy.push_back(m.predict(x).mean);
        next.models.push_back(m.condition_on_fake(x));
    }
    std::vector<ObjectiveVector> members(ctx.front.begin(), ctx.front.end());
    members.emplace_back(std::move(fantasy));
    next.front = clip_to_reference(extract_front(members), ctx.ref_point);
    next.ref_point = ctx.ref_point;
    next.method = ctx.method;
    next.mc_normals = ctx.mc_normals;
    return next;
}

Batch build_kb_batch(const AcquisitionContext& ctx, std::size_t batch_size, const BatchOptimiser& optimiser,
                     std::uint64_t seed) {
    if (batch_size < 1)
        throw Error("batch size must be at least 1");
    AcquisitionContext current = ctx;
    Batch batch;
    for (std::size_t t = 0; t < batch_size; ++t) {
        auto f = [&](const DesignPoint& x) { return to_search_scale(ehvi(current, x), optimiser.log_domain); };
        batch = run_step(std::move(batch), f, optimiser, seed, t);
        batch.values.push_back(ehvi(current, batch.points.back()));
        if (t + 1 < batch_size)
            current = believe(current, batch.points.back());
    }
    return batch;
}

}  // namespace hippo
