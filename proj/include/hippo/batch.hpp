#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hippo/acquisition.hpp"
#include "hippo/optimiser.hpp"
#include "hippo/surrogate.hpp"

namespace hippo {

/// Smooth increasing map from [0, inf) onto [0, 1) with w(0) = 0.
class WarpFunction {
public:
    enum class Family {
        scaled_arctan,  ///< (2/pi) atan(d / scale)
        tanh,           ///< tanh(d / scale)
        exponential,    ///< 1 - exp(-d / scale)
    };

    WarpFunction() = default;
    WarpFunction(Family family, double scale);

    static WarpFunction scaled_arctan() { return {}; }

    Family family() const noexcept { return family_; }
    double scale() const noexcept { return scale_; }

    /// Throws on negative or NaN distances.
    double operator()(double distance) const;

private:
    Family family_ = Family::scaled_arctan;
    double scale_ = 1.0;
};

inline double warp(const WarpFunction& w, double distance) { return w(distance); }

/// Mahalanobis-type distance between predicted objectives:
/// sqrt(sum_i (mu_i(x) - mu_i(y))^2 / sigma_i^2(y)). Only y's variance
/// enters, so the distance is not symmetric.
double objective_distance(std::span<const double> means_at_x, std::span<const Posterior> at_y);

/// Same, evaluated from the models on their standardised scale.
double objective_distance(std::span<const GpModel> models, const DesignPoint& x, const DesignPoint& y);

/// Batch members chosen so far, with their posteriors frozen at selection time.
class PenaltyState {
public:
    struct Chosen {
        DesignPoint x;
        std::vector<Posterior> posterior;  ///< standardised scale
    };

    /// `models` must outlive the state.
    PenaltyState(std::span<const GpModel> models, std::size_t batch_size);

    /// Records x with the models' current posteriors.
    void add(const DesignPoint& x);
    /// Records x with explicitly supplied (standardised) posteriors.
    void add(DesignPoint x, std::vector<Posterior> posterior);

    std::size_t count() const noexcept { return chosen_.size(); }
    std::size_t batch_size_target() const noexcept { return batch_size_; }
    const std::vector<Chosen>& chosen() const noexcept { return chosen_; }

    /// prod_j w(d(x, x_j)) given the predicted (standardised) means at x.
    double penalty(const WarpFunction& w, std::span<const double> means_at_x) const;
    double penalty(const WarpFunction& w, const DesignPoint& x) const;
    /// sum_j log w(d(x, x_j)); -inf when any factor is zero.
    double log_penalty(const WarpFunction& w, const DesignPoint& x) const;

private:
    std::vector<double> standardised_means(const DesignPoint& x) const;

    std::span<const GpModel> models_;
    std::size_t batch_size_;
    std::vector<Chosen> chosen_;
};

/// alpha(x) * prod_j w(d(x, x_j)); exactly alpha(x) while the state is empty.
double penalised_acquisition(const ScalarFunction& base, const PenaltyState& state, const WarpFunction& w,
                             const DesignPoint& x);

inline constexpr double kLogAcquisitionFloor = -1e8;

/// log alpha(x) + sum_j log w(d(x, x_j)), floored at kLogAcquisitionFloor.
double log_penalised_acquisition(const ScalarFunction& base, const PenaltyState& state, const WarpFunction& w,
                                 const DesignPoint& x);

/// How each batch point is searched for.
struct BatchOptimiser {
    SearchSpace space;
    MaximiseOptions options;
    /// Maximise the log of the acquisition (same argmax, no underflow).
    bool log_domain = true;
};

struct Batch {
    std::vector<DesignPoint> points;
    /// Acquisition value (linear scale) at each selected point when it was chosen.
    std::vector<double> values;
};

/// Sequential EHVI step: the maximiser of the unpenalised acquisition.
Batch maximise_ehvi(const AcquisitionContext& ctx, const BatchOptimiser& optimiser, std::uint64_t seed);

/// Greedy HIPPO batch: x_1 maximises EHVI, each later point maximises EHVI
/// penalised by the warped objective-space distance to every earlier pick.
/// Models are not refit within the batch.
Batch build_hippo_batch(const AcquisitionContext& ctx, std::size_t batch_size, const BatchOptimiser& optimiser,
                        const WarpFunction& w, std::uint64_t seed);

/// Kriging Believer: after each pick, every objective model is conditioned on
/// its own posterior mean at that point and the front is updated accordingly.
Batch build_kb_batch(const AcquisitionContext& ctx, std::size_t batch_size, const BatchOptimiser& optimiser,
                     std::uint64_t seed);

/// Context after conditioning every model on its posterior mean at x.
AcquisitionContext believe(const AcquisitionContext& ctx, const DesignPoint& x);

}  // namespace hippo
