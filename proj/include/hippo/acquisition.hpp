#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hippo/pareto.hpp"
#include "hippo/surrogate.hpp"

namespace hippo {

enum class EhviMethod {
    automatic,  ///< exact for two objectives, Monte-Carlo otherwise
    exact,
    monte_carlo,
};

struct EhviOptions {
    EhviMethod method = EhviMethod::automatic;
    std::size_t mc_samples = 512;
    /// Seeds the fixed quasi-random sample set; one value per optimisation step.
    std::uint64_t seed = 0;
};

/// Everything EHVI needs: one model per objective, the current front
/// (restricted to members dominating the reference) and the reference point.
struct AcquisitionContext {
    std::vector<GpModel> models;
    ParetoFront front;
    ObjectiveVector ref_point;
    EhviMethod method = EhviMethod::automatic;
    /// Standard-normal draws, mc_samples x k, fixed for the context's lifetime.
    Eigen::MatrixXd mc_normals;

    std::size_t objective_count() const noexcept { return models.size(); }
    bool uses_exact_ehvi() const;
};

/// Builds a context whose front is the non-dominated subset of `observations`
/// that dominates `ref_point`.
AcquisitionContext make_context(std::vector<GpModel> models, std::span<const ObjectiveVector> observations,
                                ObjectiveVector ref_point, const EhviOptions& options = {});

/// Same, from an existing front.
AcquisitionContext make_context(std::vector<GpModel> models, ParetoFront front, ObjectiveVector ref_point,
                                const EhviOptions& options = {});

/// Per-objective posteriors at x, in objective units.
std::vector<Posterior> predict_objectives(std::span<const GpModel> models, const DesignPoint& x);

double ehvi(const AcquisitionContext& ctx, const DesignPoint& x);

/// Closed-form bi-objective EHVI for independent Gaussian objectives.
/// The non-dominated region is split into vertical strips, one per front
/// member plus one left of the front; each strip contributes a product of
/// one-dimensional Gaussian integrals.
double ehvi_exact_2d(const ParetoFront& front, const ObjectiveVector& ref_point, std::span<const Posterior> posterior);

/// Sample-average EHVI over the given standard-normal draws (rows).
double ehvi_monte_carlo(const ParetoFront& front, const ObjectiveVector& ref_point,
                        std::span<const Posterior> posterior, const Eigen::MatrixXd& normals);

enum class ConstraintDirection { less_equal, greater_equal };

struct ConstraintModel {
    GpModel model;
    double threshold = 0.0;
    ConstraintDirection direction = ConstraintDirection::less_equal;
};

double probability_of_feasibility(const Posterior& posterior, double threshold, ConstraintDirection direction);
double probability_of_feasibility(const ConstraintModel& constraint, const DesignPoint& x);

/// EHVI times the product of the constraints' feasibility probabilities.
double constrained_ehvi(const AcquisitionContext& ctx, std::span<const ConstraintModel> constraints,
                        const DesignPoint& x);

}  // namespace hippo
