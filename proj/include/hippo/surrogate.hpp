#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "hippo/pareto.hpp"

namespace hippo {

/// Matern 5/2 ARD kernel with constant mean. All values are in the model's
/// standardised target units.
struct KernelHyperparams {
    Eigen::VectorXd lengthscales;
    double signal_variance = 1.0;
    double noise_variance = 1e-6;
    double constant_mean = 0.0;

    std::size_t input_dim() const noexcept { return static_cast<std::size_t>(lengthscales.size()); }

    /// Packed as [log l_1..log l_n, log signal, log noise, mean].
    Eigen::VectorXd to_vector() const;
    static KernelHyperparams from_vector(const Eigen::VectorXd& theta);
};

struct Posterior {
    double mean = 0.0;
    double variance = 1.0;
};

/// Affine map from objective units to the standardised units the GP works in.
struct TargetScaling {
    double offset = 0.0;
    double scale = 1.0;

    double to_model(double y) const noexcept { return (y - offset) / scale; }
    double to_objective(double z) const noexcept { return offset + scale * z; }
    static TargetScaling standardise(const Eigen::VectorXd& y);
};

struct LogLikelihood {
    double value = 0.0;
    /// Ordered like KernelHyperparams::to_vector().
    Eigen::VectorXd gradient;
};

inline constexpr double kVarianceFloor = 1e-12;

double matern52(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const KernelHyperparams& hp);

/// Single-objective GP regressor with a cached Cholesky factor.
class GpModel {
public:
    /// `targets` are in objective units; `scaling` maps them to model units.
    GpModel(Eigen::MatrixXd inputs, Eigen::VectorXd targets, KernelHyperparams hyperparams,
            TargetScaling scaling = {});

    std::size_t input_dim() const noexcept { return static_cast<std::size_t>(inputs_.cols()); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(inputs_.rows()); }
    const Eigen::MatrixXd& inputs() const noexcept { return inputs_; }
    /// Objective units.
    Eigen::VectorXd targets() const;
    const KernelHyperparams& hyperparams() const noexcept { return hp_; }
    const TargetScaling& scaling() const noexcept { return scaling_; }
    /// Diagonal jitter that had to be added for a stable factorisation.
    double jitter() const noexcept { return jitter_; }

    /// Constant mean in objective units.
    double constant_mean() const noexcept { return scaling_.to_objective(hp_.constant_mean); }

    /// Latent posterior in objective units.
    Posterior predict(const DesignPoint& x) const;
    /// Latent posterior in standardised units.
    Posterior predict_standardised(const DesignPoint& x) const;
    /// Posterior mean only (no triangular solve), standardised units.
    double predict_mean_standardised(const DesignPoint& x) const;

    LogLikelihood log_marginal_likelihood() const;

    /// Appends (x, posterior mean at x); hyperparameters stay fixed.
    GpModel condition_on_fake(const DesignPoint& x) const;

private:
    GpModel() = default;
    void factorise();
    Eigen::VectorXd cross_kernel(const DesignPoint& x) const;
    void check_point(const DesignPoint& x) const;

    Eigen::MatrixXd inputs_;
    Eigen::VectorXd z_;  // standardised targets
    KernelHyperparams hp_;
    TargetScaling scaling_;
    double jitter_ = 0.0;
    Eigen::MatrixXd chol_;  // lower-triangular factor of K + (noise + jitter) I
    Eigen::VectorXd weights_;  // (K + noise I)^-1 (z - m)
};

struct FitOptions {
    std::size_t restarts = 5;
    std::uint64_t seed = 0;
    bool learn_noise = false;
    double noise_floor = 1e-6;
    std::size_t max_iterations = 200;
    /// Tried as an extra starting point before the random restarts.
    std::optional<KernelHyperparams> warm_start;
};

struct HyperparamBounds {
    double min_lengthscale = 1e-3;
    double max_lengthscale = 1e2;
    double min_variance = 1e-6;
    double max_variance = 1e3;
    double max_abs_mean = 10.0;
};

/// Maximum-marginal-likelihood fit by multi-start bounded quasi-Newton
/// ascent in log-parameter space. Inputs should already lie in the unit box.
/// Targets are standardised internally.
GpModel fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const FitOptions& options = {},
            const HyperparamBounds& bounds = {});

}  // namespace hippo
