#include "hippo/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hippo/log.hpp"

namespace hippo {

namespace {

constexpr double kSqrt5 = 2.2360679774997896964;

struct Matern52Terms {
    double value;
    // (5/3) s^2 (1 + sqrt5 r) exp(-sqrt5 r): multiply by (delta_d / l_d)^2 to
    // obtain dk/d(log l_d).
    double lengthscale_factor;
};

Matern52Terms matern52_terms(double r, double signal_variance) {
    const double e = std::exp(-kSqrt5 * r);
    return {signal_variance * (1.0 + kSqrt5 * r + 5.0 / 3.0 * r * r) * e,
            5.0 / 3.0 * signal_variance * (1.0 + kSqrt5 * r) * e};
}

double scaled_distance(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                       const Eigen::VectorXd& lengthscales) {
    return ((a - b).array() / lengthscales.array()).matrix().norm();
}

// Bounded quasi-Newton ascent (BFGS with projection onto a box).
template <typename Objective>
std::pair<Eigen::VectorXd, double> projected_bfgs_ascent(Objective&& objective, Eigen::VectorXd theta,
                                                         const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                                         const std::vector<bool>& frozen,
                                                         std::size_t max_iterations) {
    const Eigen::Index p = theta.size();
    auto project = [&](Eigen::VectorXd v) { return v.cwiseMax(lo).cwiseMin(hi).eval(); };
    auto mask = [&](Eigen::VectorXd g, const Eigen::VectorXd& at) {
        for (Eigen::Index i = 0; i < p; ++i) {
            const bool pinned_low = at[i] <= lo[i] && g[i] < 0.0;
            const bool pinned_high = at[i] >= hi[i] && g[i] > 0.0;
            if (frozen[i] || pinned_low || pinned_high)
                g[i] = 0.0;
        }
        return g;
    };

    theta = project(theta);
    auto [value, grad] = objective(theta);
    Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(p, p);

    for (std::size_t it = 0; it < max_iterations; ++it) {
        const Eigen::VectorXd g = mask(grad, theta);
        if (g.lpNorm<Eigen::Infinity>() < 1e-6)
            break;
        Eigen::VectorXd dir = mask(inv_hessian * g, theta);
        if (dir.dot(g) <= 0.0) {
            inv_hessian.setIdentity();
            dir = g;
        }
        const double longest = dir.lpNorm<Eigen::Infinity>();
        if (longest > 2.0)
            dir *= 2.0 / longest;

        double step = 1.0;
        bool accepted = false;
        Eigen::VectorXd next;
        double next_value = 0.0;
        Eigen::VectorXd next_grad;
        for (int tries = 0; tries < 40; ++tries, step *= 0.5) {
            next = project(theta + step * dir);
            try {
                auto [v, gr] = objective(next);
                if (std::isfinite(v) && v >= value + 1e-4 * g.dot(next - theta)) {
                    next_value = v;
                    next_grad = std::move(gr);
                    accepted = true;
                    break;
                }
            } catch (const Error&) {
                // non-PD trial point: shrink the step
            }
        }
        if (!accepted)
            break;

        const Eigen::VectorXd s = next - theta;
        const Eigen::VectorXd y = grad - next_grad;  // gradient change of -objective
        const double sy = s.dot(y);
        if (sy > 1e-12) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(p, p);
            inv_hessian = (eye - rho * s * y.transpose()) * inv_hessian * (eye - rho * y * s.transpose()) +
                          rho * s * s.transpose();
        }
        const double improvement = next_value - value;
        theta = std::move(next);
        value = next_value;
        grad = std::move(next_grad);
        if (improvement < 1e-9 * (1.0 + std::abs(value)))
            break;
    }
    return {theta, value};
}

KernelHyperparams median_heuristic(const Eigen::MatrixXd& inputs, double noise, const HyperparamBounds& bounds) {
    KernelHyperparams hp;
    const Eigen::Index n = inputs.cols();
    hp.lengthscales.resize(n);
    for (Eigen::Index d = 0; d < n; ++d) {
        std::vector<double> gaps;
        for (Eigen::Index i = 0; i < inputs.rows(); ++i)
            for (Eigen::Index j = i + 1; j < inputs.rows(); ++j)
                gaps.push_back(std::abs(inputs(i, d) - inputs(j, d)));
        double median = 1.0;
        if (!gaps.empty()) {
            std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
            median = gaps[gaps.size() / 2];
        }
        hp.lengthscales[d] = std::clamp(median, bounds.min_lengthscale, bounds.max_lengthscale);
    }
    hp.signal_variance = 1.0;
    hp.noise_variance = noise;
    hp.constant_mean = 0.0;
    return hp;
}

}  // namespace

Eigen::VectorXd KernelHyperparams::to_vector() const {
    const Eigen::Index n = lengthscales.size();
    Eigen::VectorXd theta(n + 3);
    theta.head(n) = lengthscales.array().log().matrix();
    theta[n] = std::log(signal_variance);
    theta[n + 1] = std::log(noise_variance);
    theta[n + 2] = constant_mean;
    return theta;
}

KernelHyperparams KernelHyperparams::from_vector(const Eigen::VectorXd& theta) {
    if (theta.size() < 4)
        throw Error("hyperparameter vector too short");
    const Eigen::Index n = theta.size() - 3;
    KernelHyperparams hp;
    hp.lengthscales = theta.head(n).array().exp().matrix();
    hp.signal_variance = std::exp(theta[n]);
    hp.noise_variance = std::exp(theta[n + 1]);
    hp.constant_mean = theta[n + 2];
    return hp;
}

TargetScaling TargetScaling::standardise(const Eigen::VectorXd& y) {
    if (y.size() == 0)
        return {};
    const double mean = y.mean();
    const double var = (y.array() - mean).square().mean();
    const double sd = std::sqrt(var);
    // Constant targets: keep unit scale so the model reduces to its mean.
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean))))
        return {mean, 1.0};
    return {mean, sd};
}

double matern52(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const KernelHyperparams& hp) {
    return matern52_terms(scaled_distance(a, b, hp.lengthscales), hp.signal_variance).value;
}

GpModel::GpModel(Eigen::MatrixXd inputs, Eigen::VectorXd targets, KernelHyperparams hyperparams, TargetScaling scaling)
    : inputs_(std::move(inputs)), hp_(std::move(hyperparams)), scaling_(scaling) {
    if (inputs_.rows() == 0)
        throw Error("GP needs at least one training point");
    if (inputs_.rows() != targets.size())
        throw Error("GP inputs and targets have different lengths");
    if (static_cast<Eigen::Index>(hp_.input_dim()) != inputs_.cols())
        throw Error("lengthscale count does not match input dimension");
    if ((hp_.lengthscales.array() <= 0.0).any() || !(hp_.signal_variance > 0.0) || !(hp_.noise_variance >= 0.0))
        throw Error("kernel hyperparameters out of range");
    if (!(scaling_.scale > 0.0))
        throw Error("target scaling must be positive");
    z_ = targets.unaryExpr([&](double y) { return scaling_.to_model(y); });
    factorise();
}

void GpModel::factorise() {
    const Eigen::Index n = inputs_.rows();
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i, i) = hp_.signal_variance;
        for (Eigen::Index j = 0; j < i; ++j) {
            const double r = scaled_distance(inputs_.row(i).transpose(), inputs_.row(j).transpose(), hp_.lengthscales);
            k(i, j) = k(j, i) = matern52_terms(r, hp_.signal_variance).value;
        }
    }

    const double base = std::max(hp_.signal_variance, 1e-12);
    for (double jitter = jitter_; jitter <= 1e-2 * base; jitter = (jitter == 0.0 ? 1e-10 * base : jitter * 10.0)) {
        Eigen::MatrixXd kk = k;
        kk.diagonal().array() += hp_.noise_variance + jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(kk);
        if (llt.info() == Eigen::Success && (llt.matrixL().toDenseMatrix().diagonal().array() > 0.0).all()) {
            chol_ = llt.matrixL();
            jitter_ = jitter;
            weights_ = (z_.array() - hp_.constant_mean).matrix();
            chol_.triangularView<Eigen::Lower>().solveInPlace(weights_);
            chol_.triangularView<Eigen::Lower>().transpose().solveInPlace(weights_);
            return;
        }
    }
    throw Error("kernel matrix is not positive definite after jitter escalation");
}

void GpModel::check_point(const DesignPoint& x) const {
    if (x.size() != inputs_.cols())
        throw Error("design point has dimension " + std::to_string(x.size()) + ", model expects " +
                    std::to_string(inputs_.cols()));
}

Eigen::VectorXd GpModel::cross_kernel(const DesignPoint& x) const {
    const Eigen::Index n = inputs_.rows();
    Eigen::VectorXd kx(n);
    const Eigen::ArrayXd inv_l = hp_.lengthscales.array().inverse();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = ((inputs_.row(i).transpose() - x).array() * inv_l).matrix().norm();
        kx[i] = matern52_terms(r, hp_.signal_variance).value;
    }
    return kx;
}

Eigen::VectorXd GpModel::targets() const {
    return z_.unaryExpr([&](double z) { return scaling_.to_objective(z); });
}

double GpModel::predict_mean_standardised(const DesignPoint& x) const {
    check_point(x);
    return hp_.constant_mean + cross_kernel(x).dot(weights_);
}

Posterior GpModel::predict_standardised(const DesignPoint& x) const {
    check_point(x);
    Eigen::VectorXd kx = cross_kernel(x);
    const double mean = hp_.constant_mean + kx.dot(weights_);
    chol_.triangularView<Eigen::Lower>().solveInPlace(kx);
    const double variance = std::max(hp_.signal_variance - kx.squaredNorm(), kVarianceFloor);
    return {mean, variance};
}

Posterior GpModel::predict(const DesignPoint& x) const {
    const Posterior p = predict_standardised(x);
    return {scaling_.to_objective(p.mean), std::max(p.variance * scaling_.scale * scaling_.scale, kVarianceFloor)};
}

LogLikelihood GpModel::log_marginal_likelihood() const {
    const Eigen::Index n = inputs_.rows();
    const Eigen::Index dim = inputs_.cols();
    const Eigen::VectorXd resid = (z_.array() - hp_.constant_mean).matrix();

    LogLikelihood out;
    out.value = -0.5 * resid.dot(weights_) - chol_.diagonal().array().log().sum() -
                0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);

    Eigen::MatrixXd k_inv = Eigen::MatrixXd::Identity(n, n);
    chol_.triangularView<Eigen::Lower>().solveInPlace(k_inv);
    chol_.triangularView<Eigen::Lower>().transpose().solveInPlace(k_inv);
    // dL/dtheta = 1/2 tr((w w^T - K^-1) dK/dtheta)
    const Eigen::MatrixXd a = weights_ * weights_.transpose() - k_inv;

    out.gradient = Eigen::VectorXd::Zero(dim + 3);
    const Eigen::ArrayXd inv_l = hp_.lengthscales.array().inverse();
    double signal_grad = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        signal_grad += 0.5 * a(i, i) * hp_.signal_variance;
        for (Eigen::Index j = 0; j < i; ++j) {
            const Eigen::ArrayXd scaled = (inputs_.row(i).transpose() - inputs_.row(j).transpose()).array() * inv_l;
            const double r = scaled.matrix().norm();
            const auto terms = matern52_terms(r, hp_.signal_variance);
            // Off-diagonal pairs appear twice in the trace.
            signal_grad += a(i, j) * terms.value;
            out.gradient.head(dim).array() += a(i, j) * terms.lengthscale_factor * scaled.square();
        }
    }
    out.gradient[dim] = signal_grad;
    out.gradient[dim + 1] = 0.5 * hp_.noise_variance * a.trace();
    out.gradient[dim + 2] = weights_.sum();
    return out;
}

GpModel GpModel::condition_on_fake(const DesignPoint& x) const {
    check_point(x);
    GpModel next;
    next.hp_ = hp_;
    next.scaling_ = scaling_;
    next.jitter_ = jitter_;

    const Eigen::Index n = inputs_.rows();
    Eigen::VectorXd kx = cross_kernel(x);
    const double fake = hp_.constant_mean + kx.dot(weights_);

    next.inputs_.resize(n + 1, inputs_.cols());
    next.inputs_.topRows(n) = inputs_;
    next.inputs_.row(n) = x.transpose();
    next.z_.resize(n + 1);
    next.z_.head(n) = z_;
    next.z_[n] = fake;

    // Rank-one extension of the Cholesky factor.
    chol_.triangularView<Eigen::Lower>().solveInPlace(kx);
    const double pivot = hp_.signal_variance + hp_.noise_variance + jitter_ - kx.squaredNorm();
    if (pivot > 1e-12 * hp_.signal_variance) {
        next.chol_ = Eigen::MatrixXd::Zero(n + 1, n + 1);
        next.chol_.topLeftCorner(n, n) = chol_;
        next.chol_.block(n, 0, 1, n) = kx.transpose();
        next.chol_(n, n) = std::sqrt(pivot);
        next.weights_ = (next.z_.array() - hp_.constant_mean).matrix();
        next.chol_.triangularView<Eigen::Lower>().solveInPlace(next.weights_);
        next.chol_.triangularView<Eigen::Lower>().transpose().solveInPlace(next.weights_);
    } else {
        next.factorise();
    }
    return next;
}

GpModel fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const FitOptions& options,
            const HyperparamBounds& bounds) {
    if (inputs.rows() < 2)
        throw Error("fit needs at least two training points");
    if (inputs.rows() != targets.size())
        throw Error("fit inputs and targets have different lengths");

    const Eigen::Index dim = inputs.cols();
    const TargetScaling scaling = TargetScaling::standardise(targets);
    const double noise_floor = std::max(options.noise_floor, bounds.min_variance);

    Eigen::VectorXd lo(dim + 3), hi(dim + 3);
    lo.head(dim).setConstant(std::log(bounds.min_lengthscale));
    hi.head(dim).setConstant(std::log(bounds.max_lengthscale));
    lo[dim] = std::log(bounds.min_variance);
    hi[dim] = std::log(bounds.max_variance);
    lo[dim + 1] = std::log(noise_floor);
    hi[dim + 1] = options.learn_noise ? std::log(bounds.max_variance) : std::log(noise_floor);
    lo[dim + 2] = -bounds.max_abs_mean;
    hi[dim + 2] = bounds.max_abs_mean;
    std::vector<bool> frozen(dim + 3, false);
    frozen[dim + 1] = !options.learn_noise;

    auto objective = [&](const Eigen::VectorXd& theta) {
        GpModel model(inputs, targets, KernelHyperparams::from_vector(theta), scaling);
        auto lml = model.log_marginal_likelihood();
        return std::pair{lml.value, std::move(lml.gradient)};
    };

    std::vector<Eigen::VectorXd> starts;
    if (options.warm_start && static_cast<Eigen::Index>(options.warm_start->input_dim()) == dim) {
        KernelHyperparams warm = *options.warm_start;
        warm.noise_variance = std::max(warm.noise_variance, noise_floor);
        if (!options.learn_noise)
            warm.noise_variance = noise_floor;
        starts.push_back(warm.to_vector());
    }
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> log_length(std::log(0.05), std::log(2.0));
    std::uniform_real_distribution<double> log_signal(std::log(0.1), std::log(10.0));
    for (std::size_t r = 0; r < options.restarts; ++r) {
        Eigen::VectorXd theta(dim + 3);
        for (Eigen::Index d = 0; d < dim; ++d)
            theta[d] = log_length(rng);
        theta[dim] = log_signal(rng);
        theta[dim + 1] = std::log(noise_floor);
        theta[dim + 2] = 0.0;
        starts.push_back(theta);
    }

    std::optional<std::pair<Eigen::VectorXd, double>> best;
    for (const auto& start : starts) {
        try {
            auto result = projected_bfgs_ascent(objective, start, lo, hi, frozen, options.max_iterations);
            if (std::isfinite(result.second) && (!best || result.second > best->second))
                best = std::move(result);
        } catch (const Error&) {
            // this start never reached a valid factorisation
        }
    }
    if (!best) {
        log::warn("all GP fitting restarts failed; using median-heuristic lengthscales");
        return GpModel(inputs, targets, median_heuristic(inputs, noise_floor, bounds), scaling);
    }
    return GpModel(inputs, targets, KernelHyperparams::from_vector(best->first), scaling);
}

}  // namespace hippo
