#include "tilesds/sds.hpp"

#include <cmath>
#include <stdexcept>

namespace tilesds {

Pullback identity_pullback() {
    return [](const LatentGrid& grad) { return grad.data(); };
}

SdsGradientSample sds_step(const LatentGrid& latent,
                           const NoiseEstimator& estimator,
                           const TilingPlan& plan,
                           const DiffusionSchedule& schedule,
                           const TimestepSample& ts, Rng& rng,
                           const std::string& condition) {
    if (!(std::isfinite(ts.weight) && ts.weight >= 0.0)) {
        throw std::invalid_argument("sds_step: weight must be finite and >= 0");
    }
    LatentGrid noise(latent.height(), latent.width(), latent.channels());
    fill_gaussian(noise, rng);
    const LatentGrid noisy = add_noise(schedule, latent, ts.t, noise);
    const EstimatorContext ctx{ts.t, condition};
    const LatentGrid estimate = consolidate(noisy, estimator, plan, ctx);

    SdsGradientSample sample;
    sample.timestep = ts;
    sample.grad_latent = LatentGrid(latent.height(), latent.width(), latent.channels());
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < latent.size(); ++i) {
        const double residual = estimate[i] - noise[i];
        sample.grad_latent[i] = ts.weight * residual;
        norm_sq += residual * residual;
    }
    sample.residual_norm = std::sqrt(norm_sq);
    return sample;
}

std::vector<double> apply_pullback(const SdsGradientSample& sample,
                                   const Pullback& pullback) {
    if (!pullback) throw std::invalid_argument("apply_pullback: empty pullback");
    return pullback(sample.grad_latent);
}

OptimizeResult optimize(LatentGrid params, const NoiseEstimator& estimator,
                        const TilingPlan& plan, const DiffusionSchedule& schedule,
                        const OptimizeConfig& config, const LatentGrid* target) {
    if (config.steps < 0) {
        throw std::invalid_argument("optimize: steps must be >= 0");
    }
    if (target != nullptr && !target->same_shape(params)) {
        throw std::invalid_argument("optimize: target shape mismatch");
    }
    Rng rng(config.seed);
    OptimizeResult result{std::move(params), {}};
    result.trace.reserve(static_cast<std::size_t>(config.steps));
    for (int step = 1; step <= config.steps; ++step) {
        const TimestepSample ts = sample_timestep(rng, schedule, config.t_min,
                                                  config.t_max, config.omega_mode);
        const SdsGradientSample sample = sds_step(
            result.params, estimator, plan, schedule, ts, rng, config.condition);
        for (std::size_t i = 0; i < result.params.size(); ++i) {
            result.params[i] -= config.learning_rate * sample.grad_latent[i];
        }
        TraceRow row;
        row.step = step;
        row.t = ts.t;
        row.omega = ts.weight;
        row.residual_norm = sample.residual_norm;
        if (target != nullptr) {
            row.has_target_error = true;
            row.target_error = max_abs_diff(result.params, *target);
        }
        result.trace.push_back(row);
    }
    return result;
}

}  // namespace tilesds
