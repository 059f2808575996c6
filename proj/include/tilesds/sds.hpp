#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tilesds/diffusion.hpp"
#include "tilesds/mne.hpp"

namespace tilesds {

// One stochastic gradient draw: grad_latent = weight * (estimate - noise),
// pointwise. No derivative ever flows through the estimator; the gradient is
// this closed-form expression and nothing else.
struct SdsGradientSample {
    LatentGrid grad_latent;
    TimestepSample timestep;
    double residual_norm = 0.0;  // ||estimate - noise||_2
};

// Linear map from latent-space gradients to a flat parameter-space gradient.
// Stands in for the encoder/renderer Jacobian chain, which is always supplied
// by the caller here.
using Pullback = std::function<std::vector<double>(const LatentGrid&)>;

// Flattens the latent gradient in row-major order.
Pullback identity_pullback();

// Draws noise from rng, forms the noisy latent at ts.t, consolidates the
// tiled estimates, and returns weight * (consolidated - noise).
SdsGradientSample sds_step(const LatentGrid& latent,
                           const NoiseEstimator& estimator,
                           const TilingPlan& plan,
                           const DiffusionSchedule& schedule,
                           const TimestepSample& ts, Rng& rng,
                           const std::string& condition = "");

std::vector<double> apply_pullback(const SdsGradientSample& sample,
                                   const Pullback& pullback);

struct OptimizeConfig {
    int steps = 0;
    double learning_rate = 0.01;
    int t_min = 1;
    int t_max = 1;
    OmegaMode omega_mode = OmegaMode::kOneMinusAlphaBar;
    std::uint64_t seed = 0;
    std::string condition;
};

struct TraceRow {
    int step = 0;  // 1-based
    int t = 0;
    double omega = 0.0;
    double residual_norm = 0.0;
    bool has_target_error = false;
    double target_error = 0.0;  // ||params - target||_inf after the update
};

struct OptimizeResult {
    LatentGrid params;
    std::vector<TraceRow> trace;
};

// Gradient descent on the latent treated directly as the parameters (identity
// pullback): params -= lr * weight * (estimate - noise), one (t, noise) draw
// per step. Deterministic given the seed.
OptimizeResult optimize(LatentGrid params, const NoiseEstimator& estimator,
                        const TilingPlan& plan, const DiffusionSchedule& schedule,
                        const OptimizeConfig& config,
                        const LatentGrid* target = nullptr);

}  // namespace tilesds
