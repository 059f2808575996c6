#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tilesds/config.hpp"
#include "tilesds/estimator.hpp"
#include "tilesds/sds.hpp"
#include "tilesds/tiling.hpp"

namespace tilesds {

// Seam strength of a consolidated grid against a tiling plan: the mean
// absolute difference between adjacent pixels straddling a tile boundary,
// baseline-subtracted by the same statistic one pixel away from boundaries
// (clamped at zero). max_boundary_jump is the raw maximum across boundary
// pairs. Plans with no interior boundaries report zeros.
struct SeamMetricReport {
    int stride = 0;
    double max_boundary_jump = 0.0;
    double mean_boundary_jump = 0.0;
};

SeamMetricReport seam_metric(const LatentGrid& grid, const TilingPlan& plan);

struct EquivalenceReport {
    double max_abs_diff = 0.0;
    bool passed = false;
};

struct AblationReport {
    std::vector<SeamMetricReport> reports;
    bool ordering_holds = false;  // non-overlapping stride has the worst seams
};

struct ConvergenceReport {
    double initial_error = 0.0;
    double final_error = 0.0;
    bool monotone_trailing = false;
    bool passed = false;
    std::vector<TraceRow> trace;
};

// Builds the configured estimator (constant, gaussian_prior or box_blur).
std::shared_ptr<NoiseEstimator> build_estimator(const ExperimentConfig& config,
                                                const DiffusionSchedule& schedule);

// Consolidates a seeded Gaussian latent with the configured tiling and
// compares against one direct full-grid estimator call. Passes when the max
// absolute difference is at most 1e-9 (expected to fail for box_blur, whose
// receptive field crosses tile edges).
EquivalenceReport run_equivalence(const ExperimentConfig& config);

// Consolidates one fixed Gaussian latent at each configured stride, writes
// per-channel images and a seam-metric CSV, and checks that the
// non-overlapping stride (stride == window) shows strictly worse seams than
// every overlapping stride.
AblationReport run_stride_ablation(const ExperimentConfig& config);

// Optimizes a zero-initialized latent toward the Gaussian-prior mean and
// writes the per-step trace CSV and the final per-channel images. Passes when
// the final max error is below the configured threshold and the trailing
// 100-step averaged error never increases.
ConvergenceReport run_sds_convergence(const ExperimentConfig& config);

// Renders the sphere in shaded, textureless and normal modes from 8 azimuths
// (24 images).
void run_shading_demo(const ExperimentConfig& config);

// Trace CSV schema: "step,t,omega,residual_norm,target_error"; the last field
// is empty when no target was supplied. Floats are %.17g, so equal traces are
// byte-equal files.
void write_trace_csv(const std::vector<TraceRow>& trace, const std::string& path);

void write_text_file(const std::string& text, const std::string& path);

}  // namespace tilesds
