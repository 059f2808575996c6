#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tilesds/diffusion.hpp"

namespace tilesds {

// Raised for any malformed, unknown or out-of-range configuration input; the
// message always names the offending key. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat configuration for one experiment run. Loaded from a key = value file
// with optional command-line overrides; every key is validated before any
// computation starts.
struct ExperimentConfig {
    std::string experiment;  // equivalence | stride_ablation | sds_convergence | shading_demo

    // Latent grid and tiling.
    int grid_height = 128;
    int grid_width = 128;
    int grid_channels = 4;
    int window = 64;
    int stride = 32;
    std::vector<int> strides = {16, 32, 48, 64};  // stride_ablation only

    // Diffusion schedule.
    int schedule_steps = 1000;
    double beta_start = 1e-4;
    double beta_end = 2e-2;
    OmegaMode omega_mode = OmegaMode::kOneMinusAlphaBar;
    int timestep = 500;  // fixed t for the non-optimizing experiments

    // Estimator.
    std::string estimator = "gaussian_prior";
    double estimator_constant = 0.0;
    double estimator_mean = 0.7;
    int estimator_radius = 4;

    // Optimizer (sds_convergence).
    int steps = 500;
    double learning_rate = 0.01;
    int t_min = 20;
    int t_max = 980;
    double target_mean = 0.7;
    double convergence_threshold = 0.05;
    std::string condition;

    // Renderer (shading_demo).
    int resolution = 128;
    double sphere_radius = 1.0;
    double camera_radius = 3.0;
    double camera_polar = 1.3;
    double light_radius = 4.0;
    double light_polar = 1.0;
    double light_azimuth_offset = 0.0;
    double albedo_r = 0.8;
    double albedo_g = 0.35;
    double albedo_b = 0.25;
    double light_color = 1.0;
    double light_ambient = 0.1;

    std::uint64_t seed = 42;
    std::string output_dir = "out";
};

// Parses a flat key = value file ('#' starts a comment, blank lines ignored).
// Returns the raw pairs in file order.
std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::string& path);

// Applies pairs onto the defaults, last writer wins, then validates. Unknown
// keys, unparsable values and range violations all raise ConfigError naming
// the key. `overrides` come after (and win over) the file pairs.
ExperimentConfig make_config(
    const std::vector<std::pair<std::string, std::string>>& file_pairs,
    const std::vector<std::pair<std::string, std::string>>& overrides);

// Full load: file (optional, empty path skips it) plus overrides.
ExperimentConfig load_config(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides);

void validate_config(const ExperimentConfig& config);

// The resolved configuration as sorted "key = value" lines. output_dir is
// deliberately omitted so two runs of the same experiment into different
// directories produce identical manifests.
std::string manifest_text(const ExperimentConfig& config);

}  // namespace tilesds
