#include "tilesds/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#include "tilesds/image_io.hpp"
#include "tilesds/mne.hpp"
#include "tilesds/render.hpp"

namespace tilesds {

namespace {

constexpr double kEquivalenceTolerance = 1e-9;
constexpr int kTrailingWindow = 100;
constexpr int kDemoAzimuths = 8;

std::set<int> sorted_unique(std::vector<int> values) {
    return std::set<int>(values.begin(), values.end());
}

// Interior tile edges along one axis: between b-1 and b for every tile start
// b > 0 and tile end b < dim.
std::set<int> boundary_positions(const std::set<int>& offsets, int window,
                                 int dim) {
    std::set<int> bounds;
    for (int p : offsets) {
        if (p > 0) bounds.insert(p);
        if (p + window < dim) bounds.insert(p + window);
    }
    return bounds;
}

struct JumpStats {
    double sum = 0.0;
    std::size_t count = 0;
    double max = 0.0;

    void add(double v) {
        sum += v;
        ++count;
        max = std::max(max, v);
    }
    double mean() const { return count == 0 ? 0.0 : sum / count; }
};

void ensure_dir(const std::string& path) {
    std::filesystem::create_directories(path);
}

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

// One grayscale RGB image per latent channel, min-max normalized.
void write_channel_ppms(const LatentGrid& grid, const std::string& dir,
                        const std::string& stem) {
    for (int ch = 0; ch < grid.channels(); ++ch) {
        double lo = grid.at(0, 0, ch);
        double hi = lo;
        for (int r = 0; r < grid.height(); ++r) {
            for (int c = 0; c < grid.width(); ++c) {
                lo = std::min(lo, grid.at(r, c, ch));
                hi = std::max(hi, grid.at(r, c, ch));
            }
        }
        const double range = hi - lo;
        LatentGrid image(grid.height(), grid.width(), 3);
        for (int r = 0; r < grid.height(); ++r) {
            for (int c = 0; c < grid.width(); ++c) {
                double v = range > 0.0 ? (grid.at(r, c, ch) - lo) / range : 0.5;
                v = std::clamp(v, 0.0, 1.0);
                image.at(r, c, 0) = v;
                image.at(r, c, 1) = v;
                image.at(r, c, 2) = v;
            }
        }
        write_ppm(image, join(dir, stem + "_c" + std::to_string(ch) + ".ppm"));
    }
}

void write_manifest(const ExperimentConfig& config) {
    write_text_file(manifest_text(config), join(config.output_dir, "manifest.txt"));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

SeamMetricReport seam_metric(const LatentGrid& grid, const TilingPlan& plan) {
    std::vector<int> tops, lefts;
    tops.reserve(plan.tiles.size());
    lefts.reserve(plan.tiles.size());
    for (const Region& tile : plan.tiles) {
        tops.push_back(tile.top);
        lefts.push_back(tile.left);
    }
    const std::set<int> row_bounds =
        boundary_positions(sorted_unique(tops), plan.window, grid.height());
    const std::set<int> col_bounds =
        boundary_positions(sorted_unique(lefts), plan.window, grid.width());

    JumpStats boundary, baseline;

    // Column boundaries: vertical seams, differences along each row.
    for (int b : col_bounds) {
        for (int r = 0; r < grid.height(); ++r) {
            for (int ch = 0; ch < grid.channels(); ++ch) {
                boundary.add(std::abs(grid.at(r, b, ch) - grid.at(r, b - 1, ch)));
            }
        }
    }
    std::set<int> col_baseline;
    for (int b : col_bounds) {
        for (int nb : {b - 1, b + 1}) {
            if (nb >= 1 && nb <= grid.width() - 1 && !col_bounds.count(nb)) {
                col_baseline.insert(nb);
            }
        }
    }
    for (int nb : col_baseline) {
        for (int r = 0; r < grid.height(); ++r) {
            for (int ch = 0; ch < grid.channels(); ++ch) {
                baseline.add(std::abs(grid.at(r, nb, ch) - grid.at(r, nb - 1, ch)));
            }
        }
    }

    // Row boundaries: horizontal seams, differences along each column.
    for (int b : row_bounds) {
        for (int c = 0; c < grid.width(); ++c) {
            for (int ch = 0; ch < grid.channels(); ++ch) {
                boundary.add(std::abs(grid.at(b, c, ch) - grid.at(b - 1, c, ch)));
            }
        }
    }
    std::set<int> row_baseline;
    for (int b : row_bounds) {
        for (int nb : {b - 1, b + 1}) {
            if (nb >= 1 && nb <= grid.height() - 1 && !row_bounds.count(nb)) {
                row_baseline.insert(nb);
            }
        }
    }
    for (int nb : row_baseline) {
        for (int c = 0; c < grid.width(); ++c) {
            for (int ch = 0; ch < grid.channels(); ++ch) {
                baseline.add(std::abs(grid.at(nb, c, ch) - grid.at(nb - 1, c, ch)));
            }
        }
    }

    SeamMetricReport report;
    report.stride = plan.stride;
    report.max_boundary_jump = boundary.max;
    report.mean_boundary_jump =
        std::max(0.0, boundary.mean() - baseline.mean());
    return report;
}

std::shared_ptr<NoiseEstimator> build_estimator(const ExperimentConfig& config,
                                                const DiffusionSchedule& schedule) {
    if (config.estimator == "constant") {
        return constant_estimator(config.estimator_constant);
    }
    if (config.estimator == "gaussian_prior") {
        return gaussian_prior_estimator(config.estimator_mean, schedule);
    }
    if (config.estimator == "box_blur") {
        return box_blur_estimator(config.estimator_radius);
    }
    throw ConfigError("unknown config key 'estimator' value '" +
                      config.estimator + "'");
}

EquivalenceReport run_equivalence(const ExperimentConfig& config) {
    ensure_dir(config.output_dir);
    const DiffusionSchedule schedule = make_linear_schedule(
        config.schedule_steps, config.beta_start, config.beta_end);
    const auto estimator = build_estimator(config, schedule);
    const TilingPlan plan = plan_tiles(config.grid_height, config.grid_width,
                                       config.window, config.stride);

    Rng rng = Rng(config.seed).fork(0);
    LatentGrid noisy(config.grid_height, config.grid_width, config.grid_channels);
    fill_gaussian(noisy, rng);
    const EstimatorContext ctx{config.timestep, config.condition};

    const LatentGrid tiled = consolidate(noisy, *estimator, plan, ctx);
    const LatentGrid full = estimator->estimate(noisy, ctx);

    EquivalenceReport report;
    report.max_abs_diff = max_abs_diff(tiled, full);
    report.passed = report.max_abs_diff <= kEquivalenceTolerance;

    write_manifest(config);
    std::string text;
    text += "estimator = " + estimator->describe() + "\n";
    text += "tiles = " + std::to_string(plan.tile_count()) + "\n";
    text += "max_abs_diff = " + format_double(report.max_abs_diff) + "\n";
    text += "tolerance = " + format_double(kEquivalenceTolerance) + "\n";
    text += std::string("passed = ") + (report.passed ? "true" : "false") + "\n";
    write_text_file(text, join(config.output_dir, "report.txt"));
    return report;
}

AblationReport run_stride_ablation(const ExperimentConfig& config) {
    ensure_dir(config.output_dir);
    const DiffusionSchedule schedule = make_linear_schedule(
        config.schedule_steps, config.beta_start, config.beta_end);
    const auto estimator = build_estimator(config, schedule);

    Rng rng = Rng(config.seed).fork(0);
    LatentGrid noisy(config.grid_height, config.grid_width, config.grid_channels);
    fill_gaussian(noisy, rng);
    const EstimatorContext ctx{config.timestep, config.condition};

    AblationReport result;
    std::string csv = "stride,max_boundary_jump,mean_boundary_jump\n";
    for (int stride : config.strides) {
        const TilingPlan plan = plan_tiles(config.grid_height, config.grid_width,
                                           config.window, stride);
        const LatentGrid consolidated = consolidate(noisy, *estimator, plan, ctx);
        const SeamMetricReport report = seam_metric(consolidated, plan);
        result.reports.push_back(report);
        csv += std::to_string(report.stride) + "," +
               format_double(report.max_boundary_jump) + "," +
               format_double(report.mean_boundary_jump) + "\n";
        write_channel_ppms(consolidated, config.output_dir,
                           "consolidated_s" + std::to_string(stride));
    }

    // The non-overlapping stride (stride == window) must show strictly worse
    // seams than every overlapping stride it is compared against.
    result.ordering_holds = true;
    for (const SeamMetricReport& non_overlap : result.reports) {
        if (non_overlap.stride != config.window) continue;
        for (const SeamMetricReport& other : result.reports) {
            if (other.stride >= config.window) continue;
            if (!(non_overlap.mean_boundary_jump > other.mean_boundary_jump)) {
                result.ordering_holds = false;
            }
        }
    }

    write_manifest(config);
    write_text_file(csv, join(config.output_dir, "seam_metrics.csv"));
    return result;
}

ConvergenceReport run_sds_convergence(const ExperimentConfig& config) {
    ensure_dir(config.output_dir);
    const DiffusionSchedule schedule = make_linear_schedule(
        config.schedule_steps, config.beta_start, config.beta_end);
    const auto estimator = build_estimator(config, schedule);
    const TilingPlan plan = plan_tiles(config.grid_height, config.grid_width,
                                       config.window, config.stride);

    const LatentGrid initial(config.grid_height, config.grid_width,
                             config.grid_channels);
    const LatentGrid target(config.grid_height, config.grid_width,
                            config.grid_channels, config.target_mean);

    OptimizeConfig opt;
    opt.steps = config.steps;
    opt.learning_rate = config.learning_rate;
    opt.t_min = config.t_min;
    opt.t_max = config.t_max;
    opt.omega_mode = config.omega_mode;
    opt.seed = config.seed;
    opt.condition = config.condition;

    const OptimizeResult run =
        optimize(initial, *estimator, plan, schedule, opt, &target);

    ConvergenceReport report;
    report.initial_error = max_abs_diff(initial, target);
    report.final_error = run.trace.empty() ? report.initial_error
                                           : run.trace.back().target_error;
    report.trace = run.trace;

    // Trailing averages over the last kTrailingWindow steps must never
    // increase once the window is full.
    report.monotone_trailing = true;
    if (static_cast<int>(run.trace.size()) >= kTrailingWindow) {
        double window_sum = 0.0;
        for (int i = 0; i < kTrailingWindow; ++i) {
            window_sum += run.trace[i].target_error;
        }
        double previous = window_sum;
        for (std::size_t i = kTrailingWindow; i < run.trace.size(); ++i) {
            window_sum += run.trace[i].target_error -
                          run.trace[i - kTrailingWindow].target_error;
            if (window_sum > previous + 1e-12) {
                report.monotone_trailing = false;
                break;
            }
            previous = window_sum;
        }
    }
    report.passed = report.final_error < config.convergence_threshold &&
                    report.monotone_trailing;

    write_manifest(config);
    write_trace_csv(run.trace, join(config.output_dir, "trace.csv"));

    LatentGrid clamped = run.params;
    for (std::size_t i = 0; i < clamped.size(); ++i) {
        clamped[i] = std::clamp(clamped[i], 0.0, 1.0);
    }
    write_channel_ppms(clamped, config.output_dir, "final");

    std::string text;
    text += "estimator = " + estimator->describe() + "\n";
    text += "initial_error = " + format_double(report.initial_error) + "\n";
    text += "final_error = " + format_double(report.final_error) + "\n";
    text += std::string("monotone_trailing = ") +
            (report.monotone_trailing ? "true" : "false") + "\n";
    text += "threshold = " + format_double(config.convergence_threshold) + "\n";
    text += std::string("passed = ") + (report.passed ? "true" : "false") + "\n";
    write_text_file(text, join(config.output_dir, "report.txt"));
    return report;
}

void run_shading_demo(const ExperimentConfig& config) {
    ensure_dir(config.output_dir);
    const SdfFn sdf = sphere_sdf(config.sphere_radius);
    const Vec3 albedo{config.albedo_r, config.albedo_g, config.albedo_b};
    constexpr double kTau = 6.283185307179586;

    for (int i = 0; i < kDemoAzimuths; ++i) {
        const double azimuth = kTau * i / kDemoAzimuths;
        const CameraPose camera{config.camera_radius, config.camera_polar, azimuth};
        const CameraPose light_pose{config.light_radius, config.light_polar,
                                    azimuth + config.light_azimuth_offset};
        PointLight light;
        light.position = light_pose.position();
        light.color = {config.light_color, config.light_color, config.light_color};
        light.ambient = {config.light_ambient, config.light_ambient,
                         config.light_ambient};

        for (RenderMode mode : {RenderMode::kShaded, RenderMode::kTextureless,
                                RenderMode::kNormal}) {
            const LatentGrid image = render_sdf(sdf, camera, light, mode,
                                                config.resolution, albedo);
            write_ppm(image, join(config.output_dir,
                                  render_mode_name(mode) + "_az" +
                                      std::to_string(i) + ".ppm"));
        }
    }
    write_manifest(config);
}

void write_trace_csv(const std::vector<TraceRow>& trace, const std::string& path) {
    std::string csv = "step,t,omega,residual_norm,target_error\n";
    for (const TraceRow& row : trace) {
        csv += std::to_string(row.step) + "," + std::to_string(row.t) + "," +
               format_double(row.omega) + "," +
               format_double(row.residual_norm) + ",";
        if (row.has_target_error) csv += format_double(row.target_error);
        csv += "\n";
    }
    write_text_file(csv, path);
}

void write_text_file(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace tilesds
