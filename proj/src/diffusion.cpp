#include "tilesds/diffusion.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tilesds {

namespace {

constexpr double kUniformScale = 0x1.0p-53;  // 2^-53

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

DiffusionSchedule::DiffusionSchedule(std::vector<double> beta)
    : beta_(std::move(beta)) {
    if (beta_.empty()) {
        throw std::invalid_argument("DiffusionSchedule: need at least one step");
    }
    alpha_bar_.reserve(beta_.size());
    double product = 1.0;
    for (double b : beta_) {
        if (!(b > 0.0 && b < 1.0)) {
            throw std::invalid_argument("DiffusionSchedule: beta out of (0, 1)");
        }
        product *= 1.0 - b;
        alpha_bar_.push_back(product);
    }
}

double DiffusionSchedule::beta(int t) const {
    if (t < 1 || t > num_steps()) {
        throw std::out_of_range("DiffusionSchedule::beta: t out of [1, T]");
    }
    return beta_[t - 1];
}

double DiffusionSchedule::alpha_bar(int t) const {
    if (t < 1 || t > num_steps()) {
        throw std::out_of_range("DiffusionSchedule::alpha_bar: t out of [1, T]");
    }
    return alpha_bar_[t - 1];
}

DiffusionSchedule make_linear_schedule(int num_steps, double beta_start,
                                       double beta_end) {
    if (num_steps < 1) {
        throw std::invalid_argument("make_linear_schedule: num_steps must be >= 1");
    }
    if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0)) {
        throw std::invalid_argument(
            "make_linear_schedule: need 0 < beta_start <= beta_end < 1");
    }
    std::vector<double> beta(num_steps);
    if (num_steps == 1) {
        beta[0] = beta_start;
    } else {
        const double step = (beta_end - beta_start) / (num_steps - 1);
        for (int i = 0; i < num_steps; ++i) beta[i] = beta_start + step * i;
        beta.back() = beta_end;  // inclusive endpoint, no drift
    }
    return DiffusionSchedule(std::move(beta));
}

double omega_weight(const DiffusionSchedule& schedule, int t, OmegaMode mode) {
    switch (mode) {
        case OmegaMode::kOneMinusAlphaBar:
            return 1.0 - schedule.alpha_bar(t);
        case OmegaMode::kUniform:
            schedule.alpha_bar(t);  // bounds check only
            return 1.0;
    }
    throw std::logic_error("omega_weight: unhandled mode");
}

OmegaMode parse_omega_mode(const std::string& name) {
    if (name == "one_minus_alpha_bar") return OmegaMode::kOneMinusAlphaBar;
    if (name == "uniform") return OmegaMode::kUniform;
    throw std::invalid_argument("unknown omega mode '" + name + "'");
}

std::string omega_mode_name(OmegaMode mode) {
    return mode == OmegaMode::kUniform ? "uniform" : "one_minus_alpha_bar";
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * kUniformScale;
}

double Rng::gaussian() {
    // u1 in (0, 1] keeps the log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::uniform_int(int lo, int hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
    const double span = static_cast<double>(hi) - lo + 1.0;
    const int value = lo + static_cast<int>(uniform() * span);
    return value > hi ? hi : value;
}

Rng Rng::fork(std::uint64_t stream_index) const {
    return Rng(splitmix64(seed_ ^ splitmix64(stream_index + 1)));
}

void fill_gaussian(LatentGrid& grid, Rng& rng) {
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = rng.gaussian();
}

LatentGrid add_noise(const DiffusionSchedule& schedule, const LatentGrid& latent,
                     int t, const LatentGrid& noise) {
    if (!latent.same_shape(noise)) {
        throw std::invalid_argument("add_noise: latent/noise shape mismatch");
    }
    const double ab = schedule.alpha_bar(t);
    const double signal = std::sqrt(ab);
    const double sigma = std::sqrt(1.0 - ab);
    LatentGrid out(latent.height(), latent.width(), latent.channels());
    for (std::size_t i = 0; i < latent.size(); ++i) {
        out[i] = signal * latent[i] + sigma * noise[i];
    }
    return out;
}

TimestepSample sample_timestep(Rng& rng, const DiffusionSchedule& schedule,
                               int t_min, int t_max, OmegaMode mode) {
    if (t_min < 1 || t_min > t_max || t_max > schedule.num_steps()) {
        throw std::invalid_argument(
            "sample_timestep: need 1 <= t_min <= t_max <= T");
    }
    const int t = rng.uniform_int(t_min, t_max);
    return TimestepSample{t, omega_weight(schedule, t, mode)};
}

void write_schedule(const DiffusionSchedule& schedule, const std::string& path) {
    LatentGrid grid(1, schedule.num_steps(), 2);
    for (int t = 1; t <= schedule.num_steps(); ++t) {
        grid.at(0, t - 1, 0) = schedule.beta(t);
        grid.at(0, t - 1, 1) = schedule.alpha_bar(t);
    }
    write_grid(grid, path);
}

DiffusionSchedule read_schedule(const std::string& path) {
    const LatentGrid grid = read_grid(path);
    if (grid.height() != 1 || grid.channels() != 2) {
        throw std::runtime_error("read_schedule: not a 1 x T x 2 schedule grid");
    }
    std::vector<double> beta(grid.width());
    for (int t = 0; t < grid.width(); ++t) beta[t] = grid.at(0, t, 0);
    DiffusionSchedule schedule(std::move(beta));
    // The stored alpha_bar must agree with the recomputed product bit for bit.
    for (int t = 1; t <= schedule.num_steps(); ++t) {
        if (grid.at(0, t - 1, 1) != schedule.alpha_bar(t)) {
            throw std::runtime_error(
                "read_schedule: stored alpha_bar disagrees with beta product");
        }
    }
    return schedule;
}

}  // namespace tilesds
