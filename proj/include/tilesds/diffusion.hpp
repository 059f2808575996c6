#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tilesds/grid.hpp"

namespace tilesds {

// Forward-process schedule: per-step variances beta[t] and the cumulative
// signal products alpha_bar[t] = prod_{i<=t} (1 - beta[i]). Timesteps are
// 1-based, t in [1, T]. Immutable after construction.
class DiffusionSchedule {
public:
    explicit DiffusionSchedule(std::vector<double> beta);

    int num_steps() const { return static_cast<int>(beta_.size()); }
    double beta(int t) const;
    double alpha_bar(int t) const;

    const std::vector<double>& betas() const { return beta_; }
    const std::vector<double>& alpha_bars() const { return alpha_bar_; }

private:
    std::vector<double> beta_;
    std::vector<double> alpha_bar_;
};

DiffusionSchedule make_linear_schedule(int num_steps, double beta_start,
                                       double beta_end);

// Per-timestep gradient weighting.
enum class OmegaMode {
    kOneMinusAlphaBar,  // omega(t) = 1 - alpha_bar[t] (default)
    kUniform,           // omega(t) = 1
};

double omega_weight(const DiffusionSchedule& schedule, int t, OmegaMode mode);

OmegaMode parse_omega_mode(const std::string& name);
std::string omega_mode_name(OmegaMode mode);

struct TimestepSample {
    int t = 1;
    double weight = 1.0;
};

// Deterministic random stream. Uniforms are the top 53 bits of mt19937_64
// output; Gaussians use the basic Box-Muller transform with exactly two
// uniforms per sample (u1, u2 in that order, no spare caching), so the
// uniform-to-Gaussian mapping is stateless and easy to reproduce elsewhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    double uniform();                      // [0, 1)
    double gaussian();                     // N(0, 1)
    int uniform_int(int lo, int hi);       // inclusive bounds

    // Independent stream derived from this stream's seed and an index;
    // used to give each concern (noise, inputs, ...) its own sequence.
    Rng fork(std::uint64_t stream_index) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

// Fills the grid with N(0,1) draws in row-major order.
void fill_gaussian(LatentGrid& grid, Rng& rng);

// Returns sqrt(alpha_bar[t]) * latent + sqrt(1 - alpha_bar[t]) * noise.
LatentGrid add_noise(const DiffusionSchedule& schedule, const LatentGrid& latent,
                     int t, const LatentGrid& noise);

// Draws t uniformly from [t_min, t_max] and attaches omega(t).
TimestepSample sample_timestep(Rng& rng, const DiffusionSchedule& schedule,
                               int t_min, int t_max, OmegaMode mode);

// Schedule round-trip through the binary grid format, stored as a 1 x T x 2
// grid with channel 0 = beta and channel 1 = alpha_bar.
void write_schedule(const DiffusionSchedule& schedule, const std::string& path);
DiffusionSchedule read_schedule(const std::string& path);

}  // namespace tilesds
