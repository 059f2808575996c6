#include "tilesds/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "tilesds/tiling.hpp"

namespace tilesds {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing chars");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected integer, got '" +
                          value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing chars");
        if (!std::isfinite(v)) throw std::invalid_argument("not finite");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected number, got '" +
                          value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing chars");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key +
                          "': expected unsigned integer, got '" + value + "'");
    }
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_int(key, trim(item)));
    }
    if (out.empty()) {
        throw ConfigError("config key '" + key + "': expected a list of integers");
    }
    return out;
}

void apply_pair(ExperimentConfig& c, const std::string& key,
                const std::string& value) {
    if (key == "experiment") c.experiment = value;
    else if (key == "grid_height") c.grid_height = parse_int(key, value);
    else if (key == "grid_width") c.grid_width = parse_int(key, value);
    else if (key == "grid_channels") c.grid_channels = parse_int(key, value);
    else if (key == "window") c.window = parse_int(key, value);
    else if (key == "stride") c.stride = parse_int(key, value);
    else if (key == "strides") c.strides = parse_int_list(key, value);
    else if (key == "schedule_steps") c.schedule_steps = parse_int(key, value);
    else if (key == "beta_start") c.beta_start = parse_double(key, value);
    else if (key == "beta_end") c.beta_end = parse_double(key, value);
    else if (key == "omega") {
        try {
            c.omega_mode = parse_omega_mode(value);
        } catch (const std::exception&) {
            throw ConfigError(
                "config key 'omega': expected one_minus_alpha_bar or uniform, got '" +
                value + "'");
        }
    }
    else if (key == "timestep") c.timestep = parse_int(key, value);
    else if (key == "estimator") c.estimator = value;
    else if (key == "estimator_constant") c.estimator_constant = parse_double(key, value);
    else if (key == "estimator_mean") c.estimator_mean = parse_double(key, value);
    else if (key == "estimator_radius") c.estimator_radius = parse_int(key, value);
    else if (key == "steps") c.steps = parse_int(key, value);
    else if (key == "learning_rate") c.learning_rate = parse_double(key, value);
    else if (key == "t_min") c.t_min = parse_int(key, value);
    else if (key == "t_max") c.t_max = parse_int(key, value);
    else if (key == "target_mean") c.target_mean = parse_double(key, value);
    else if (key == "convergence_threshold") c.convergence_threshold = parse_double(key, value);
    else if (key == "condition") c.condition = value;
    else if (key == "resolution") c.resolution = parse_int(key, value);
    else if (key == "sphere_radius") c.sphere_radius = parse_double(key, value);
    else if (key == "camera_radius") c.camera_radius = parse_double(key, value);
    else if (key == "camera_polar") c.camera_polar = parse_double(key, value);
    else if (key == "light_radius") c.light_radius = parse_double(key, value);
    else if (key == "light_polar") c.light_polar = parse_double(key, value);
    else if (key == "light_azimuth_offset") c.light_azimuth_offset = parse_double(key, value);
    else if (key == "albedo_r") c.albedo_r = parse_double(key, value);
    else if (key == "albedo_g") c.albedo_g = parse_double(key, value);
    else if (key == "albedo_b") c.albedo_b = parse_double(key, value);
    else if (key == "light_color") c.light_color = parse_double(key, value);
    else if (key == "light_ambient") c.light_ambient = parse_double(key, value);
    else if (key == "seed") c.seed = parse_u64(key, value);
    else if (key == "output_dir") c.output_dir = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

void check(bool ok, const std::string& key, const std::string& requirement) {
    if (!ok) throw ConfigError("config key '" + key + "': " + requirement);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config file '" + path + "' line " +
                              std::to_string(line_number) +
                              ": expected key = value");
        }
        pairs.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return pairs;
}

ExperimentConfig make_config(
    const std::vector<std::pair<std::string, std::string>>& file_pairs,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
    ExperimentConfig config;
    for (const auto& [key, value] : file_pairs) apply_pair(config, key, value);
    for (const auto& [key, value] : overrides) apply_pair(config, key, value);
    validate_config(config);
    return config;
}

ExperimentConfig load_config(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
    return make_config(path.empty()
                           ? std::vector<std::pair<std::string, std::string>>{}
                           : read_config_file(path),
                       overrides);
}

void validate_config(const ExperimentConfig& c) {
    static const std::vector<std::string> kExperiments = {
        "equivalence", "stride_ablation", "sds_convergence", "shading_demo"};
    check(std::find(kExperiments.begin(), kExperiments.end(), c.experiment) !=
              kExperiments.end(),
          "experiment",
          "must be one of equivalence, stride_ablation, sds_convergence, "
          "shading_demo (got '" + c.experiment + "')");

    check(c.grid_height >= 1, "grid_height", "must be >= 1");
    check(c.grid_width >= 1, "grid_width", "must be >= 1");
    check(c.grid_channels >= 1, "grid_channels", "must be >= 1");
    check(c.window >= 1, "window", "must be >= 1");
    check(c.window <= std::min(c.grid_height, c.grid_width), "window",
          "must not exceed the grid dimensions");
    check(c.stride >= 1, "stride", "must be >= 1");
    for (int s : c.strides) check(s >= 1, "strides", "entries must be >= 1");

    check(c.schedule_steps >= 1, "schedule_steps", "must be >= 1");
    check(c.beta_start > 0.0 && c.beta_start <= c.beta_end && c.beta_end < 1.0,
          "beta_start", "need 0 < beta_start <= beta_end < 1");
    check(c.timestep >= 1 && c.timestep <= c.schedule_steps, "timestep",
          "must be in [1, schedule_steps]");

    check(c.estimator == "constant" || c.estimator == "gaussian_prior" ||
              c.estimator == "box_blur",
          "estimator", "must be constant, gaussian_prior or box_blur (got '" +
                           c.estimator + "')");
    check(c.estimator_radius >= 1, "estimator_radius", "must be >= 1");
    if (c.estimator == "box_blur") {
        check(2 * c.estimator_radius + 1 <= c.window, "estimator_radius",
              "blur window must fit inside the tile window");
    }

    // Dry-run the tilings the experiment will actually build, so stride
    // combinations that leave coverage holes fail here by key name.
    const auto check_tiling = [&c](int stride, const std::string& key) {
        try {
            plan_tiles(c.grid_height, c.grid_width, c.window, stride);
        } catch (const std::exception& e) {
            throw ConfigError("config key '" + key + "': " + e.what());
        }
    };
    if (c.experiment == "equivalence" || c.experiment == "sds_convergence") {
        check_tiling(c.stride, "stride");
    }
    if (c.experiment == "stride_ablation") {
        for (int s : c.strides) check_tiling(s, "strides");
    }

    check(c.steps >= 0, "steps", "must be >= 0");
    check(c.learning_rate > 0.0, "learning_rate", "must be > 0");
    check(c.t_min >= 1 && c.t_min <= c.t_max && c.t_max <= c.schedule_steps,
          "t_min", "need 1 <= t_min <= t_max <= schedule_steps");
    check(c.convergence_threshold > 0.0, "convergence_threshold", "must be > 0");

    check(c.resolution >= 1 && c.resolution <= 256, "resolution",
          "must be in [1, 256]");
    check(c.sphere_radius > 0.0, "sphere_radius", "must be > 0");
    check(c.camera_radius > c.sphere_radius, "camera_radius",
          "camera must sit outside the sphere");
    check(c.camera_polar > 0.0 && c.camera_polar < 3.141592653589793,
          "camera_polar", "must be in (0, pi)");
    check(c.light_radius > 0.0, "light_radius", "must be > 0");
    check(c.light_polar > 0.0 && c.light_polar < 3.141592653589793,
          "light_polar", "must be in (0, pi)");
    for (auto [v, key] : {std::pair<double, const char*>{c.albedo_r, "albedo_r"},
                          {c.albedo_g, "albedo_g"},
                          {c.albedo_b, "albedo_b"},
                          {c.light_color, "light_color"},
                          {c.light_ambient, "light_ambient"}}) {
        check(v >= 0.0 && v <= 1.0, key, "must be in [0, 1]");
    }

    check(!c.output_dir.empty(), "output_dir", "must not be empty");
}

std::string manifest_text(const ExperimentConfig& c) {
    std::map<std::string, std::string> kv;
    kv["experiment"] = c.experiment;
    kv["grid_height"] = std::to_string(c.grid_height);
    kv["grid_width"] = std::to_string(c.grid_width);
    kv["grid_channels"] = std::to_string(c.grid_channels);
    kv["window"] = std::to_string(c.window);
    kv["stride"] = std::to_string(c.stride);
    {
        std::string joined;
        for (std::size_t i = 0; i < c.strides.size(); ++i) {
            if (i) joined += ",";
            joined += std::to_string(c.strides[i]);
        }
        kv["strides"] = joined;
    }
    kv["schedule_steps"] = std::to_string(c.schedule_steps);
    kv["beta_start"] = format_double(c.beta_start);
    kv["beta_end"] = format_double(c.beta_end);
    kv["omega"] = omega_mode_name(c.omega_mode);
    kv["timestep"] = std::to_string(c.timestep);
    kv["estimator"] = c.estimator;
    kv["estimator_constant"] = format_double(c.estimator_constant);
    kv["estimator_mean"] = format_double(c.estimator_mean);
    kv["estimator_radius"] = std::to_string(c.estimator_radius);
    kv["steps"] = std::to_string(c.steps);
    kv["learning_rate"] = format_double(c.learning_rate);
    kv["t_min"] = std::to_string(c.t_min);
    kv["t_max"] = std::to_string(c.t_max);
    kv["target_mean"] = format_double(c.target_mean);
    kv["convergence_threshold"] = format_double(c.convergence_threshold);
    kv["condition"] = c.condition;
    kv["resolution"] = std::to_string(c.resolution);
    kv["sphere_radius"] = format_double(c.sphere_radius);
    kv["camera_radius"] = format_double(c.camera_radius);
    kv["camera_polar"] = format_double(c.camera_polar);
    kv["light_radius"] = format_double(c.light_radius);
    kv["light_polar"] = format_double(c.light_polar);
    kv["light_azimuth_offset"] = format_double(c.light_azimuth_offset);
    kv["albedo_r"] = format_double(c.albedo_r);
    kv["albedo_g"] = format_double(c.albedo_g);
    kv["albedo_b"] = format_double(c.albedo_b);
    kv["light_color"] = format_double(c.light_color);
    kv["light_ambient"] = format_double(c.light_ambient);
    kv["seed"] = std::to_string(c.seed);

    std::string text;
    for (const auto& [key, value] : kv) {
        text += key + " = " + value + "\n";
    }
    return text;
}

}  // namespace tilesds
