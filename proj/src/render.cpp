#include "tilesds/render.hpp"

#include <cmath>
#include <stdexcept>

namespace tilesds {

namespace {

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

void require_unit_range(const Vec3& v, const char* what) {
    if (v.x < 0.0 || v.x > 1.0 || v.y < 0.0 || v.y > 1.0 || v.z < 0.0 ||
        v.z > 1.0) {
        throw std::invalid_argument(std::string(what) +
                                    " components must be in [0, 1]");
    }
}

Vec3 sdf_normal(const SdfFn& sdf, const Vec3& p) {
    // Central differences; h well above the hit tolerance noise floor.
    constexpr double h = 1e-5;
    const Vec3 g{
        sdf({p.x + h, p.y, p.z}) - sdf({p.x - h, p.y, p.z}),
        sdf({p.x, p.y + h, p.z}) - sdf({p.x, p.y - h, p.z}),
        sdf({p.x, p.y, p.z + h}) - sdf({p.x, p.y, p.z - h}),
    };
    return normalized(g);
}

// Newton iterations on f(t) = sdf(eye + t*dir) to polish a detected hit well
// below the march tolerance. Bails out near grazing incidence where the
// directional derivative degenerates; hit/miss classification is unaffected.
double refine_hit(const SdfFn& sdf, const Vec3& eye, const Vec3& dir,
                  double traveled) {
    for (int i = 0; i < 4; ++i) {
        const Vec3 p = eye + traveled * dir;
        const double d = sdf(p);
        const double slope = dot(sdf_normal(sdf, p), dir);
        if (std::abs(slope) < 1e-3) break;
        const double step =
            std::clamp(d / slope, -10.0 * kHitTolerance, 10.0 * kHitTolerance);
        traveled = std::max(traveled - step, 0.0);
    }
    return traveled;
}

}  // namespace

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
    return (1.0 / n) * v;
}

Vec3 CameraPose::position() const {
    const double sp = std::sin(polar);
    return {radius * sp * std::cos(azimuth), radius * sp * std::sin(azimuth),
            radius * std::cos(polar)};
}

Vec3 shade(const SurfaceSample& sample, const PointLight& light) {
    require_unit_range(light.color, "light color");
    require_unit_range(light.ambient, "light ambient");
    const Vec3 to_light = light.position - sample.position;
    const double distance = norm(to_light);
    if (distance == 0.0) {
        throw std::invalid_argument("shade: light coincides with surface point");
    }
    const double cosine =
        std::max(0.0, dot(sample.normal, to_light) / distance);
    return {clamp01(sample.albedo.x * (light.color.x * cosine + light.ambient.x)),
            clamp01(sample.albedo.y * (light.color.y * cosine + light.ambient.y)),
            clamp01(sample.albedo.z * (light.color.z * cosine + light.ambient.z))};
}

Vec3 shade_textureless(const SurfaceSample& sample, const PointLight& light) {
    SurfaceSample white = sample;
    white.albedo = {1.0, 1.0, 1.0};
    return shade(white, light);
}

double density_blob_bias(double mu_norm, const BlobParams& params) {
    const double d = mu_norm - params.radius;
    return params.lambda_tau * (d * d);
}

SdfFn sphere_sdf(double radius) {
    if (!(radius > 0.0)) {
        throw std::invalid_argument("sphere_sdf: radius must be positive");
    }
    return [radius](const Vec3& p) { return norm(p) - radius; };
}

RenderMode parse_render_mode(const std::string& name) {
    if (name == "shaded") return RenderMode::kShaded;
    if (name == "textureless") return RenderMode::kTextureless;
    if (name == "normal") return RenderMode::kNormal;
    throw std::invalid_argument("unknown render mode '" + name + "'");
}

std::string render_mode_name(RenderMode mode) {
    switch (mode) {
        case RenderMode::kShaded: return "shaded";
        case RenderMode::kTextureless: return "textureless";
        case RenderMode::kNormal: return "normal";
    }
    throw std::logic_error("render_mode_name: unhandled mode");
}

LatentGrid render_sdf(const SdfFn& sdf, const CameraPose& camera,
                      const PointLight& light, RenderMode mode, int resolution,
                      const Vec3& albedo) {
    if (resolution < 1 || resolution > 256) {
        throw std::invalid_argument("render_sdf: resolution must be in [1, 256]");
    }
    if (!(camera.polar > 0.0 && camera.polar < 3.141592653589793)) {
        throw std::invalid_argument("render_sdf: polar must be in (0, pi)");
    }
    if (!(camera.radius > 0.0)) {
        throw std::invalid_argument("render_sdf: camera radius must be positive");
    }

    const Vec3 eye = camera.position();
    const Vec3 forward = normalized({-eye.x, -eye.y, -eye.z});
    const Vec3 world_up{0.0, 0.0, 1.0};
    const Vec3 right = normalized(cross(forward, world_up));
    const Vec3 up = cross(right, forward);
    const double half_extent = std::tan(kFovRadians / 2.0);
    const double far_limit = camera.radius + 8.0;

    LatentGrid image(resolution, resolution, 3);
    for (int row = 0; row < resolution; ++row) {
        for (int col = 0; col < resolution; ++col) {
            const double u = ((col + 0.5) / resolution * 2.0 - 1.0) * half_extent;
            const double v = (1.0 - (row + 0.5) / resolution * 2.0) * half_extent;
            const Vec3 dir = normalized(forward + u * right + v * up);

            double traveled = 0.0;
            bool hit = false;
            Vec3 p = eye;
            for (int step = 0; step < kMaxTraceSteps; ++step) {
                const double d = sdf(p);
                if (d < kHitTolerance) {
                    hit = true;
                    break;
                }
                traveled += d;
                if (traveled > far_limit) break;
                p = eye + traveled * dir;
            }
            if (!hit) continue;  // background stays black
            traveled = refine_hit(sdf, eye, dir, traveled);
            p = eye + traveled * dir;

            Vec3 color;
            if (mode == RenderMode::kNormal) {
                const Vec3 n = sdf_normal(sdf, p);
                const Vec3 n_cam{dot(n, right), dot(n, up), dot(n, -1.0 * forward)};
                color = {0.5 * (n_cam.x + 1.0), 0.5 * (n_cam.y + 1.0),
                         0.5 * (n_cam.z + 1.0)};
                color = {clamp01(color.x), clamp01(color.y), clamp01(color.z)};
            } else {
                const SurfaceSample sample{p, sdf_normal(sdf, p), albedo};
                color = mode == RenderMode::kShaded
                            ? shade(sample, light)
                            : shade_textureless(sample, light);
            }
            image.at(row, col, 0) = color.x;
            image.at(row, col, 1) = color.y;
            image.at(row, col, 2) = color.z;
        }
    }
    return image;
}

}  // namespace tilesds
