#pragma once

#include <functional>

#include "tilesds/grid.hpp"

namespace tilesds {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}
inline Vec3 operator*(double s, const Vec3& v) {
    return {s * v.x, s * v.y, s * v.z};
}
inline double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);
Vec3 normalized(const Vec3& v);

// Point light with RGB color and ambient term, both componentwise in [0, 1].
struct PointLight {
    Vec3 position;
    Vec3 color{1.0, 1.0, 1.0};
    Vec3 ambient{0.0, 0.0, 0.0};
};

// A shaded point: world position, unit surface normal and RGB albedo.
struct SurfaceSample {
    Vec3 position;
    Vec3 normal;
    Vec3 albedo{1.0, 1.0, 1.0};
};

// Camera on a sphere around the origin, always looking at the origin.
// polar is measured from the +z axis, in (0, pi); azimuth in [0, 2*pi).
struct CameraPose {
    double radius = 3.0;
    double polar = 1.5707963267948966;
    double azimuth = 0.0;

    Vec3 position() const;
};

// Scale and radius of the center-peaked geometry bias.
struct BlobParams {
    double lambda_tau = 1.0;
    double radius = 0.0;
};

// Diffuse point-light shading: albedo * (light_color * max(0, cos) + ambient)
// componentwise, where cos is the angle between the normal and the direction
// to the light; output clamped to [0, 1].
Vec3 shade(const SurfaceSample& sample, const PointLight& light);

// Same with the albedo replaced by white; used to supervise geometry
// independently of color.
Vec3 shade_textureless(const SurfaceSample& sample, const PointLight& light);

// lambda_tau * (mu_norm - radius)^2: the bias added to predicted geometry
// values to concentrate content at the origin. mu_norm is the norm of a point
// sampled along a ray.
double density_blob_bias(double mu_norm, const BlobParams& params = {});

using SdfFn = std::function<double(const Vec3&)>;

SdfFn sphere_sdf(double radius);

enum class RenderMode { kShaded, kTextureless, kNormal };

RenderMode parse_render_mode(const std::string& name);
std::string render_mode_name(RenderMode mode);

// Sphere-tracing limits and the square pinhole field of view (vertical ==
// horizontal). Rays that fail to converge within the step budget are misses.
inline constexpr int kMaxTraceSteps = 128;
inline constexpr double kHitTolerance = 1e-4;
inline constexpr double kFovRadians = 0.7853981633974483;  // 45 degrees

// Sphere-traces one ray per pixel from the camera through a square image
// plane. Hits are shaded per the mode; normal mode encodes the camera-space
// normal as RGB via (n + 1) / 2, so a surface facing the camera reads
// (0.5, 0.5, 1). Misses are black. Returns a resolution x resolution x 3
// grid with values in [0, 1].
LatentGrid render_sdf(const SdfFn& sdf, const CameraPose& camera,
                      const PointLight& light, RenderMode mode, int resolution,
                      const Vec3& albedo = {1.0, 1.0, 1.0});

}  // namespace tilesds
