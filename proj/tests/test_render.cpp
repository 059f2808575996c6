#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "tilesds/render.hpp"

using namespace tilesds;

namespace {

constexpr double kPi = 3.141592653589793;

int count_hits(const LatentGrid& image) {
    int hits = 0;
    for (int r = 0; r < image.height(); ++r) {
        for (int c = 0; c < image.width(); ++c) {
            if (image.at(r, c, 0) != 0.0 || image.at(r, c, 1) != 0.0 ||
                image.at(r, c, 2) != 0.0) {
                ++hits;
            }
        }
    }
    return hits;
}

}  // namespace

TEST_CASE("light behind the surface leaves only the ambient term") {
    const SurfaceSample sample{{0, 0, 0}, {0, 0, 1}, {0.8, 0.6, 0.4}};
    const PointLight light{{0, 0, -5}, {1, 1, 1}, {0.25, 0.5, 0.75}};
    const Vec3 c = shade(sample, light);
    CHECK(c.x == doctest::Approx(0.8 * 0.25).epsilon(1e-15));
    CHECK(c.y == doctest::Approx(0.6 * 0.5).epsilon(1e-15));
    CHECK(c.z == doctest::Approx(0.4 * 0.75).epsilon(1e-15));
}

TEST_CASE("aligned normal with white light and albedo saturates to one") {
    const SurfaceSample sample{{0, 0, 0}, {0, 0, 1}, {1, 1, 1}};
    const PointLight light{{0, 0, 3}, {1, 1, 1}, {0, 0, 0}};
    const Vec3 c = shade(sample, light);
    CHECK(c.x == 1.0);
    CHECK(c.y == 1.0);
    CHECK(c.z == 1.0);
}

TEST_CASE("a 60-degree normal halves the diffuse term exactly") {
    const SurfaceSample sample{
        {0, 0, 0}, {std::sqrt(3.0) / 2.0, 0, 0.5}, {1.0, 0.5, 0.25}};
    const PointLight light{{0, 0, 2}, {1, 1, 1}, {0, 0, 0}};
    const Vec3 c = shade(sample, light);
    CHECK(std::abs(c.x - 0.5) <= 1e-12);
    CHECK(std::abs(c.y - 0.25) <= 1e-12);
    CHECK(std::abs(c.z - 0.125) <= 1e-12);
}

TEST_CASE("no ambient and a light behind the surface shade to exact zero") {
    const SurfaceSample sample{{0, 0, 0}, {0, 0, 1}, {0.9, 0.7, 0.5}};
    const PointLight light{{0, 0, -3}, {1, 1, 1}, {0, 0, 0}};
    const Vec3 c = shade(sample, light);
    CHECK(c.x == 0.0);
    CHECK(c.y == 0.0);
    CHECK(c.z == 0.0);
}

TEST_CASE("shade rejects a light sitting on the surface point") {
    const SurfaceSample sample{{1, 2, 3}, {0, 0, 1}, {1, 1, 1}};
    const PointLight light{{1, 2, 3}, {1, 1, 1}, {0, 0, 0}};
    CHECK_THROWS_AS(shade(sample, light), std::invalid_argument);
}

TEST_CASE("shade output grows with the cosine channelwise") {
    const PointLight light{{0, 0, 5}, {0.9, 0.8, 0.7}, {0.05, 0.05, 0.05}};
    double previous = -1.0;
    for (double angle = kPi / 2; angle >= 0.0; angle -= kPi / 36) {
        const SurfaceSample sample{
            {0, 0, 0}, {std::sin(angle), 0, std::cos(angle)}, {1, 0.8, 0.6}};
        const Vec3 c = shade(sample, light);
        CHECK(c.x >= previous);
        previous = c.x;
    }
}

TEST_CASE("textureless shading ignores the albedo") {
    const PointLight light{{1, 2, 4}, {0.9, 0.9, 0.9}, {0.1, 0.1, 0.1}};
    const SurfaceSample a{{0, 0, 0}, {0, 0, 1}, {0.9, 0.1, 0.3}};
    SurfaceSample b = a;
    b.albedo = {0.2, 0.7, 0.5};
    const Vec3 ca = shade_textureless(a, light);
    const Vec3 cb = shade_textureless(b, light);
    CHECK(ca.x == cb.x);
    CHECK(ca.y == cb.y);
    CHECK(ca.z == cb.z);

    SurfaceSample white = a;
    white.albedo = {1, 1, 1};
    const Vec3 cw = shade(white, light);
    CHECK(ca.x == cw.x);
    CHECK(ca.y == cw.y);
    CHECK(ca.z == cw.z);
}

TEST_CASE("blob bias formula") {
    CHECK(density_blob_bias(0.0) == 0.0);
    CHECK(density_blob_bias(2.0) == 4.0);
    CHECK(density_blob_bias(3.0, BlobParams{0.5, 1.0}) == 2.0);
}

TEST_CASE("blob bias is zero at the blob radius and symmetric around it") {
    const BlobParams params{1.3, 0.8};
    CHECK(density_blob_bias(params.radius, params) == 0.0);
    for (double d = 0.1; d < 2.0; d += 0.3) {
        CHECK(density_blob_bias(params.radius + d, params) ==
              doctest::Approx(density_blob_bias(params.radius - d, params))
                  .epsilon(1e-15));
        CHECK(density_blob_bias(params.radius + d, params) > 0.0);
    }
}

TEST_CASE("default blob bias returns the squared input across a sweep") {
    for (int i = 0; i < 1000; ++i) {
        const double mu = 0.004 * i;
        CHECK(density_blob_bias(mu) == mu * mu);
    }
}

TEST_CASE("frontal normal render encodes the camera axis at the center pixel") {
    const SdfFn sdf = sphere_sdf(1.0);
    const CameraPose camera{3.0, kPi / 2, 0.0};
    const PointLight light{{5, 0, 0}, {1, 1, 1}, {0, 0, 0}};
    // Odd resolution so one pixel sits exactly on the optical axis.
    const LatentGrid image = render_sdf(sdf, camera, light, RenderMode::kNormal, 65);
    const int mid = 32;
    CHECK(image.at(mid, mid, 0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(image.at(mid, mid, 1) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(image.at(mid, mid, 2) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("an empty scene renders pure background") {
    const SdfFn empty = [](const Vec3&) { return 1.0; };
    const CameraPose camera{3.0, 1.2, 0.4};
    const PointLight light{{5, 0, 0}, {1, 1, 1}, {0, 0, 0}};
    const LatentGrid image =
        render_sdf(empty, camera, light, RenderMode::kShaded, 32);
    CHECK(count_hits(image) == 0);
}

TEST_CASE("sphere silhouette area matches the projected disc within 2%") {
    const double sphere_radius = 1.0;
    const double camera_radius = 3.0;
    const int resolution = 128;
    const SdfFn sdf = sphere_sdf(sphere_radius);
    const CameraPose camera{camera_radius, 1.1, 0.7};
    const PointLight light{{4, 4, 4}, {1, 1, 1}, {0.2, 0.2, 0.2}};
    const LatentGrid image =
        render_sdf(sdf, camera, light, RenderMode::kNormal, resolution);

    const double tangent_angle = std::asin(sphere_radius / camera_radius);
    const double disc_radius_pixels = resolution / 2.0 *
                                      std::tan(tangent_angle) /
                                      std::tan(kFovRadians / 2.0);
    const double expected = kPi * disc_radius_pixels * disc_radius_pixels;
    CHECK(std::abs(count_hits(image) - expected) <= 0.02 * expected);
}

TEST_CASE("textureless sphere shading matches the analytic cosine law") {
    // Light placed at the camera: every visible point's intensity is the
    // clamped cosine between its normal and the direction to the light.
    const double sphere_radius = 1.0;
    const SdfFn sdf = sphere_sdf(sphere_radius);
    const CameraPose camera{3.0, kPi / 2, 0.0};
    const Vec3 eye = camera.position();
    const PointLight light{eye, {1, 1, 1}, {0, 0, 0}};
    const int resolution = 64;
    const LatentGrid image =
        render_sdf(sdf, camera, light, RenderMode::kTextureless, resolution);

    const Vec3 forward = normalized({-eye.x, -eye.y, -eye.z});
    const Vec3 world_up{0, 0, 1};
    const Vec3 right = normalized(cross(forward, world_up));
    const Vec3 up = cross(right, forward);
    const double half_extent = std::tan(kFovRadians / 2.0);

    int compared = 0;
    for (int row = 0; row < resolution; ++row) {
        for (int col = 0; col < resolution; ++col) {
            const double u =
                ((col + 0.5) / resolution * 2.0 - 1.0) * half_extent;
            const double v =
                (1.0 - (row + 0.5) / resolution * 2.0) * half_extent;
            const Vec3 dir = normalized(forward + u * right + v * up);
            // Analytic ray-sphere intersection.
            const double b = dot(eye, dir);
            const double disc = b * b - (dot(eye, eye) - sphere_radius * sphere_radius);
            if (disc < 1e-3) continue;  // skip grazing rays near the rim
            const double t = -b - std::sqrt(disc);
            const Vec3 p = eye + t * dir;
            const Vec3 n = normalized(p);
            const Vec3 to_light = light.position - p;
            const double cosine =
                std::max(0.0, dot(n, to_light) / norm(to_light));
            CHECK(std::abs(image.at(row, col, 0) - std::min(1.0, cosine)) <=
                  1e-6);
            ++compared;
        }
    }
    CHECK(compared > 500);
}

TEST_CASE("a frontal light shades the sphere center brighter than a grazing one") {
    const SdfFn sdf = sphere_sdf(1.0);
    const CameraPose camera{3.0, kPi / 2, 0.0};
    const CameraPose frontal{4.0, kPi / 2, 0.0};
    const CameraPose grazing{4.0, kPi / 2, kPi / 2 * 0.98};
    const int mid = 32;
    const LatentGrid bright = render_sdf(
        sdf, camera, PointLight{frontal.position(), {1, 1, 1}, {0, 0, 0}},
        RenderMode::kShaded, 65, {1, 1, 1});
    const LatentGrid dim = render_sdf(
        sdf, camera, PointLight{grazing.position(), {1, 1, 1}, {0, 0, 0}},
        RenderMode::kShaded, 65, {1, 1, 1});
    CHECK(bright.at(mid, mid, 0) > dim.at(mid, mid, 0));
}

TEST_CASE("rotating camera and light together leaves the render unchanged") {
    const SdfFn sdf = sphere_sdf(1.0);
    const double delta = kPi / 3;
    const CameraPose cam_a{3.0, 1.2, 0.5};
    const CameraPose cam_b{3.0, 1.2, 0.5 + delta};
    const CameraPose light_a{4.0, 0.9, 1.1};
    const CameraPose light_b{4.0, 0.9, 1.1 + delta};
    for (RenderMode mode : {RenderMode::kShaded, RenderMode::kTextureless,
                            RenderMode::kNormal}) {
        const LatentGrid a = render_sdf(
            sdf, cam_a, PointLight{light_a.position(), {1, 1, 1}, {0.1, 0.1, 0.1}},
            mode, 96, {0.7, 0.5, 0.3});
        const LatentGrid b = render_sdf(
            sdf, cam_b, PointLight{light_b.position(), {1, 1, 1}, {0.1, 0.1, 0.1}},
            mode, 96, {0.7, 0.5, 0.3});
        CHECK(max_abs_diff(a, b) <= 1e-6);
    }
}

TEST_CASE("render_sdf validates camera and resolution") {
    const SdfFn sdf = sphere_sdf(1.0);
    const PointLight light{{4, 0, 0}, {1, 1, 1}, {0, 0, 0}};
    const CameraPose degenerate_polar{3.0, 0.0, 0.0};
    const CameraPose valid{3.0, 1.0, 0.0};
    const CameraPose negative_radius{-1.0, 1.0, 0.0};
    CHECK_THROWS_AS(
        render_sdf(sdf, degenerate_polar, light, RenderMode::kShaded, 32),
        std::invalid_argument);
    CHECK_THROWS_AS(render_sdf(sdf, valid, light, RenderMode::kShaded, 300),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        render_sdf(sdf, negative_radius, light, RenderMode::kShaded, 32),
        std::invalid_argument);
}
