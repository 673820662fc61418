#include "deepsea/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include <Eigen/Geometry>

namespace deepsea::synthetic {

namespace {

double hash01(std::int64_t x, std::int64_t y) {
  auto h = static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ULL ^
           static_cast<std::uint64_t>(y) * 0xC2B2AE3D27D4EB4FULL;
  h ^= h >> 31;
  h *= 0xBF58476D1CE4E5B9ULL;
  h ^= h >> 29;
  return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

// Bilinear value noise on a grid of `cell` metres.
double value_noise(double x, double y, double cell) {
  const double gx = x / cell;
  const double gy = y / cell;
  const auto x0 = static_cast<std::int64_t>(std::floor(gx));
  const auto y0 = static_cast<std::int64_t>(std::floor(gy));
  const double fx = gx - static_cast<double>(x0);
  const double fy = gy - static_cast<double>(y0);
  const double sx = fx * fx * (3.0 - 2.0 * fx);
  const double sy = fy * fy * (3.0 - 2.0 * fy);
  const double a = hash01(x0, y0), b = hash01(x0 + 1, y0);
  const double c = hash01(x0, y0 + 1), d = hash01(x0 + 1, y0 + 1);
  return (a + (b - a) * sx) + ((c + (d - c) * sx) - (a + (b - a) * sx)) * sy;
}

}  // namespace

FrameInput seafloor_frame(const CameraModel& camera, int frame_index) {
  FrameInput f;
  f.albedo = SpectrumImage(camera.width, camera.height);
  f.depth = DepthImage(camera.width, camera.height, 0.0);

  const double tilt = 35.0 * std::numbers::pi / 180.0;
  const double distance = 3.0;                     // plane distance along its normal
  const Vec3 normal(0.0, -std::sin(tilt), -std::cos(tilt));  // faces the camera
  const Vec3 u_axis = Vec3::UnitX();
  const Vec3 v_axis = normal.cross(u_axis).normalized();
  const double travel = 0.15 * frame_index;

  const Vec3 rock_center(0.35, 0.25, 2.8);
  const double rock_radius = 0.45;
  const int open_water_rows = camera.height / 8;

  for (int v = 0; v < camera.height; ++v) {
    for (int u = 0; u < camera.width; ++u) {
      if (v < open_water_rows) continue;
      const Vec3 ray((u - camera.cx) / camera.fx, (v - camera.cy) / camera.fy, 1.0);
      double best = -1.0;
      Spectrum albedo;

      const double denom = normal.dot(ray);
      if (denom < 0.0) {
        const double t = distance / -denom;
        const Vec3 p = ray * t;
        const double s = p.dot(u_axis);
        const double w = p.dot(v_axis) + travel;
        const double grain = 0.55 * value_noise(s, w, 0.02) + 0.3 * value_noise(s, w, 0.11) +
                             0.15 * value_noise(s, w, 0.5);
        const double ripple = 0.5 + 0.5 * std::sin(2.0 * std::numbers::pi * (w + 0.2 * s) / 0.35);
        const double shade = std::clamp(0.35 + 0.45 * grain + 0.15 * ripple, 0.0, 1.0);
        best = t;
        albedo = Spectrum(0.80, 0.72, 0.52) * shade;
      }

      // Ray-sphere, ray = ray * t with unnormalised direction.
      const double a = ray.squaredNorm();
      const double b = -2.0 * ray.dot(rock_center);
      const double c = rock_center.squaredNorm() - rock_radius * rock_radius;
      const double disc = b * b - 4.0 * a * c;
      if (disc >= 0.0) {
        const double t = (-b - std::sqrt(disc)) / (2.0 * a);
        if (t > 0.0 && (best < 0.0 || t < best)) {
          const Vec3 p = ray * t;
          const double n = value_noise(p.x(), p.y() + travel, 0.05);
          best = t;
          albedo = Spectrum(0.45, 0.40, 0.36) * (0.6 + 0.4 * n);
        }
      }

      if (best > 0.0) {
        f.depth(u, v) = best;  // ray has z = 1, so t is the z-depth
        f.albedo(u, v) = albedo;
      }
    }
  }
  return f;
}

FrameInput flat_frame(const CameraModel& camera, double distance, const Spectrum& albedo) {
  FrameInput f;
  f.albedo = SpectrumImage(camera.width, camera.height, albedo);
  f.depth = DepthImage(camera.width, camera.height, distance);
  return f;
}

}  // namespace deepsea::synthetic
