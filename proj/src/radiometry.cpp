#include "deepsea/radiometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Geometry>

#include "deepsea/parallel.hpp"

namespace deepsea::radiometry {

Vec3 ray_through(const CameraModel& camera, double x, double y) {
  return Vec3((x - camera.cx) / camera.fx, (y - camera.cy) / camera.fy, 1.0).normalized();
}

Vec3 pixel_ray(const CameraModel& camera, double u, double v) {
  if (!(u >= 0.0 && u < camera.width && v >= 0.0 && v < camera.height))
    throw std::out_of_range("pixel outside image");
  return ray_through(camera, u, v);
}

Vec3 unproject(const CameraModel& camera, double u, double v, double z_depth) {
  if (!(z_depth > 0.0)) throw std::invalid_argument("z_depth must be positive");
  return Vec3((u - camera.cx) / camera.fx * z_depth, (v - camera.cy) / camera.fy * z_depth,
              z_depth);
}

double ray_length(const CameraModel& camera, double u, double v, double z_depth) {
  if (!(z_depth > 0.0)) return 0.0;
  return unproject(camera, u, v, z_depth).norm();
}

namespace {

// Tangent along one image axis at (u, v). Returns false when neither
// neighbour has valid depth.
bool tangent(const CameraModel& camera, const DepthImage& depth, int u, int v, int du, int dv,
             Vec3& out) {
  const auto valid = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < depth.width() && y < depth.height() && depth(x, y) > 0.0;
  };
  const auto point = [&](int x, int y) { return unproject(camera, x, y, depth(x, y)); };
  const bool fwd = valid(u + du, v + dv);
  const bool bwd = valid(u - du, v - dv);
  if (fwd && bwd) {
    out = point(u + du, v + dv) - point(u - du, v - dv);
  } else if (fwd) {
    out = point(u + du, v + dv) - point(u, v);
  } else if (bwd) {
    out = point(u, v) - point(u - du, v - dv);
  } else {
    return false;
  }
  return true;
}

}  // namespace

Image<Vec3> normals_from_depth(const CameraModel& camera, const DepthImage& depth) {
  const Vec3 fallback(0.0, 0.0, -1.0);
  Image<Vec3> normals(depth.width(), depth.height(), fallback);
  parallel_rows(depth.height(), [&](int v) {
    for (int u = 0; u < depth.width(); ++u) {
      if (!(depth(u, v) > 0.0)) continue;
      Vec3 tx, ty;
      if (!tangent(camera, depth, u, v, 1, 0, tx) || !tangent(camera, depth, u, v, 0, 1, ty))
        continue;
      Vec3 n = tx.cross(ty);
      const double len = n.norm();
      if (!(len > 0.0) || !std::isfinite(len)) continue;
      n /= len;
      if (n.dot(unproject(camera, u, v, depth(u, v))) > 0.0) n = -n;
      normals(u, v) = n;
    }
  });
  return normals;
}

double evaluate_rid(const RidModel& rid, double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw std::domain_error("rid angle outside [0, pi]");
  if (const auto* g = std::get_if<GaussianRid>(&rid)) {
    const double sigma = g->sigma_rad();
    return std::exp(-0.5 * theta * theta / (sigma * sigma));
  }
  return std::get<TableRid>(rid).table.interpolate(theta, 0.0);
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

Spectrum direct_signal(const SurfaceSample& sample, std::span<const SpotLight> lights,
                       const WaterBody& water, double d2, double min_d) {
  Spectrum total;
  for (const auto& light : lights) {
    const Vec3 from_light = sample.point - light.position;
    const double d1 = from_light.norm();
    if (!(d1 > 0.0)) continue;
    const double cos_alpha = -sample.normal.dot(from_light) / d1;
    if (cos_alpha <= 0.0) continue;
    const double theta = angle_between(light.direction, from_light);
    const double clamped = std::max(d1, min_d);
    const double scale = evaluate_rid(light.rid, theta) * cos_alpha / (clamped * clamped);
    total += sample.albedo * light.intensity_i0 * transmittance(water.eta, d1 + d2) * scale;
  }
  return total;
}

}  // namespace deepsea::radiometry
