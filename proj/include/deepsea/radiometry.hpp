#pragma once

#include <span>

#include "deepsea/image.hpp"
#include "deepsea/scene.hpp"

namespace deepsea::radiometry {

struct SurfaceSample {
  Vec3 point;    // metres, camera frame
  Vec3 normal;   // unit
  Spectrum albedo;
};

/// Unit viewing ray through continuous image coordinate (x, y). No range
/// check; callers inside the library use it for LUT cell centres.
Vec3 ray_through(const CameraModel& camera, double x, double y);

/// Unit viewing ray through pixel (u, v). Throws std::out_of_range when the
/// pixel lies outside the image.
Vec3 pixel_ray(const CameraModel& camera, double u, double v);

/// Point on the ray through (u, v) whose z equals `z_depth`.
Vec3 unproject(const CameraModel& camera, double u, double v, double z_depth);

/// Ray length |p| for a z-depth sample at pixel (u, v). 0 stays 0.
double ray_length(const CameraModel& camera, double u, double v, double z_depth);

/// Per-pixel camera-facing normals from central differences of unprojected
/// neighbours. One-sided differences next to invalid depth and at the
/// border; pixels without usable neighbours get (0, 0, -1).
Image<Vec3> normals_from_depth(const CameraModel& camera, const DepthImage& depth);

/// Relative emission at angle `theta` (radians) from the central axis.
double evaluate_rid(const RidModel& rid, double theta);

/// Angle between two non-zero vectors, in [0, pi].
double angle_between(const Vec3& a, const Vec3& b);

/// Direct (attenuated, Lambertian) signal at a surface point, summed over
/// lights. `d2` is the surface-to-camera distance, `min_d` the lower clamp on
/// the light-to-surface distance.
Spectrum direct_signal(const SurfaceSample& sample, std::span<const SpotLight> lights,
                       const WaterBody& water, double d2, double min_d);

}  // namespace deepsea::radiometry
