#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "deepsea/image.hpp"
#include "deepsea/spectrum.hpp"

namespace deepsea {

using Vec3 = Eigen::Vector3d;

constexpr double deg_to_rad(double deg) { return deg * (std::numbers::pi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / std::numbers::pi); }

/// Thrown by validation. `field()` is a dotted path into the scene
/// (e.g. "lights[1].direction").
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Pinhole intrinsics. Pixel (u, v) has its centre at continuous image
/// coordinate (u, v); the principal point (cx, cy) uses the same coordinates,
/// so the pixel with index (cx, cy) looks straight down the optical axis.
/// Camera frame: x right, y down, z forward.
struct CameraModel {
  int width = 0;
  int height = 0;
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;

  bool operator==(const CameraModel&) const = default;
};

/// Piecewise-linear table over angle. Knots are kept in degrees (as
/// configured) and in radians (for evaluation) so that serialisation
/// round-trips bit-exactly.
class AngularTable {
 public:
  AngularTable() = default;
  AngularTable(std::vector<double> angles_deg, std::vector<double> values);

  const std::vector<double>& angles_deg() const { return angles_deg_; }
  const std::vector<double>& angles_rad() const { return angles_rad_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  /// Linear interpolation at `angle_rad`. Angles past the last knot return
  /// `beyond`; angles before the first knot return the first value.
  double interpolate(double angle_rad, double beyond) const;

  bool operator==(const AngularTable& o) const {
    return angles_deg_ == o.angles_deg_ && values_ == o.values_;
  }

 private:
  std::vector<double> angles_deg_;
  std::vector<double> angles_rad_;
  std::vector<double> values_;
};

struct GaussianRid {
  double sigma_deg = 35.0;

  double sigma_rad() const { return deg_to_rad(sigma_deg); }
  bool operator==(const GaussianRid&) const = default;
};

/// Measured fall-off curve, relative to the on-axis peak.
struct TableRid {
  AngularTable table;

  bool operator==(const TableRid&) const = default;
};

using RidModel = std::variant<GaussianRid, TableRid>;

struct SpotLight {
  Vec3 position = Vec3::Zero();       // metres, camera frame
  Vec3 direction = Vec3::UnitZ();     // unit, camera frame
  RidModel rid = GaussianRid{};
  Spectrum intensity_i0{1.0};

  bool operator==(const SpotLight&) const = default;
};

struct WaterBody {
  Spectrum eta;       // beam attenuation, 1/m
  AngularTable vsf;   // scattering angle -> 1/(sr m), shared by all channels

  bool operator==(const WaterBody&) const = default;
};

/// Slab discretisation of the viewing frustum along each ray.
struct SlabSampling {
  int n_slabs = 0;
  double d_max = 0.0;
  std::vector<double> thicknesses;
  std::vector<double> centers;  // cumulative midpoints
  std::vector<double> ends;     // cumulative far boundaries

  bool operator==(const SlabSampling&) const = default;
};

struct RenderSettings {
  double gain = 1.0;
  double fs_coeff = 0.0;          // forward-scatter sigma, pixels per metre
  int lut_downsample = 1;
  double min_light_distance = 0.05;
  Spectrum fog_background{};
  int n_slabs = 16;
  double d_max = 10.0;
  std::uint64_t lut_memory_cap_bytes = std::uint64_t{1} << 30;

  bool operator==(const RenderSettings&) const = default;
};

/// One RGB-D input frame: linear albedo in [0,1] and z-depth in metres
/// (0 = no surface).
struct FrameInput {
  SpectrumImage albedo;
  DepthImage depth;
};

/// Validated, immutable aggregate of rig, water and settings.
class Scene {
 public:
  /// Throws ValidationError naming the first violated invariant.
  static Scene validate(CameraModel camera, std::vector<SpotLight> lights, WaterBody water,
                        RenderSettings settings);

  const CameraModel& camera() const { return camera_; }
  const std::vector<SpotLight>& lights() const { return lights_; }
  const WaterBody& water() const { return water_; }
  const RenderSettings& settings() const { return settings_; }

  Scene with_settings(const RenderSettings& settings) const {
    return validate(camera_, lights_, water_, settings);
  }
  Scene with_camera(const CameraModel& camera) const {
    return validate(camera, lights_, water_, settings_);
  }
  Scene with_lights(std::vector<SpotLight> lights) const {
    return validate(camera_, std::move(lights), water_, settings_);
  }
  Scene with_water(WaterBody water) const {
    return validate(camera_, lights_, std::move(water), settings_);
  }

  bool operator==(const Scene&) const = default;

 private:
  Scene(CameraModel camera, std::vector<SpotLight> lights, WaterBody water,
        RenderSettings settings)
      : camera_(std::move(camera)),
        lights_(std::move(lights)),
        water_(std::move(water)),
        settings_(std::move(settings)) {}

  CameraModel camera_;
  std::vector<SpotLight> lights_;
  WaterBody water_;
  RenderSettings settings_;
};

/// Checks dimensions and value ranges of a frame against the camera.
void validate_frame(const CameraModel& camera, const FrameInput& frame);

}  // namespace deepsea
