#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "deepsea/scene.hpp"

namespace deepsea::backscatter {

/// Adaptive slab thicknesses from the truncated Taylor series of e^N:
///   dz_i = s * N^(i-1) / (i-1)!,  s = 2.2 * d_max / e^N,  i = 1..N.
/// Slabs get thinner towards the camera. Evaluated in log space so that
/// large N does not overflow.
SlabSampling slab_thicknesses(int n, double d_max);

/// Centres and ends for explicit thicknesses.
SlabSampling sampling_from_thicknesses(double d_max, std::vector<double> thicknesses);

/// Sampling configured by the scene settings.
inline SlabSampling slab_thicknesses(const Scene& scene) {
  return slab_thicknesses(scene.settings().n_slabs, scene.settings().d_max);
}

/// Volume scattering function at `scatter_angle` (radians, [0, pi]).
double vsf_eval(const WaterBody& water, double scatter_angle);

/// Geometry of one voxel relative to the camera (origin) and a light.
struct ScatterGeometry {
  double d1p = 0.0;    // voxel -> light
  double d2p = 0.0;    // voxel -> camera
  double psi = 0.0;    // angle at the voxel between the directions to light and camera
  double phi = 0.0;    // viewing ray vs optical axis
  double theta = 0.0;  // emission angle at the light
};

ScatterGeometry scatter_geometry(const Vec3& voxel, const SpotLight& light);

/// Irradiance reaching a voxel from one light, attenuated along the light
/// path and the return path to the camera.
Spectrum voxel_irradiance(const ScatterGeometry& geom, const SpotLight& light,
                          const WaterBody& water, double min_d);

/// Cumulative backscatter over the camera frustum. cell(u, v, i) holds the
/// backscatter accumulated along the cell's viewing ray from the camera up
/// to the far boundary of slab i (0-based here).
class BackscatterLut {
 public:
  BackscatterLut() = default;
  BackscatterLut(int image_width, int image_height, int downsample, SlabSampling sampling,
                 std::uint64_t scene_hash);

  int image_width() const { return image_width_; }
  int image_height() const { return image_height_; }
  int downsample() const { return downsample_; }
  int cell_width() const { return cell_width_; }
  int cell_height() const { return cell_height_; }
  int n_slabs() const { return sampling_.n_slabs; }
  const SlabSampling& sampling() const { return sampling_; }
  std::uint64_t scene_hash() const { return scene_hash_; }

  Spectrum cell(int cu, int cv, int slab) const {
    const float* p = &cells_[offset(cu, cv, slab)];
    return {p[0], p[1], p[2]};
  }
  void set_cell(int cu, int cv, int slab, const Spectrum& s) {
    float* p = &cells_[offset(cu, cv, slab)];
    p[0] = static_cast<float>(s.r);
    p[1] = static_cast<float>(s.g);
    p[2] = static_cast<float>(s.b);
  }

  /// Flat [N][cell_h][cell_w][3] array, one image plane per slab.
  const std::vector<float>& raw() const { return cells_; }
  std::vector<float>& raw() { return cells_; }

  /// Continuous image coordinate of the centre of a cell's viewing ray.
  double cell_center_x(int cu) const;
  double cell_center_y(int cv) const;

  bool operator==(const BackscatterLut&) const = default;

 private:
  std::size_t offset(int cu, int cv, int slab) const {
    return ((static_cast<std::size_t>(slab) * static_cast<std::size_t>(cell_height_) +
             static_cast<std::size_t>(cv)) *
                static_cast<std::size_t>(cell_width_) +
            static_cast<std::size_t>(cu)) *
           3;
  }

  int image_width_ = 0;
  int image_height_ = 0;
  int downsample_ = 1;
  int cell_width_ = 0;
  int cell_height_ = 0;
  SlabSampling sampling_;
  std::uint64_t scene_hash_ = 0;
  std::vector<float> cells_;
};

/// Bytes needed for the cell array of a LUT.
std::uint64_t lut_bytes(int image_width, int image_height, int downsample, int n_slabs);

/// Hash over everything a LUT depends on: intrinsics, lights, water, the
/// LUT-relevant settings and the sampling.
std::uint64_t lut_hash(const Scene& scene, const SlabSampling& sampling);

/// Precomputes the cumulative backscatter table for the scene's camera.
/// Throws std::length_error when the table would exceed the configured
/// memory cap.
BackscatterLut build_lut(const Scene& scene, const SlabSampling& sampling);

/// Backscatter for pixel (u, v) whose surface lies `depth_along_ray` metres
/// away (0 = no surface; the full table depth is used).
Spectrum backscatter_at(const BackscatterLut& lut, int u, int v, double depth_along_ray);

/// Reference integrator: midpoint rule with uniform steps along the ray
/// through (x, y) up to min(depth, d_max). With `include_forward`, each
/// sample adds the same truncated Gaussian gather of neighbouring rays
/// that the LUT applies per slab.
Spectrum backscatter_bruteforce(const Scene& scene, double x, double y, double depth_along_ray,
                                double step, bool include_forward = false);

struct ProfileRow {
  double depth = 0.0;
  Spectrum value;
};

/// Cumulative backscatter along the optical axis at each slab's far
/// boundary, normalised per channel by the value over the full table depth.
std::vector<ProfileRow> backscatter_profile(const Scene& scene, const SlabSampling& sampling);

/// Linear interpolation of a profile at `depth` (0 before the first row's
/// proportional segment, last value beyond the end).
Spectrum profile_at(const std::vector<ProfileRow>& rows, double depth);

/// CSV with header "depth_m,r,g,b".
void write_profile_csv(std::ostream& os, const std::vector<ProfileRow>& rows);

}  // namespace deepsea::backscatter
