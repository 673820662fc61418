#pragma once

#include <string>
#include <vector>

#include "deepsea/scene.hpp"
#include "oracles.hpp"

namespace fixtures {

using namespace deepsea;

inline const std::vector<double>& vsf_angles() {
  static const std::vector<double> a{0,   0.1, 0.15, 0.2, 0.3, 0.5, 0.75, 1,   1.5, 2,   3,   4,
                                     5,   7.5, 10,   15,  20,  25,  30,   40,  50,  60,  70,  80,
                                     90,  100, 110,  120, 130, 140, 150,  160, 170, 180};
  return a;
}

inline const std::vector<double>& vsf_values() {
  static const std::vector<double> v{
      62.253,     62.253,     34.934,     23.155,     12.929,     6.1526,     3.3746,
      2.1835,     1.1601,     0.72733,    0.36392,    0.21593,    0.14107,    0.061759,
      0.032887,   0.012718,   0.006232,   0.0035215,  0.0021917,  0.00103,    0.000573,
      0.00035506, 0.00023707, 0.0001679,  0.0001258,  0.00010032, 8.5803e-05, 7.8747e-05,
      7.6685e-05, 7.7694e-05, 8.0203e-05, 8.2948e-05, 8.4987e-05, 8.5733e-05};
  return v;
}

inline const Spectrum jerlov_ib{0.37, 0.044, 0.035};

inline WaterBody ocean_water() { return {jerlov_ib, AngularTable(vsf_angles(), vsf_values())}; }

inline WaterBody water_with_vsf(const Spectrum& eta, double constant_vsf) {
  return {eta, AngularTable({0.0, 180.0}, {constant_vsf, constant_vsf})};
}

inline CameraModel camera(int w, int h, double fov_x_deg = 60.0) {
  const double f = 0.5 * w / std::tan(deg_to_rad(0.5 * fov_x_deg));
  return {w, h, f, f, 0.5 * (w - 1), 0.5 * (h - 1)};
}

inline RidModel unit_rid() { return TableRid{AngularTable({0.0, 180.0}, {1.0, 1.0})}; }

inline SpotLight offset_light() { return {Vec3(1, 1, 0), Vec3(0, 0, 1), GaussianRid{35.0}, Spectrum(1.0)}; }

inline std::vector<SpotLight> two_lights() {
  const double s = 0.70710678118654752;
  return {{Vec3(-1, 0, 0), Vec3(s, 0, s), GaussianRid{35.0}, Spectrum(1.0)},
          {Vec3(1, 0, 0), Vec3(-s, 0, s), GaussianRid{35.0}, Spectrum(1.0)}};
}

inline RenderSettings settings(int n_slabs, double d_max = 10.0) {
  RenderSettings s;
  s.n_slabs = n_slabs;
  s.d_max = d_max;
  return s;
}

inline Scene offset_scene(int w, int h, int n_slabs) {
  return Scene::validate(camera(w, h), {offset_light()}, ocean_water(), settings(n_slabs));
}

inline Scene two_light_scene(int w, int h, int n_slabs) {
  return Scene::validate(camera(w, h), two_lights(), ocean_water(), settings(n_slabs));
}

// Oracle mirrors of the library types.
inline oracle::Pinhole pinhole(const CameraModel& c) { return {c.fx, c.fy, c.cx, c.cy}; }

inline std::vector<oracle::Light> oracle_lights(const Scene& s) {
  std::vector<oracle::Light> out;
  for (const auto& l : s.lights()) {
    out.push_back({{l.position.x(), l.position.y(), l.position.z()},
                   {l.direction.x(), l.direction.y(), l.direction.z()},
                   std::get<GaussianRid>(l.rid).sigma_deg,
                   {l.intensity_i0.r, l.intensity_i0.g, l.intensity_i0.b}});
  }
  return out;
}

inline oracle::Medium oracle_medium(const Scene& s) {
  const auto& w = s.water();
  return {{w.eta.r, w.eta.g, w.eta.b}, w.vsf.angles_deg(), w.vsf.values()};
}

inline std::string source_dir() { return DEEPSEA_SOURCE_DIR; }

}  // namespace fixtures
