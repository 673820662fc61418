#include "deepsea/scene.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace deepsea {

AngularTable::AngularTable(std::vector<double> angles_deg, std::vector<double> values)
    : angles_deg_(std::move(angles_deg)), values_(std::move(values)) {
  angles_rad_.reserve(angles_deg_.size());
  for (double a : angles_deg_) angles_rad_.push_back(deg_to_rad(a));
}

double AngularTable::interpolate(double angle_rad, double beyond) const {
  if (values_.empty()) return 0.0;
  if (angle_rad <= angles_rad_.front()) return values_.front();
  if (angle_rad > angles_rad_.back()) return beyond;
  if (angle_rad == angles_rad_.back()) return values_.back();
  const auto hi = std::upper_bound(angles_rad_.begin(), angles_rad_.end(), angle_rad);
  const auto i = static_cast<std::size_t>(hi - angles_rad_.begin()) - 1;
  const double t = (angle_rad - angles_rad_[i]) / (angles_rad_[i + 1] - angles_rad_[i]);
  return values_[i] + t * (values_[i + 1] - values_[i]);
}

namespace {

std::string indexed(const char* name, std::size_t i) {
  std::ostringstream os;
  os << name << '[' << i << ']';
  return os.str();
}

void check_spectrum(const Spectrum& s, const std::string& field) {
  if (!s.finite()) throw ValidationError(field, "not finite");
  if (!s.non_negative()) throw ValidationError(field, "negative component");
}

bool finite(const Vec3& v) { return v.allFinite(); }

void check_strictly_increasing(const std::vector<double>& xs, const std::string& field,
                               const char* what) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw ValidationError(field, std::string(what) + " not strictly increasing");
  }
}

void check_rid(const RidModel& rid, const std::string& field) {
  if (const auto* g = std::get_if<GaussianRid>(&rid)) {
    if (!std::isfinite(g->sigma_deg) || !(g->sigma_deg > 0.0))
      throw ValidationError(field + ".sigma_deg", "sigma must be positive");
    return;
  }
  const auto& table = std::get<TableRid>(rid).table;
  const std::string tf = field + ".table";
  if (table.empty()) throw ValidationError(tf, "rid table empty");
  if (table.angles_deg().size() != table.values().size())
    throw ValidationError(tf, "rid angle and value counts differ");
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!std::isfinite(table.angles_deg()[i]) || !std::isfinite(table.values()[i]))
      throw ValidationError(tf, "rid table not finite");
  }
  check_strictly_increasing(table.angles_deg(), tf, "rid angles");
  if (table.angles_deg().front() != 0.0) throw ValidationError(tf, "rid table must start at 0 deg");
  if (table.values().front() != 1.0) throw ValidationError(tf, "rid table must be 1.0 at 0 deg");
  if (table.angles_deg().back() > 180.0) throw ValidationError(tf, "rid angles exceed 180 deg");
  for (double v : table.values()) {
    if (v < 0.0 || v > 1.0) throw ValidationError(tf, "rid values outside [0, 1]");
  }
}

}  // namespace

Scene Scene::validate(CameraModel camera, std::vector<SpotLight> lights, WaterBody water,
                      RenderSettings settings) {
  if (camera.width < 1) throw ValidationError("camera.width", "must be >= 1");
  if (camera.height < 1) throw ValidationError("camera.height", "must be >= 1");
  if (!std::isfinite(camera.fx) || !(camera.fx > 0.0)) throw ValidationError("camera.fx", "must be positive");
  if (!std::isfinite(camera.fy) || !(camera.fy > 0.0)) throw ValidationError("camera.fy", "must be positive");
  if (!(camera.cx >= 0.0 && camera.cx < camera.width))
    throw ValidationError("camera.cx", "principal point outside image");
  if (!(camera.cy >= 0.0 && camera.cy < camera.height))
    throw ValidationError("camera.cy", "principal point outside image");

  for (std::size_t i = 0; i < lights.size(); ++i) {
    const std::string f = indexed("lights", i);
    const auto& l = lights[i];
    if (!finite(l.position)) throw ValidationError(f + ".position", "not finite");
    if (!finite(l.direction) || std::abs(l.direction.norm() - 1.0) > 1e-9)
      throw ValidationError(f + ".direction", "direction not unit");
    check_rid(l.rid, f + ".rid");
    check_spectrum(l.intensity_i0, f + ".intensity_i0");
  }

  check_spectrum(water.eta, "water.eta");
  const auto& vsf = water.vsf;
  if (vsf.size() < 2) throw ValidationError("water.vsf", "vsf needs at least two samples");
  if (vsf.angles_deg().size() != vsf.values().size())
    throw ValidationError("water.vsf", "vsf angle and value counts differ");
  for (std::size_t i = 0; i < vsf.size(); ++i) {
    if (!std::isfinite(vsf.angles_deg()[i]) || !std::isfinite(vsf.values()[i]))
      throw ValidationError("water.vsf", "vsf not finite");
  }
  check_strictly_increasing(vsf.angles_deg(), "water.vsf", "vsf angles");
  if (vsf.angles_deg().front() != 0.0 || vsf.angles_deg().back() != 180.0)
    throw ValidationError("water.vsf", "vsf angles must span [0, 180] deg");
  for (double v : vsf.values()) {
    if (v < 0.0) throw ValidationError("water.vsf", "vsf values negative");
  }

  if (!std::isfinite(settings.gain) || !(settings.gain > 0.0))
    throw ValidationError("settings.gain", "must be positive");
  if (!std::isfinite(settings.fs_coeff) || settings.fs_coeff < 0.0)
    throw ValidationError("settings.fs_coeff", "must be >= 0");
  if (settings.lut_downsample < 1) throw ValidationError("settings.lut_downsample", "must be >= 1");
  if (!std::isfinite(settings.min_light_distance) || !(settings.min_light_distance > 0.0))
    throw ValidationError("settings.min_light_distance", "must be positive");
  check_spectrum(settings.fog_background, "settings.fog_background");
  if (settings.n_slabs < 1) throw ValidationError("settings.n_slabs", "must be >= 1");
  if (!std::isfinite(settings.d_max) || !(settings.d_max > 0.0))
    throw ValidationError("settings.d_max", "must be positive");
  if (settings.lut_memory_cap_bytes == 0)
    throw ValidationError("settings.lut_memory_cap_bytes", "must be positive");

  return Scene(std::move(camera), std::move(lights), std::move(water), std::move(settings));
}

void validate_frame(const CameraModel& camera, const FrameInput& frame) {
  if (!frame.albedo.same_size(camera.width, camera.height))
    throw ValidationError("frame.albedo", "dimensions do not match camera");
  if (!frame.depth.same_size(camera.width, camera.height))
    throw ValidationError("frame.depth", "dimensions do not match camera");
  for (double d : frame.depth.data()) {
    if (!std::isfinite(d) || d < 0.0) throw ValidationError("frame.depth", "depth must be finite and >= 0");
  }
  for (const auto& a : frame.albedo.data()) {
    if (!a.finite() || !a.non_negative() || a.max_component() > 1.0)
      throw ValidationError("frame.albedo", "albedo outside [0, 1]");
  }
}

}  // namespace deepsea
