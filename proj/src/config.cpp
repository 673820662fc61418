#include "deepsea/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Core>

namespace deepsea::io {

using nlohmann::json;

namespace {

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

std::string at_index(const std::string& parent, std::size_t i) {
  return parent + "[" + std::to_string(i) + "]";
}

const json& require(const json& obj, const std::string& parent, const std::string& key) {
  if (!obj.is_object()) throw ConfigError(parent.empty() ? "<root>" : parent, "expected object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(join(parent, key), "missing key");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected integer");
  return v.get<int>();
}

double number(const json& obj, const std::string& parent, const std::string& key) {
  return as_number(require(obj, parent, key), join(parent, key));
}

std::vector<double> numbers(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], at_index(path, i)));
  return out;
}

std::array<double, 3> triple(const json& v, const std::string& path) {
  const auto xs = numbers(v, path);
  if (xs.size() != 3) throw ConfigError(path, "expected 3 numbers");
  return {xs[0], xs[1], xs[2]};
}

Vec3 vec3(const json& v, const std::string& path) {
  const auto t = triple(v, path);
  return {t[0], t[1], t[2]};
}

Spectrum spectrum(const json& v, const std::string& path) {
  const auto t = triple(v, path);
  return {t[0], t[1], t[2]};
}

AngularTable table(const json& obj, const std::string& path, const char* values_key) {
  const auto angles = numbers(require(obj, path, "angles_deg"), join(path, "angles_deg"));
  const auto values = numbers(require(obj, path, values_key), join(path, values_key));
  if (angles.size() != values.size())
    throw ConfigError(join(path, values_key), "length differs from angles_deg");
  return AngularTable(angles, values);
}

RidModel parse_rid(const json& v, const std::string& path) {
  const auto& type = require(v, path, "type");
  if (!type.is_string()) throw ConfigError(join(path, "type"), "expected string");
  const auto t = type.get<std::string>();
  if (t == "gaussian") return GaussianRid{number(v, path, "sigma_deg")};
  if (t == "table") return TableRid{table(v, path, "values")};
  throw ConfigError(join(path, "type"), "unknown rid type '" + t + "'");
}

struct Pose {
  Eigen::Matrix3d world_from_camera = Eigen::Matrix3d::Identity();
  Vec3 position = Vec3::Zero();
};

std::optional<Pose> parse_pose(const json& camera) {
  const auto it = camera.find("pose");
  if (it == camera.end()) return std::nullopt;
  const std::string path = "camera.pose";
  Pose p;
  p.position = vec3(require(*it, path, "position_m"), join(path, "position_m"));
  const auto& rot = require(*it, path, "rotation_world_from_camera");
  const std::string rpath = join(path, "rotation_world_from_camera");
  if (!rot.is_array() || rot.size() != 3) throw ConfigError(rpath, "expected 3x3 rows");
  for (std::size_t r = 0; r < 3; ++r) {
    const auto row = triple(rot[r], at_index(rpath, r));
    for (std::size_t c = 0; c < 3; ++c)
      p.world_from_camera(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
  }
  const Eigen::Matrix3d err = p.world_from_camera.transpose() * p.world_from_camera -
                              Eigen::Matrix3d::Identity();
  if (!(err.cwiseAbs().maxCoeff() <= 1e-6)) throw ConfigError(rpath, "rotation not orthonormal");
  return p;
}

SpotLight parse_light(const json& v, const std::string& path, const std::optional<Pose>& pose) {
  SpotLight l;
  l.position = vec3(require(v, path, "position_m"), join(path, "position_m"));
  l.direction = vec3(require(v, path, "direction"), join(path, "direction"));
  l.rid = parse_rid(require(v, path, "rid"), join(path, "rid"));
  if (v.contains("intensity_i0")) l.intensity_i0 = spectrum(v["intensity_i0"], join(path, "intensity_i0"));

  std::string frame = "camera";
  if (v.contains("frame")) {
    if (!v["frame"].is_string()) throw ConfigError(join(path, "frame"), "expected string");
    frame = v["frame"].get<std::string>();
  }
  if (frame == "world") {
    if (!pose) throw ConfigError(join(path, "frame"), "world-frame light needs camera.pose");
    if (std::abs(l.direction.norm() - 1.0) > 1e-9)
      throw ValidationError(join(path, "direction"), "direction not unit");
    const Eigen::Matrix3d cam_from_world = pose->world_from_camera.transpose();
    l.position = cam_from_world * (l.position - pose->position);
    l.direction = (cam_from_world * l.direction).normalized();
  } else if (frame != "camera") {
    throw ConfigError(join(path, "frame"), "expected 'camera' or 'world'");
  }
  return l;
}

RenderSettings parse_settings(const json& doc) {
  RenderSettings s;
  const auto it = doc.find("settings");
  if (it == doc.end()) return s;
  const json& v = *it;
  const std::string p = "settings";
  if (!v.is_object()) throw ConfigError(p, "expected object");
  if (v.contains("gain")) s.gain = number(v, p, "gain");
  if (v.contains("fs_coeff_px_per_m")) s.fs_coeff = number(v, p, "fs_coeff_px_per_m");
  if (v.contains("lut_downsample")) s.lut_downsample = as_int(v["lut_downsample"], join(p, "lut_downsample"));
  if (v.contains("min_light_distance_m")) s.min_light_distance = number(v, p, "min_light_distance_m");
  if (v.contains("fog_background")) s.fog_background = spectrum(v["fog_background"], join(p, "fog_background"));
  if (v.contains("n_slabs")) s.n_slabs = as_int(v["n_slabs"], join(p, "n_slabs"));
  if (v.contains("d_max_m")) s.d_max = number(v, p, "d_max_m");
  if (v.contains("lut_memory_cap_mb")) {
    const double mb = number(v, p, "lut_memory_cap_mb");
    if (!(mb > 0.0) || !std::isfinite(mb)) throw ConfigError(join(p, "lut_memory_cap_mb"), "must be positive");
    s.lut_memory_cap_bytes = static_cast<std::uint64_t>(std::llround(mb * 1048576.0));
  }
  return s;
}

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
json to_json(const Spectrum& s) { return json::array({s.r, s.g, s.b}); }

}  // namespace

Scene parse_scene_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("<root>", "expected object");

  const auto& c = require(doc, "", "camera");
  CameraModel cam;
  cam.width = as_int(require(c, "camera", "width"), "camera.width");
  cam.height = as_int(require(c, "camera", "height"), "camera.height");
  cam.fx = number(c, "camera", "fx_px");
  cam.fy = number(c, "camera", "fy_px");
  cam.cx = number(c, "camera", "cx_px");
  cam.cy = number(c, "camera", "cy_px");
  const auto pose = parse_pose(c);

  const auto& ls = require(doc, "", "lights");
  if (!ls.is_array()) throw ConfigError("lights", "expected array");
  std::vector<SpotLight> lights;
  for (std::size_t i = 0; i < ls.size(); ++i) lights.push_back(parse_light(ls[i], at_index("lights", i), pose));

  const auto& w = require(doc, "", "water");
  WaterBody water;
  water.eta = spectrum(require(w, "water", "eta_per_m"), "water.eta_per_m");
  water.vsf = table(require(w, "water", "vsf"), "water.vsf", "values_per_sr_m");

  return Scene::validate(cam, std::move(lights), std::move(water), parse_settings(doc));
}

Scene parse_scene_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < end; ++i)
      if (text[i] == '\n') ++line;
    throw ConfigError("line " + std::to_string(line), "JSON syntax error");
  }
  return parse_scene_config(doc);
}

Scene load_scene_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scene config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene_config(std::string_view(ss.str()));
}

json scene_to_json(const Scene& scene) {
  const auto& cam = scene.camera();
  json doc;
  doc["camera"] = {{"width", cam.width}, {"height", cam.height}, {"fx_px", cam.fx},
                   {"fy_px", cam.fy},    {"cx_px", cam.cx},       {"cy_px", cam.cy}};
  doc["lights"] = json::array();
  for (const auto& l : scene.lights()) {
    json rid;
    if (const auto* g = std::get_if<GaussianRid>(&l.rid)) {
      rid = {{"type", "gaussian"}, {"sigma_deg", g->sigma_deg}};
    } else {
      const auto& t = std::get<TableRid>(l.rid).table;
      rid = {{"type", "table"}, {"angles_deg", t.angles_deg()}, {"values", t.values()}};
    }
    doc["lights"].push_back({{"position_m", to_json(l.position)},
                             {"direction", to_json(l.direction)},
                             {"frame", "camera"},
                             {"rid", rid},
                             {"intensity_i0", to_json(l.intensity_i0)}});
  }
  const auto& w = scene.water();
  doc["water"] = {{"eta_per_m", to_json(w.eta)},
                  {"vsf", {{"angles_deg", w.vsf.angles_deg()}, {"values_per_sr_m", w.vsf.values()}}}};
  const auto& s = scene.settings();
  doc["settings"] = {{"gain", s.gain},
                     {"fs_coeff_px_per_m", s.fs_coeff},
                     {"lut_downsample", s.lut_downsample},
                     {"min_light_distance_m", s.min_light_distance},
                     {"fog_background", to_json(s.fog_background)},
                     {"n_slabs", s.n_slabs},
                     {"d_max_m", s.d_max},
                     {"lut_memory_cap_mb", static_cast<double>(s.lut_memory_cap_bytes) / 1048576.0}};
  return doc;
}

void save_scene_config(const Scene& scene, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << scene_to_json(scene).dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

Scene apply_overrides(const Scene& scene, const SettingsOverrides& o) {
  RenderSettings s = scene.settings();
  if (o.gain) s.gain = *o.gain;
  if (o.n_slabs) s.n_slabs = *o.n_slabs;
  if (o.d_max) s.d_max = *o.d_max;
  if (o.lut_downsample) s.lut_downsample = *o.lut_downsample;
  if (o.fs_coeff) s.fs_coeff = *o.fs_coeff;
  return scene.with_settings(s);
}

}  // namespace deepsea::io
