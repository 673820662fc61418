#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "deepsea/scene.hpp"

namespace deepsea::io {

/// Malformed or incomplete configuration. `key()` is the dotted key path
/// ("water.eta_per_m") or, for syntax errors, "line N".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Parses a scene description (JSON). Degrees become radians for
/// evaluation; lights with "frame": "world" are moved into the camera frame
/// using camera.pose. Invariant violations surface as ValidationError.
Scene parse_scene_config(std::string_view text);
Scene parse_scene_config(const nlohmann::json& doc);

Scene load_scene_config(const std::string& path);

/// Canonical JSON form; lights are written in the camera frame.
nlohmann::json scene_to_json(const Scene& scene);

void save_scene_config(const Scene& scene, const std::string& path);

/// Optional overrides applied on top of a loaded scene.
struct SettingsOverrides {
  std::optional<double> gain;
  std::optional<int> n_slabs;
  std::optional<double> d_max;
  std::optional<int> lut_downsample;
  std::optional<double> fs_coeff;
};

Scene apply_overrides(const Scene& scene, const SettingsOverrides& overrides);

}  // namespace deepsea::io
