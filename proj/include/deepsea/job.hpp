#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deepsea/config.hpp"
#include "deepsea/image_io.hpp"
#include "deepsea/pipeline.hpp"

namespace deepsea::io {

struct FramePaths {
  std::string albedo;
  std::string depth;
};

/// Batch render description (JSON). Relative paths resolve against the
/// manifest's directory.
///
///   {
///     "scene": "rig.json",
///     "inputs": [{"albedo": "a.png", "depth": "a_depth.png"}],
///     "input_dir": "frames",          // alternative to "inputs"
///     "output_dir": "out",
///     "overrides": {"gain": 2, "n_slabs": 32, "d_max_m": 10,
///                   "lut_downsample": 2, "fs_coeff_px_per_m": 0.5},
///     "threads": 4,
///     "depth_scale_m": 0.001,
///     "debug": false,
///     "lut_cache": "rig.dslut"
///   }
///
/// With "input_dir", every NAME_albedo.png is paired with NAME_depth.pfm or
/// NAME_depth.png, in name order.
struct JobManifest {
  std::string scene_path;
  std::vector<FramePaths> inputs;
  std::string output_dir;
  SettingsOverrides overrides;
  int threads = 0;  // 0 = keep current
  DepthEncoding depth;
  bool debug = false;
  std::string lut_cache;
};

/// Scans `dir` for NAME_albedo.png / NAME_depth.{pfm,png} pairs.
std::vector<FramePaths> pair_frames(const std::string& dir);

JobManifest parse_manifest(const nlohmann::json& doc, const std::string& base_dir);
JobManifest load_manifest(const std::string& path);

/// Output PNG name for an input albedo path: NAME_albedo.png -> NAME.png.
std::string output_name(const std::string& albedo_path);

/// Renders every input into output_dir and writes output_dir/timing.csv with
/// a "precompute" row followed by one row per frame.
pipeline::SequenceReport run_job(const JobManifest& job);

}  // namespace deepsea::io
