#include "deepsea/job.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>

#include "deepsea/backscatter.hpp"
#include "deepsea/lut_io.hpp"
#include "deepsea/parallel.hpp"

namespace deepsea::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string resolve(const std::string& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? p : (fs::path(base) / path).string();
}

std::string existing(const std::string& path, const std::string& key) {
  if (!fs::exists(path)) throw ConfigError(key, "no such file: " + path);
  return path;
}

std::string string_at(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "expected string");
  return v.get<std::string>();
}

double number_at(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected number");
  return v.get<double>();
}

int int_at(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected integer");
  return v.get<int>();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::vector<FramePaths> pair_frames(const std::string& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
  std::map<std::string, FramePaths> by_name;
  const std::string tag = "_albedo.png";
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (!entry.is_regular_file() || !ends_with(name, tag)) continue;
    const std::string stem = name.substr(0, name.size() - tag.size());
    FramePaths p;
    p.albedo = entry.path().string();
    for (const char* ext : {"_depth.pfm", "_depth.png"}) {
      const fs::path d = entry.path().parent_path() / (stem + ext);
      if (fs::exists(d)) {
        p.depth = d.string();
        break;
      }
    }
    if (p.depth.empty()) throw std::runtime_error("no depth map for " + p.albedo);
    by_name.emplace(stem, std::move(p));
  }
  std::vector<FramePaths> out;
  for (auto& [_, p] : by_name) out.push_back(std::move(p));
  return out;
}

JobManifest parse_manifest(const json& doc, const std::string& base) {
  if (!doc.is_object()) throw ConfigError("<root>", "expected object");
  JobManifest job;
  if (!doc.contains("scene")) throw ConfigError("scene", "missing key");
  job.scene_path = existing(resolve(base, string_at(doc["scene"], "scene")), "scene");

  if (doc.contains("inputs")) {
    const auto& in = doc["inputs"];
    if (!in.is_array()) throw ConfigError("inputs", "expected array");
    for (std::size_t i = 0; i < in.size(); ++i) {
      const std::string key = "inputs[" + std::to_string(i) + "]";
      if (!in[i].is_object() || !in[i].contains("albedo") || !in[i].contains("depth"))
        throw ConfigError(key, "expected {albedo, depth}");
      job.inputs.push_back(
          {existing(resolve(base, string_at(in[i]["albedo"], key + ".albedo")), key + ".albedo"),
           existing(resolve(base, string_at(in[i]["depth"], key + ".depth")), key + ".depth")});
    }
  } else if (doc.contains("input_dir")) {
    job.inputs = pair_frames(existing(resolve(base, string_at(doc["input_dir"], "input_dir")), "input_dir"));
  } else {
    throw ConfigError("inputs", "missing key (or input_dir)");
  }

  if (!doc.contains("output_dir")) throw ConfigError("output_dir", "missing key");
  job.output_dir = resolve(base, string_at(doc["output_dir"], "output_dir"));

  if (doc.contains("overrides")) {
    const auto& o = doc["overrides"];
    if (!o.is_object()) throw ConfigError("overrides", "expected object");
    if (o.contains("gain")) job.overrides.gain = number_at(o["gain"], "overrides.gain");
    if (o.contains("n_slabs")) job.overrides.n_slabs = int_at(o["n_slabs"], "overrides.n_slabs");
    if (o.contains("d_max_m")) job.overrides.d_max = number_at(o["d_max_m"], "overrides.d_max_m");
    if (o.contains("lut_downsample"))
      job.overrides.lut_downsample = int_at(o["lut_downsample"], "overrides.lut_downsample");
    if (o.contains("fs_coeff_px_per_m"))
      job.overrides.fs_coeff = number_at(o["fs_coeff_px_per_m"], "overrides.fs_coeff_px_per_m");
  }
  if (doc.contains("threads")) {
    job.threads = int_at(doc["threads"], "threads");
    if (job.threads < 0) throw ConfigError("threads", "must be >= 0");
  }
  if (doc.contains("depth_scale_m")) {
    job.depth.scale = number_at(doc["depth_scale_m"], "depth_scale_m");
    if (!(job.depth.scale > 0.0)) throw ConfigError("depth_scale_m", "must be positive");
  }
  if (doc.contains("debug")) {
    if (!doc["debug"].is_boolean()) throw ConfigError("debug", "expected boolean");
    job.debug = doc["debug"].get<bool>();
  }
  if (doc.contains("lut_cache")) job.lut_cache = resolve(base, string_at(doc["lut_cache"], "lut_cache"));
  return job;
}

JobManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("manifest", std::string("JSON syntax error at byte ") + std::to_string(e.byte));
  }
  return parse_manifest(doc, fs::path(path).parent_path().string());
}

std::string output_name(const std::string& albedo_path) {
  std::string stem = fs::path(albedo_path).stem().string();
  if (ends_with(stem, "_albedo")) stem.resize(stem.size() - 7);
  return stem + ".png";
}

pipeline::SequenceReport run_job(const JobManifest& job) {
  if (job.threads > 0) set_thread_count(job.threads);
  const Scene scene = apply_overrides(load_scene_config(job.scene_path), job.overrides);
  fs::create_directories(job.output_dir);

  std::optional<backscatter::BackscatterLut> lut;
  const SlabSampling sampling = backscatter::slab_thicknesses(scene);
  if (!job.lut_cache.empty()) lut = load_lut_if_matching(job.lut_cache, scene, sampling);
  double precompute_ms = 0.0;
  int builds = 0;
  if (!lut) {
    const auto t0 = std::chrono::steady_clock::now();
    lut = backscatter::build_lut(scene, sampling);
    precompute_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    builds = 1;
    if (!job.lut_cache.empty()) save_lut(*lut, job.lut_cache);
  }

  std::vector<std::string> outputs(job.inputs.size());
  auto report = pipeline::render_sequence(
      scene, job.inputs.size(),
      [&](std::size_t i) { return load_rgbd(job.inputs[i].albedo, job.inputs[i].depth, job.depth); },
      [&](std::size_t i, const pipeline::RenderedFrame& r) {
        outputs[i] = (fs::path(job.output_dir) / output_name(job.inputs[i].albedo)).string();
        save_image(r.output, outputs[i]);
        if (job.debug) save_components(r, outputs[i]);
      },
      &*lut, job.debug);
  report.precompute_ms += precompute_ms;
  report.lut_builds += builds;

  std::ofstream csv(fs::path(job.output_dir) / "timing.csv");
  if (!csv) throw std::runtime_error("cannot write timing.csv in " + job.output_dir);
  csv << "frame,input,output,ms,overexposed_fraction,error\n";
  csv << std::setprecision(6);
  csv << "precompute,,," << report.precompute_ms << ",,\n";
  for (const auto& f : report.frames) {
    std::string err = f.error;
    for (char& c : err)
      if (c == ',' || c == '\n') c = ';';
    csv << f.index << ',' << job.inputs[f.index].albedo << ',' << outputs[f.index] << ','
        << f.render_ms << ',' << f.overexposed_fraction << ',' << err << '\n';
  }
  return report;
}

}  // namespace deepsea::io
