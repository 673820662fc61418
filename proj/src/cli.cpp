#include "deepsea/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "deepsea/backscatter.hpp"
#include "deepsea/bench.hpp"
#include "deepsea/config.hpp"
#include "deepsea/image_io.hpp"
#include "deepsea/job.hpp"
#include "deepsea/lut_io.hpp"
#include "deepsea/parallel.hpp"
#include "deepsea/pipeline.hpp"
#include "deepsea/synthetic.hpp"

namespace deepsea {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_overrides(CLI::App* cmd, io::SettingsOverrides& o) {
  cmd->add_option("--gain", o.gain, "Exposure gain")->check(CLI::PositiveNumber);
  cmd->add_option("--n-slabs,--n", o.n_slabs, "Number of depth slabs")->check(CLI::Range(1, 4096));
  cmd->add_option("--dmax", o.d_max, "Backscatter table depth in metres")->check(CLI::PositiveNumber);
  cmd->add_option("--lut-downsample", o.lut_downsample, "Pixels per LUT cell side")->check(CLI::Range(1, 1 << 16));
  cmd->add_option("--fs-coeff", o.fs_coeff, "Forward-scatter blur, pixels per metre")->check(CLI::NonNegativeNumber);
}

Spectrum parse_rgb(const std::string& text, const std::string& what) {
  std::stringstream ss(text);
  std::string part;
  std::vector<double> xs;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw UsageError(what + ": expected r,g,b");
    }
  }
  if (xs.size() == 1) return Spectrum(xs[0]);
  if (xs.size() != 3) throw UsageError(what + ": expected r,g,b");
  return {xs[0], xs[1], xs[2]};
}

std::pair<int, int> parse_size(const std::string& text) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    const int w = std::stoi(text.substr(0, x));
    const int h = std::stoi(text.substr(x + 1));
    if (w > 0 && h > 0) return {w, h};
  } catch (const std::exception&) {
  }
  throw UsageError("--size: expected WIDTHxHEIGHT");
}

io::DepthEncoding depth_encoding(const std::string& format, double scale) {
  io::DepthEncoding enc;
  enc.scale = scale;
  if (format == "png16") enc.format = io::DepthEncoding::Format::Png16;
  else if (format == "pfm") enc.format = io::DepthEncoding::Format::Pfm;
  return enc;
}

// Scales the intrinsics of a scene camera to a new image size.
Scene resize_camera(const Scene& scene, int width, int height) {
  CameraModel cam = scene.camera();
  if (cam.width == width && cam.height == height) return scene;
  const double sx = static_cast<double>(width) / cam.width;
  const double sy = static_cast<double>(height) / cam.height;
  cam.fx *= sx;
  cam.fy *= sy;
  cam.cx = (cam.cx + 0.5) * sx - 0.5;
  cam.cy = (cam.cy + 0.5) * sy - 0.5;
  cam.width = width;
  cam.height = height;
  return scene.with_camera(cam);
}

backscatter::BackscatterLut lut_for(const Scene& scene, const std::string& cache, std::ostream& out) {
  const SlabSampling sampling = backscatter::slab_thicknesses(scene);
  if (!cache.empty()) {
    if (auto lut = io::load_lut_if_matching(cache, scene, sampling)) return std::move(*lut);
  }
  auto lut = backscatter::build_lut(scene, sampling);
  if (!cache.empty()) {
    io::save_lut(lut, cache);
    out << "lut written: " << cache << "\n";
  }
  return lut;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deep-sea image synthesis from in-air RGB-D frames", "deepsea"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")
      ->envname("DEEPSEA_THREADS")
      ->check(CLI::NonNegativeNumber);

  // render
  auto* render = app.add_subcommand("render", "Render one RGB-D pair to a PNG");
  std::string scene_path, albedo_path, depth_path, out_path, depth_format = "auto", lut_cache;
  double depth_scale = 0.001;
  bool debug = false;
  io::SettingsOverrides overrides;
  render->add_option("--scene", scene_path, "Scene config (JSON)")->required();
  render->add_option("--albedo", albedo_path, "8-bit sRGB albedo PNG")->required();
  render->add_option("--depth", depth_path, "Depth map (16-bit PNG or PFM, z-depth)")->required();
  render->add_option("--out", out_path, "Output PNG")->required();
  render->add_option("--depth-scale", depth_scale, "Metres per unit of a 16-bit depth PNG")
      ->check(CLI::PositiveNumber);
  render->add_option("--depth-format", depth_format, "auto, png16 or pfm")
      ->check(CLI::IsMember({"auto", "png16", "pfm"}));
  render->add_flag("--debug", debug, "Also write linear direct/forward/backscatter PFMs");
  render->add_option("--lut-cache", lut_cache, "LUT cache file (read if matching, else written)");
  add_overrides(render, overrides);

  // sequence
  auto* sequence = app.add_subcommand("sequence", "Render a batch of frames against one LUT");
  std::string manifest_path, input_dir, out_dir;
  sequence->add_option("--manifest", manifest_path, "Job manifest (JSON)");
  sequence->add_option("--scene", scene_path, "Scene config when no manifest is given");
  sequence->add_option("--input-dir", input_dir, "Directory of NAME_albedo.png / NAME_depth.* pairs");
  sequence->add_option("--out-dir", out_dir, "Output directory");
  sequence->add_option("--depth-scale", depth_scale, "Metres per unit of a 16-bit depth PNG")
      ->check(CLI::PositiveNumber);
  sequence->add_flag("--debug", debug, "Also write linear component PFMs");
  sequence->add_option("--lut-cache", lut_cache, "LUT cache file");
  add_overrides(sequence, overrides);

  // lut
  auto* lut = app.add_subcommand("lut", "Precompute or inspect backscatter tables");
  lut->require_subcommand(1);
  auto* lut_build = lut->add_subcommand("build", "Build a LUT and write it to disk");
  lut_build->add_option("--scene", scene_path, "Scene config (JSON)")->required();
  lut_build->add_option("--out", out_path, "LUT file")->required();
  add_overrides(lut_build, overrides);
  auto* lut_info = lut->add_subcommand("info", "Print a LUT header");
  std::string lut_path;
  lut_info->add_option("lut", lut_path, "LUT file")->required();
  lut_info->add_option("--scene", scene_path, "Also report whether the LUT matches this scene");
  add_overrides(lut_info, overrides);

  // profile
  auto* profile = app.add_subcommand("profile", "Normalised backscatter along the optical axis (CSV)");
  profile->add_option("--scene", scene_path, "Scene config (JSON)")->required();
  profile->add_option("--out", out_path, "CSV file (default stdout)");
  add_overrides(profile, overrides);

  // fog
  auto* fog = app.add_subcommand("fog", "Fog-model baseline render");
  std::string eta_text, background_text;
  fog->add_option("--scene", scene_path, "Scene config (camera, eta, background)")->required();
  fog->add_option("--albedo", albedo_path, "8-bit sRGB albedo PNG")->required();
  fog->add_option("--depth", depth_path, "Depth map")->required();
  fog->add_option("--out", out_path, "Output PNG")->required();
  fog->add_option("--eta", eta_text, "Attenuation r,g,b per metre (default: scene water)");
  fog->add_option("--background", background_text, "Background r,g,b (default: scene setting)");
  fog->add_option("--depth-scale", depth_scale, "Metres per unit of a 16-bit depth PNG")
      ->check(CLI::PositiveNumber);
  fog->add_option("--depth-format", depth_format, "auto, png16 or pfm")
      ->check(CLI::IsMember({"auto", "png16", "pfm"}));
  add_overrides(fog, overrides);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Time LUT build, frame rendering and brute force");
  std::string size_text;
  bench::BenchOptions bench_opts;
  bench_cmd->add_option("--scene", scene_path, "Scene config (JSON)")->required();
  bench_cmd->add_option("--size", size_text, "Image size WIDTHxHEIGHT (default: scene camera)");
  bench_cmd->add_option("--frames", bench_opts.frames, "Frames to render")->check(CLI::Range(1, 100000));
  bench_cmd->add_option("--samples", bench_opts.bruteforce_pixels, "Pixels timed with brute force")
      ->check(CLI::Range(1, 100000));
  add_overrides(bench_cmd, overrides);

  // synth
  auto* synth = app.add_subcommand("synth", "Write synthetic RGB-D test frames");
  int synth_frames = 1;
  synth->add_option("--scene", scene_path, "Scene config (camera)")->required();
  synth->add_option("--out-dir", out_dir, "Output directory")->required();
  synth->add_option("--frames", synth_frames, "Number of frames")->check(CLI::Range(1, 100000));
  synth->add_option("--size", size_text, "Image size WIDTHxHEIGHT (default: scene camera)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << "\n";
    const CLI::App* failed = &app;
    for (auto* sub : app.get_subcommands()) failed = sub;
    err << failed->help();
    return 2;
  }

  try {
    if (threads > 0) set_thread_count(threads);
    auto load_scene = [&] { return io::apply_overrides(io::load_scene_config(scene_path), overrides); };

    if (render->parsed()) {
      const Scene scene = load_scene();
      const FrameInput frame = io::load_rgbd(albedo_path, depth_path, depth_encoding(depth_format, depth_scale));
      const auto table = lut_for(scene, lut_cache, out);
      const auto r = pipeline::render_frame(frame, scene, table, debug);
      io::save_image(r.output, out_path);
      if (debug) io::save_components(r, out_path);
      out << "wrote " << out_path << " (overexposed " << r.overexposed_fraction << ")\n";
    } else if (sequence->parsed()) {
      io::JobManifest job;
      if (!manifest_path.empty()) {
        job = io::load_manifest(manifest_path);
      } else {
        if (scene_path.empty() || input_dir.empty() || out_dir.empty())
          throw UsageError("sequence needs --manifest or --scene, --input-dir and --out-dir");
        job.scene_path = scene_path;
        job.inputs = io::pair_frames(input_dir);
        job.output_dir = out_dir;
      }
      if (!out_dir.empty()) job.output_dir = out_dir;
      if (!lut_cache.empty()) job.lut_cache = lut_cache;
      if (debug) job.debug = true;
      if (sequence->count("--depth-scale") > 0) job.depth.scale = depth_scale;
      if (overrides.gain) job.overrides.gain = overrides.gain;
      if (overrides.n_slabs) job.overrides.n_slabs = overrides.n_slabs;
      if (overrides.d_max) job.overrides.d_max = overrides.d_max;
      if (overrides.lut_downsample) job.overrides.lut_downsample = overrides.lut_downsample;
      if (overrides.fs_coeff) job.overrides.fs_coeff = overrides.fs_coeff;
      if (threads > 0) job.threads = threads;
      const auto report = io::run_job(job);
      std::size_t failed = 0;
      double total = 0.0;
      for (const auto& f : report.frames) {
        total += f.render_ms;
        if (!f.error.empty()) {
          ++failed;
          err << "frame " << f.index << ": " << one_line(f.error) << "\n";
        }
      }
      out << "frames " << report.frames.size() << ", failed " << failed << ", lut builds "
          << report.lut_builds << ", precompute " << report.precompute_ms << " ms, mean "
          << (report.frames.empty() ? 0.0 : total / static_cast<double>(report.frames.size()))
          << " ms/frame\n";
      if (failed > 0) throw std::runtime_error(std::to_string(failed) + " frame(s) failed");
    } else if (lut_build->parsed()) {
      const Scene scene = load_scene();
      const auto t0 = std::chrono::steady_clock::now();
      const auto table = backscatter::build_lut(scene, backscatter::slab_thicknesses(scene));
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      io::save_lut(table, out_path);
      out << "wrote " << out_path << " (" << table.cell_width() << "x" << table.cell_height() << "x"
          << table.n_slabs() << " cells, " << ms << " ms)\n";
    } else if (lut_info->parsed()) {
      const auto table = io::load_lut(lut_path);
      const auto& s = table.sampling();
      out << "image      " << table.image_width() << "x" << table.image_height() << "\n"
          << "downsample " << table.downsample() << "\n"
          << "cells      " << table.cell_width() << "x" << table.cell_height() << "\n"
          << "slabs      " << s.n_slabs << "\n"
          << "d_max_m    " << s.d_max << "\n"
          << "hash       " << std::hex << std::setw(16) << std::setfill('0') << table.scene_hash()
          << std::dec << std::setfill(' ') << "\n"
          << "thicknesses";
      for (double t : s.thicknesses) out << ' ' << t;
      out << "\n";
      if (!scene_path.empty()) {
        const Scene scene = load_scene();
        const bool match = table.image_width() == scene.camera().width &&
                           table.image_height() == scene.camera().height &&
                           table.scene_hash() ==
                               backscatter::lut_hash(scene, backscatter::slab_thicknesses(scene));
        out << "matches    " << (match ? "yes" : "no") << "\n";
      }
    } else if (profile->parsed()) {
      const Scene scene = load_scene();
      const auto rows = backscatter::backscatter_profile(scene, backscatter::slab_thicknesses(scene));
      if (out_path.empty()) {
        backscatter::write_profile_csv(out, rows);
      } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open " + out_path + " for writing");
        backscatter::write_profile_csv(f, rows);
        if (!f) throw std::runtime_error("write failed: " + out_path);
      }
    } else if (fog->parsed()) {
      const Scene scene = load_scene();
      const Spectrum eta = eta_text.empty() ? scene.water().eta : parse_rgb(eta_text, "--eta");
      const Spectrum bg =
          background_text.empty() ? scene.settings().fog_background : parse_rgb(background_text, "--background");
      const FrameInput frame = io::load_rgbd(albedo_path, depth_path, depth_encoding(depth_format, depth_scale));
      const auto r = pipeline::render_fog(frame, scene.camera(), eta, bg, scene.settings().gain);
      io::save_image(r.output, out_path);
      out << "wrote " << out_path << "\n";
    } else if (bench_cmd->parsed()) {
      Scene scene = load_scene();
      if (!size_text.empty()) {
        const auto [w, h] = parse_size(size_text);
        scene = resize_camera(scene, w, h);
      }
      bench::print_report(out, bench::run_bench(scene, bench_opts));
    } else if (synth->parsed()) {
      Scene scene = io::load_scene_config(scene_path);
      if (!size_text.empty()) {
        const auto [w, h] = parse_size(size_text);
        scene = resize_camera(scene, w, h);
      }
      fs::create_directories(out_dir);
      for (int i = 0; i < synth_frames; ++i) {
        const FrameInput f = synthetic::seafloor_frame(scene.camera(), i);
        Rgb8Image rgb(f.albedo.width(), f.albedo.height());
        for (std::size_t k = 0; k < rgb.size(); ++k) {
          const Spectrum& a = f.albedo.data()[k];
          rgb.data()[k] = {io::linear_to_srgb8(a.r), io::linear_to_srgb8(a.g), io::linear_to_srgb8(a.b)};
        }
        std::ostringstream name;
        name << "frame" << std::setw(4) << std::setfill('0') << i;
        const fs::path base = fs::path(out_dir) / name.str();
        io::save_image(rgb, base.string() + "_albedo.png");
        io::write_pfm(base.string() + "_depth.pfm", f.depth);
      }
      out << "wrote " << synth_frames << " frame(s) to " << out_dir << "\n";
    }
  } catch (const UsageError& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace deepsea
