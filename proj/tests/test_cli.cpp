#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "deepsea/cli.hpp"
#include "deepsea/config.hpp"
#include "deepsea/image_io.hpp"
#include "fixtures.hpp"
#include "tmpdir.hpp"

using namespace deepsea;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string small_scene(const TempDir& tmp, const char* name = "two_light_45deg.json") {
  Scene s = io::load_scene_config(fixtures::source_dir() + "/configs/" + name);
  s = s.with_camera(fixtures::camera(40, 30));
  RenderSettings r = s.settings();
  r.n_slabs = 8;
  s = s.with_settings(r);
  io::save_scene_config(s, tmp / "scene.json");
  return tmp / "scene.json";
}

std::string bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("cli render, debug and lut cache") {
  TempDir tmp;
  const auto scene = small_scene(tmp);
  REQUIRE(run({"synth", "--scene", scene, "--out-dir", tmp / "in", "--frames", "2"}).code == 0);
  const Run r = run({"render", "--scene", scene, "--albedo", tmp / "in/frame0000_albedo.png", "--depth",
                     tmp / "in/frame0000_depth.pfm", "--out", tmp / "u.png", "--debug", "--lut-cache",
                     tmp / "c.dslut"});
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(tmp / "u.png"));
  CHECK(std::filesystem::exists(tmp / "u_direct.pfm"));
  CHECK(std::filesystem::exists(tmp / "c.dslut"));
  const Rgb8Image img = io::read_png_rgb8(tmp / "u.png");
  CHECK(img.width() == 40);

  const Run info = run({"lut", "info", tmp / "c.dslut", "--scene", scene});
  CHECK(info.code == 0);
  CHECK(info.out.find("slabs      8") != std::string::npos);
  CHECK(info.out.find("matches    yes") != std::string::npos);
  CHECK(run({"lut", "info", tmp / "c.dslut", "--scene", scene, "--n", "9"}).out.find("matches    no") !=
        std::string::npos);

  const Run again = run({"render", "--scene", scene, "--albedo", tmp / "in/frame0000_albedo.png", "--depth",
                         tmp / "in/frame0000_depth.pfm", "--out", tmp / "u2.png", "--lut-cache", tmp / "c.dslut"});
  CHECK(again.code == 0);
  CHECK(again.out.find("lut written") == std::string::npos);
  CHECK(bytes(tmp / "u.png") == bytes(tmp / "u2.png"));
}

TEST_CASE("cli profile csv ends at 1") {
  TempDir tmp;
  const Run r = run({"profile", "--scene", fixtures::source_dir() + "/configs/offset_single_light.json", "--dmax",
                     "10", "--n", "16", "--out", tmp / "p.csv"});
  REQUIRE(r.code == 0);
  std::istringstream in(bytes(tmp / "p.csv"));
  std::string line, last;
  std::getline(in, line);
  CHECK(line == "depth_m,r,g,b");
  int rows = 0;
  while (std::getline(in, line)) {
    last = line;
    ++rows;
  }
  CHECK(rows == 16);
  CHECK(last.substr(last.find(',')) == ",1,1,1");
}

TEST_CASE("cli lut build, fog, bench and sequence") {
  TempDir tmp;
  const auto scene = small_scene(tmp);
  REQUIRE(run({"synth", "--scene", scene, "--out-dir", tmp / "in", "--frames", "3"}).code == 0);

  const Run b = run({"lut", "build", "--scene", scene, "--out", tmp / "l.dslut", "--n", "12"});
  CHECK(b.code == 0);
  CHECK(run({"lut", "info", tmp / "l.dslut"}).out.find("slabs      12") != std::string::npos);

  CHECK(run({"fog", "--scene", scene, "--albedo", tmp / "in/frame0001_albedo.png", "--depth",
             tmp / "in/frame0001_depth.pfm", "--out", tmp / "fog.png", "--background", "0,0.1,0.2"})
            .code == 0);
  CHECK(std::filesystem::exists(tmp / "fog.png"));

  const Run bench = run({"bench", "--scene", scene, "--size", "32x24", "--frames", "3", "--samples", "2"});
  CHECK(bench.code == 0);
  CHECK(bench.out.find("render_mean_ms") != std::string::npos);
  CHECK(bench.out.find("speedup") != std::string::npos);

  const Run seq = run({"sequence", "--scene", scene, "--input-dir", tmp / "in", "--out-dir", tmp / "out"});
  CHECK(seq.code == 0);
  CHECK(seq.out.find("lut builds 1") != std::string::npos);
  CHECK(std::filesystem::exists(tmp / "out/frame0002.png"));
  CHECK(std::filesystem::exists(tmp / "out/timing.csv"));
}

TEST_CASE("cli outputs are identical for any thread count") {
  TempDir tmp;
  const auto scene = small_scene(tmp);
  REQUIRE(run({"synth", "--scene", scene, "--out-dir", tmp / "in", "--frames", "2"}).code == 0);
  for (const char* t : {"1", "4", "16"}) {
    const std::string o = std::string("r") + t + ".png";
    REQUIRE(run({"--threads", t, "render", "--scene", scene, "--albedo", tmp / "in/frame0000_albedo.png", "--depth",
                 tmp / "in/frame0000_depth.pfm", "--out", tmp / o, "--fs-coeff", "0.5"})
                .code == 0);
  }
  CHECK(bytes(tmp / "r1.png") == bytes(tmp / "r4.png"));
  CHECK(bytes(tmp / "r1.png") == bytes(tmp / "r16.png"));
}

TEST_CASE("cli usage errors exit 2") {
  const Run unknown = run({"render", "--bogus"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.rfind("error: ", 0) == 0);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"bench", "--scene", "x.json", "--size", "12by4"}).code != 0);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli failures print one machine-greppable line") {
  TempDir tmp;
  const auto scene = small_scene(tmp);
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"profile", "--scene", tmp / "missing.json"},
           {"render", "--scene", scene, "--albedo", tmp / "a.png", "--depth", tmp / "d.png", "--out", tmp / "o.png"},
           {"lut", "info", tmp / "none.dslut"},
           {"sequence", "--manifest", tmp / "none.json"},
           {"profile", "--scene", scene, "--out", "/nonexistent/dir/p.csv"}}) {
    const Run r = run(args);
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: ", 0) == 0);
    CHECK(lines(r.err) == 1);
  }
}
