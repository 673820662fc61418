#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "deepsea/scene.hpp"
#include "fixtures.hpp"

using namespace deepsea;
using fixtures::camera;

namespace {

std::string validation_message(const std::function<void()>& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("valid two-light rig validates") {
  const Scene s = fixtures::two_light_scene(640, 480, 16);
  CHECK(s.lights().size() == 2);
  CHECK(s.settings().n_slabs == 16);
  CHECK(s.camera().width == 640);
}

TEST_CASE("zero light direction is rejected with its field path") {
  SpotLight l = fixtures::offset_light();
  l.direction = Vec3::Zero();
  try {
    (void)Scene::validate(camera(8, 8), {l}, fixtures::ocean_water(), {});
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "lights[0].direction");
    CHECK(std::string(e.what()).find("direction not unit") != std::string::npos);
  }
}

TEST_CASE("direction tolerance is 1e-9") {
  SpotLight l = fixtures::offset_light();
  l.direction = Vec3(0, 0, 1.0 + 5e-10);
  CHECK_NOTHROW((void)Scene::validate(camera(8, 8), {l}, fixtures::ocean_water(), {}));
  l.direction = Vec3(0, 0, 1.0 + 5e-9);
  CHECK_THROWS_AS((void)Scene::validate(camera(8, 8), {l}, fixtures::ocean_water(), {}), ValidationError);
}

TEST_CASE("repeated vsf angle is rejected") {
  WaterBody w{fixtures::jerlov_ib, AngularTable({0, 90, 90, 180}, {1, 0.1, 0.1, 0.01})};
  const auto msg = validation_message([&] { (void)Scene::validate(camera(8, 8), {}, w, {}); });
  CHECK(msg.find("water.vsf") != std::string::npos);
  CHECK(msg.find("vsf angles not strictly increasing") != std::string::npos);
}

TEST_CASE("vsf must span the full angle range and be non-negative") {
  CHECK_THROWS_AS((void)Scene::validate(camera(8, 8), {},
                                        {Spectrum(0.1), AngularTable({0, 90}, {1, 1})}, {}),
                  ValidationError);
  CHECK_THROWS_AS((void)Scene::validate(camera(8, 8), {},
                                        {Spectrum(0.1), AngularTable({0, 180}, {1, -1})}, {}),
                  ValidationError);
}

TEST_CASE("camera invariants") {
  auto bad = [](CameraModel c) {
    return validation_message([&] { (void)Scene::validate(c, {}, fixtures::ocean_water(), {}); });
  };
  CameraModel c = camera(10, 10);
  c.width = 0;
  CHECK(bad(c).find("camera.width") == 0);
  c = camera(10, 10);
  c.fy = -1;
  CHECK(bad(c).find("camera.fy") == 0);
  c = camera(10, 10);
  c.cx = 10;
  CHECK(bad(c).find("camera.cx") == 0);
  c = camera(10, 10);
  c.cy = -0.1;
  CHECK(bad(c).find("camera.cy") == 0);
}

TEST_CASE("rid table invariants") {
  auto with_rid = [](RidModel rid) {
    SpotLight l = fixtures::offset_light();
    l.rid = std::move(rid);
    return validation_message(
        [&] { (void)Scene::validate(camera(8, 8), {l}, fixtures::ocean_water(), {}); });
  };
  CHECK(with_rid(TableRid{AngularTable({5, 40}, {1, 0.5})}).find("must start at 0 deg") != std::string::npos);
  CHECK(with_rid(TableRid{AngularTable({0, 40}, {0.9, 0.5})}).find("1.0 at 0 deg") != std::string::npos);
  CHECK(with_rid(TableRid{AngularTable({0, 40}, {1, 1.5})}).find("outside [0, 1]") != std::string::npos);
  CHECK(with_rid(TableRid{AngularTable({0, 40, 30}, {1, 0.5, 0})}).find("not strictly increasing") !=
        std::string::npos);
  CHECK(with_rid(GaussianRid{0.0}).find("sigma") != std::string::npos);
  CHECK(with_rid(TableRid{AngularTable({0, 40, 80}, {1, 0.5, 0})}).empty());
}

TEST_CASE("settings invariants") {
  auto bad = [](RenderSettings s) {
    return validation_message(
        [&] { (void)Scene::validate(camera(8, 8), {}, fixtures::ocean_water(), s); });
  };
  RenderSettings s;
  s.gain = 0;
  CHECK(bad(s).find("settings.gain") == 0);
  s = {};
  s.fs_coeff = -1;
  CHECK(bad(s).find("settings.fs_coeff") == 0);
  s = {};
  s.lut_downsample = 0;
  CHECK(bad(s).find("settings.lut_downsample") == 0);
  s = {};
  s.min_light_distance = 0;
  CHECK(bad(s).find("settings.min_light_distance") == 0);
  s = {};
  s.fog_background = Spectrum(-1.0);
  CHECK(bad(s).find("settings.fog_background") == 0);
  s = {};
  s.n_slabs = 0;
  CHECK(bad(s).find("settings.n_slabs") == 0);
  s = {};
  s.d_max = std::numeric_limits<double>::infinity();
  CHECK(bad(s).find("settings.d_max") == 0);
}

TEST_CASE("eta must be finite and non-negative") {
  WaterBody w = fixtures::ocean_water();
  w.eta = Spectrum(0.1, -0.1, 0.1);
  CHECK(validation_message([&] { (void)Scene::validate(camera(8, 8), {}, w, {}); }).find("water.eta") == 0);
  w.eta = Spectrum(0.1, std::nan(""), 0.1);
  CHECK(validation_message([&] { (void)Scene::validate(camera(8, 8), {}, w, {}); }).find("water.eta") == 0);
}

TEST_CASE("validation is total over random garbage") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> any(-5.0, 5.0);
  std::uniform_int_distribution<int> dim(-2, 5);
  for (int k = 0; k < 500; ++k) {
    CameraModel c{dim(rng), dim(rng), any(rng), any(rng), any(rng), any(rng)};
    SpotLight l{Vec3(any(rng), any(rng), any(rng)), Vec3(any(rng), any(rng), any(rng)),
                GaussianRid{any(rng)}, Spectrum(any(rng))};
    WaterBody w{Spectrum(any(rng)), AngularTable({0.0, std::abs(any(rng)) * 40.0}, {any(rng), any(rng)})};
    RenderSettings s;
    s.gain = any(rng);
    s.n_slabs = dim(rng);
    try {
      (void)Scene::validate(c, {l}, w, s);
    } catch (const ValidationError& e) {
      CHECK(!e.field().empty());
    }
  }
}

TEST_CASE("modification re-validates") {
  const Scene s = fixtures::offset_scene(8, 8, 4);
  RenderSettings bad = s.settings();
  bad.gain = -1;
  CHECK_THROWS_AS((void)s.with_settings(bad), ValidationError);
  CHECK(s.settings().gain == 1.0);
  RenderSettings good = s.settings();
  good.gain = 3;
  const Scene t = s.with_settings(good);
  CHECK(t.settings().gain == 3.0);
  CHECK(s.settings().gain == 1.0);
  CHECK_FALSE(s == t);
}

TEST_CASE("frame validation") {
  const CameraModel c = camera(4, 3);
  FrameInput f{SpectrumImage(4, 3, Spectrum(0.5)), DepthImage(4, 3, 1.0)};
  CHECK_NOTHROW(validate_frame(c, f));
  f.depth(1, 1) = -1;
  CHECK_THROWS_AS(validate_frame(c, f), ValidationError);
  f.depth(1, 1) = 0;
  CHECK_NOTHROW(validate_frame(c, f));
  f.albedo(0, 0) = Spectrum(1.5);
  CHECK_THROWS_AS(validate_frame(c, f), ValidationError);
  FrameInput g{SpectrumImage(3, 3), DepthImage(4, 3)};
  CHECK_THROWS_AS(validate_frame(c, g), ValidationError);
}

TEST_CASE("angular table") {
  const AngularTable t({0, 40, 80}, {1, 0.5, 0});
  CHECK(t.interpolate(deg_to_rad(40), -1) == 0.5);
  CHECK(t.interpolate(deg_to_rad(20), -1) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(t.interpolate(0.0, -1) == 1.0);
  CHECK(t.interpolate(deg_to_rad(81), -1) == -1);
  CHECK(t.interpolate(deg_to_rad(80), -1) == 0.0);
}
