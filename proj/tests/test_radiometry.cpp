#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "deepsea/radiometry.hpp"
#include "fixtures.hpp"

using namespace deepsea;
using namespace deepsea::radiometry;
using doctest::Approx;

namespace {

CameraModel cam500() { return {1000, 500, 500, 500, 250, 250}; }

SpotLight light_at_origin() { return {Vec3::Zero(), Vec3::UnitZ(), fixtures::unit_rid(), Spectrum(1.0)}; }

}  // namespace

TEST_CASE("pixel_ray at the principal point is the optical axis") {
  const Vec3 r = pixel_ray(cam500(), 250, 250);
  CHECK(r.x() == 0.0);
  CHECK(r.y() == 0.0);
  CHECK(r.z() == 1.0);
}

TEST_CASE("pixel_ray off axis") {
  const Vec3 r = pixel_ray(cam500(), 750, 250);
  CHECK(r.x() == Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(r.y() == 0.0);
  CHECK(r.z() == Approx(std::sqrt(0.5)).epsilon(1e-15));
}

TEST_CASE("pixel_ray is unit with positive z and range-checked") {
  const CameraModel c = fixtures::camera(64, 48);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.0, 63.999), v(0.0, 47.999);
  for (int i = 0; i < 200; ++i) {
    const Vec3 r = pixel_ray(c, u(rng), v(rng));
    CHECK(r.norm() == Approx(1.0).epsilon(1e-14));
    CHECK(r.z() > 0.0);
  }
  CHECK_THROWS_AS((void)pixel_ray(c, -0.1, 0), std::out_of_range);
  CHECK_THROWS_AS((void)pixel_ray(c, 64, 0), std::out_of_range);
  CHECK_THROWS_AS((void)pixel_ray(c, 0, 48), std::out_of_range);
}

TEST_CASE("unproject") {
  const CameraModel c = cam500();
  const Vec3 p = unproject(c, 250, 250, 2.0);
  CHECK(p == Vec3(0, 0, 2));
  CHECK(p.norm() == 2.0);

  const Vec3 q = unproject(c, 750, 250, 1.0);
  CHECK(q.x() == Approx(1.0).epsilon(1e-14));
  CHECK(q.y() == Approx(0.0));
  CHECK(q.z() == Approx(1.0).epsilon(1e-14));
  CHECK(q.norm() == Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(ray_length(c, 750, 250, 1.0) == Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(ray_length(c, 750, 250, 0.0) == 0.0);

  CHECK_THROWS((void)unproject(c, 10, 10, 0.0));
  CHECK_THROWS((void)unproject(c, 10, 10, -1.0));

  std::mt19937 rng(2);
  std::uniform_real_distribution<double> uu(0, 999), vv(0, 499), zz(0.01, 50);
  for (int i = 0; i < 200; ++i) {
    const double z = zz(rng);
    const Vec3 x = unproject(c, uu(rng), vv(rng), z);
    CHECK(x.z() == Approx(z).epsilon(1e-14));
    CHECK(x.norm() >= z);
  }
}

TEST_CASE("normals of a fronto-parallel plane") {
  const CameraModel c = fixtures::camera(16, 12);
  const auto n = normals_from_depth(c, DepthImage(16, 12, 3.0));
  for (int v = 0; v < 12; ++v)
    for (int u = 0; u < 16; ++u) {
      CHECK(n(u, v).x() == Approx(0.0).epsilon(1e-12));
      CHECK(n(u, v).y() == Approx(0.0).epsilon(1e-12));
      CHECK(n(u, v).z() == Approx(-1.0).epsilon(1e-12));
    }
}

TEST_CASE("normals of a plane tilted 45 degrees about the x axis") {
  const CameraModel c = fixtures::camera(64, 64);
  // Plane y + z = 3 (camera frame, y down): normal facing the camera is
  // normalize(0, -1, -1).
  DepthImage d(64, 64);
  for (int v = 0; v < 64; ++v)
    for (int u = 0; u < 64; ++u) d(u, v) = 3.0 / (1.0 + (v - c.cy) / c.fy);
  const auto n = normals_from_depth(c, d);
  const Vec3 expect = Vec3(0, -1, -1).normalized();
  const double err_deg = rad_to_deg(angle_between(n(32, 32), expect));
  CHECK(err_deg < 1.0);
  for (int v = 0; v < 64; ++v)
    for (int u = 0; u < 64; ++u) {
      CHECK(rad_to_deg(angle_between(n(u, v), expect)) < 1.0);
    }
}

TEST_CASE("normals are unit, camera facing, and fall back near invalid depth") {
  const CameraModel c = fixtures::camera(20, 20);
  DepthImage d(20, 20);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> z(1.0, 1.2);
  std::bernoulli_distribution hole(0.2);
  for (auto& x : d.data()) x = hole(rng) ? 0.0 : z(rng);
  d(10, 10) = 2.0;
  d(9, 10) = d(11, 10) = d(10, 9) = d(10, 11) = 0.0;  // isolated sample
  const auto n = normals_from_depth(c, d);
  for (int v = 0; v < 20; ++v)
    for (int u = 0; u < 20; ++u) {
      CHECK(n(u, v).norm() == Approx(1.0).epsilon(1e-12));
      if (d(u, v) > 0.0) CHECK(n(u, v).dot(unproject(c, u, v, d(u, v))) < 0.0);
    }
  CHECK(n(10, 10) == Vec3(0, 0, -1));
}

TEST_CASE("gaussian rid") {
  const RidModel g = GaussianRid{35.0};
  CHECK(evaluate_rid(g, 0.0) == 1.0);
  CHECK(evaluate_rid(g, deg_to_rad(35.0)) == Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(evaluate_rid(g, deg_to_rad(35.0)) == Approx(0.60653).epsilon(1e-5));
  double prev = 2.0;
  for (int k = 0; k <= 180; ++k) {
    const double v = evaluate_rid(g, deg_to_rad(k));
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS((void)evaluate_rid(g, -1e-9), std::domain_error);
  CHECK_THROWS_AS((void)evaluate_rid(g, std::numbers::pi + 1e-9), std::domain_error);
}

TEST_CASE("table rid") {
  const RidModel t = TableRid{AngularTable({0, 40, 80}, {1, 0.5, 0})};
  CHECK(evaluate_rid(t, deg_to_rad(20)) == Approx(0.75).epsilon(1e-14));
  CHECK(evaluate_rid(t, deg_to_rad(40)) == 0.5);
  CHECK(evaluate_rid(t, deg_to_rad(60)) == Approx(0.25).epsilon(1e-14));
  const RidModel short_table = TableRid{AngularTable({0, 40}, {1, 0.5})};
  CHECK(evaluate_rid(short_table, deg_to_rad(41)) == 0.0);
  CHECK(evaluate_rid(short_table, std::numbers::pi) == 0.0);
}

TEST_CASE("direct signal: inverse square on axis") {
  const SpotLight l = light_at_origin();
  const WaterBody clear = fixtures::water_with_vsf(Spectrum(0.0), 0.0);
  const SurfaceSample s{Vec3(0, 0, 2), Vec3(0, 0, -1), Spectrum(1.0)};
  const Spectrum e = direct_signal(s, std::span(&l, 1), clear, 2.0, 0.05);
  CHECK(e.r == Approx(0.25).epsilon(1e-15));
  CHECK(e.g == Approx(0.25).epsilon(1e-15));
  CHECK(e.b == Approx(0.25).epsilon(1e-15));
}

TEST_CASE("direct signal: attenuated red") {
  const SpotLight l = light_at_origin();
  const WaterBody w = fixtures::water_with_vsf(Spectrum(0.37, 0.0, 0.0), 0.0);
  const SurfaceSample s{Vec3(0, 0, 2), Vec3(0, 0, -1), Spectrum(1.0)};
  const Spectrum e = direct_signal(s, std::span(&l, 1), w, 2.0, 0.05);
  CHECK(e.r == Approx(0.25 * std::exp(-0.37 * 4.0)).epsilon(1e-14));
  CHECK(e.r == Approx(0.056910).epsilon(1e-5));
  CHECK(e.g == Approx(0.25).epsilon(1e-15));
}

TEST_CASE("direct signal: two co-located lights double the output") {
  const std::vector<SpotLight> two{fixtures::offset_light(), fixtures::offset_light()};
  const WaterBody w = fixtures::ocean_water();
  const SurfaceSample s{Vec3(0.3, 0.2, 2.5), Vec3(0.1, 0.2, -1).normalized(), Spectrum(0.3, 0.6, 0.9)};
  const Spectrum one = direct_signal(s, std::span(two.data(), 1), w, s.point.norm(), 0.05);
  const Spectrum both = direct_signal(s, two, w, s.point.norm(), 0.05);
  for (std::size_t c = 0; c < 3; ++c) CHECK(both[c] == 2.0 * one[c]);
}

TEST_CASE("direct signal has no camera-distance fall-off in clear water") {
  const SpotLight l = light_at_origin();
  const WaterBody clear = fixtures::water_with_vsf(Spectrum(0.0), 0.0);
  const SurfaceSample s{Vec3(0, 0, 2), Vec3(0, 0, -1), Spectrum(1.0)};
  const Spectrum a = direct_signal(s, std::span(&l, 1), clear, 2.0, 0.05);
  const Spectrum b = direct_signal(s, std::span(&l, 1), clear, 50.0, 0.05);
  CHECK(a == b);
}

TEST_CASE("back-facing lights contribute nothing") {
  const SpotLight l = light_at_origin();
  const SurfaceSample s{Vec3(0, 0, 2), Vec3(0, 0, 1), Spectrum(1.0)};
  CHECK(direct_signal(s, std::span(&l, 1), fixtures::ocean_water(), 2.0, 0.05) == Spectrum());
}

TEST_CASE("light distance is clamped") {
  SpotLight l = light_at_origin();
  l.position = Vec3(0, 0, 1.99);
  const WaterBody clear = fixtures::water_with_vsf(Spectrum(0.0), 0.0);
  const SurfaceSample s{Vec3(0, 0, 2), Vec3(0, 0, -1), Spectrum(1.0)};
  CHECK(direct_signal(s, std::span(&l, 1), clear, 2.0, 0.05).r == Approx(400.0).epsilon(1e-12));
}

TEST_CASE("direct signal matches the oracle and its monotonicity/linearity properties") {
  const Scene scene = fixtures::two_light_scene(8, 8, 4);
  const auto ol = fixtures::oracle_lights(scene);
  const auto om = fixtures::oracle_medium(scene);
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> xy(-1.5, 1.5), z(0.5, 6.0), a(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    const Vec3 p(xy(rng), xy(rng), z(rng));
    const Vec3 n = (Vec3(xy(rng), xy(rng), xy(rng)) * 0.3 - p.normalized()).normalized();
    const Spectrum j(a(rng), a(rng), a(rng));
    const SurfaceSample s{p, n, j};
    const Spectrum e = direct_signal(s, scene.lights(), scene.water(), p.norm(), 0.05);
    const auto ref = oracle::direct({p.x(), p.y(), p.z()}, {n.x(), n.y(), n.z()}, {j.r, j.g, j.b}, ol, om, 0.05);
    for (std::size_t c = 0; c < 3; ++c) CHECK(e[c] == Approx(ref[c]).epsilon(1e-12));

    // linear in J
    const Spectrum e2 = direct_signal({p, n, j * 2.0}, scene.lights(), scene.water(), p.norm(), 0.05);
    for (std::size_t c = 0; c < 3; ++c) CHECK(e2[c] == Approx(2.0 * e[c]).epsilon(1e-14));
    // non-increasing in d2
    const Spectrum far = direct_signal(s, scene.lights(), scene.water(), p.norm() + 1.0, 0.05);
    for (std::size_t c = 0; c < 3; ++c) CHECK(far[c] <= e[c]);
    // additivity over lights
    Spectrum sum;
    for (const auto& l : scene.lights()) sum += direct_signal(s, std::span(&l, 1), scene.water(), p.norm(), 0.05);
    for (std::size_t c = 0; c < 3; ++c) CHECK(sum[c] == Approx(e[c]).epsilon(1e-15));
  }
}

TEST_CASE("direct signal non-increasing in light distance") {
  const WaterBody w = fixtures::ocean_water();
  const SurfaceSample s{Vec3(0, 0, 2), Vec3(0, 0, -1), Spectrum(1.0)};
  Spectrum prev(1e300);
  for (double back = 0.0; back < 5.0; back += 0.25) {
    const SpotLight l{Vec3(0, 0, -back), Vec3::UnitZ(), GaussianRid{35.0}, Spectrum(1.0)};
    const Spectrum e = direct_signal(s, std::span(&l, 1), w, 2.0, 0.05);
    for (std::size_t c = 0; c < 3; ++c) CHECK(e[c] <= prev[c]);
    prev = e;
  }
}
