#include "deepsea/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "deepsea/filter.hpp"
#include "deepsea/parallel.hpp"
#include "deepsea/radiometry.hpp"

namespace deepsea::pipeline {

namespace {

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

ToneMapped tone_map(const SpectrumImage& linear, double gain) {
  if (!(gain > 0.0)) throw std::invalid_argument("gain must be positive");
  ToneMapped out;
  out.image = Rgb8Image(linear.width(), linear.height());
  std::vector<long long> clipped(static_cast<std::size_t>(linear.height()), 0);
  parallel_rows(linear.height(), [&](int v) {
    long long n = 0;
    for (int u = 0; u < linear.width(); ++u) {
      const Spectrum s = linear(u, v) * gain;
      out.image(u, v) = {quantize(s.r), quantize(s.g), quantize(s.b)};
      if (s.r > 1.0 || s.g > 1.0 || s.b > 1.0) ++n;
    }
    clipped[static_cast<std::size_t>(v)] = n;
  });
  long long total = 0;
  for (long long n : clipped) total += n;
  if (!linear.empty()) out.overexposed_fraction = static_cast<double>(total) / static_cast<double>(linear.size());
  return out;
}

Image<double> ray_lengths(const CameraModel& camera, const DepthImage& depth) {
  Image<double> out(depth.width(), depth.height(), 0.0);
  parallel_rows(depth.height(), [&](int v) {
    for (int u = 0; u < depth.width(); ++u)
      out(u, v) = radiometry::ray_length(camera, u, v, depth(u, v));
  });
  return out;
}

SpectrumImage render_direct(const FrameInput& frame, const Scene& scene) {
  const auto& cam = scene.camera();
  validate_frame(cam, frame);
  const Image<Vec3> normals = radiometry::normals_from_depth(cam, frame.depth);
  const double min_d = scene.settings().min_light_distance;
  SpectrumImage out(cam.width, cam.height);
  parallel_rows(cam.height, [&](int v) {
    for (int u = 0; u < cam.width; ++u) {
      const double z = frame.depth(u, v);
      if (!(z > 0.0)) continue;
      radiometry::SurfaceSample s{radiometry::unproject(cam, u, v, z), normals(u, v),
                                  frame.albedo(u, v)};
      out(u, v) = radiometry::direct_signal(s, scene.lights(), scene.water(), s.point.norm(), min_d);
    }
  });
  return out;
}

SpectrumImage forward_scatter(const SpectrumImage& direct, const Image<double>& ray_length,
                              double fs_coeff) {
  if (!direct.same_size(ray_length)) throw std::invalid_argument("forward_scatter: size mismatch");
  const int w = direct.width();
  const int h = direct.height();
  SpectrumImage out(w, h);
  if (!(fs_coeff > 0.0)) return out;
  parallel_rows(h, [&](int v) {
    for (int u = 0; u < w; ++u) {
      const double len = ray_length(u, v);
      if (!(len > 0.0)) continue;
      const auto taps = gaussian_taps(fs_coeff * len);
      const int r = static_cast<int>(taps.size() / 2);
      Spectrum acc;
      double norm = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        const int y = v + dy;
        if (y < 0 || y >= h) continue;
        const double wy = taps[static_cast<std::size_t>(dy + r)];
        for (int dx = -r; dx <= r; ++dx) {
          const int x = u + dx;
          if (x < 0 || x >= w || !(ray_length(x, y) > 0.0)) continue;
          const double wxy = wy * taps[static_cast<std::size_t>(dx + r)];
          acc += direct(x, y) * wxy;
          norm += wxy;
        }
      }
      out(u, v) = acc * (1.0 / norm);
    }
  });
  return out;
}

RenderedFrame render_frame(const FrameInput& frame, const Scene& scene,
                           const backscatter::BackscatterLut& lut, bool keep_components) {
  const auto& cam = scene.camera();
  if (lut.image_width() != cam.width || lut.image_height() != cam.height ||
      lut.scene_hash() != backscatter::lut_hash(scene, lut.sampling()))
    throw std::invalid_argument("stale LUT: built for a different scene or image size");

  const SpectrumImage direct = render_direct(frame, scene);
  const Image<double> lengths = ray_lengths(cam, frame.depth);
  const SpectrumImage forward = forward_scatter(direct, lengths, scene.settings().fs_coeff);

  SpectrumImage back(cam.width, cam.height);
  parallel_rows(cam.height, [&](int v) {
    for (int u = 0; u < cam.width; ++u) back(u, v) = backscatter::backscatter_at(lut, u, v, lengths(u, v));
  });

  RenderedFrame out;
  out.linear = SpectrumImage(cam.width, cam.height);
  parallel_rows(cam.height, [&](int v) {
    for (int u = 0; u < cam.width; ++u) out.linear(u, v) = direct(u, v) + forward(u, v) + back(u, v);
  });
  auto mapped = tone_map(out.linear, scene.settings().gain);
  out.output = std::move(mapped.image);
  out.overexposed_fraction = mapped.overexposed_fraction;
  if (keep_components) out.components = Components{direct, forward, std::move(back)};
  return out;
}

Spectrum fog_model(const Spectrum& object, const Spectrum& background, const Spectrum& eta,
                   double distance) {
  const Spectrum t = transmittance(eta, distance);
  Spectrum out;
  for (std::size_t c = 0; c < 3; ++c) out[c] = object[c] * t[c] + background[c] * (1.0 - t[c]);
  return out;
}

RenderedFrame render_fog(const FrameInput& frame, const CameraModel& camera, const Spectrum& eta,
                         const Spectrum& background, double gain) {
  validate_frame(camera, frame);
  RenderedFrame out;
  out.linear = SpectrumImage(camera.width, camera.height);
  parallel_rows(camera.height, [&](int v) {
    for (int u = 0; u < camera.width; ++u) {
      const double z = frame.depth(u, v);
      out.linear(u, v) = z > 0.0 ? fog_model(frame.albedo(u, v), background, eta,
                                             radiometry::ray_length(camera, u, v, z))
                                 : background;
    }
  });
  auto mapped = tone_map(out.linear, gain);
  out.output = std::move(mapped.image);
  out.overexposed_fraction = mapped.overexposed_fraction;
  return out;
}

SequenceReport render_sequence(const Scene& scene, std::size_t count, const FrameSource& source,
                               const FrameSink& sink, const backscatter::BackscatterLut* lut,
                               bool keep_components) {
  SequenceReport report;
  const SlabSampling sampling = backscatter::slab_thicknesses(scene);
  std::optional<backscatter::BackscatterLut> built;
  const auto t0 = Clock::now();
  if (lut == nullptr || lut->scene_hash() != backscatter::lut_hash(scene, lut->sampling())) {
    built = backscatter::build_lut(scene, sampling);
    lut = &*built;
    ++report.lut_builds;
  }
  report.precompute_ms = ms_since(t0);

  for (std::size_t i = 0; i < count; ++i) {
    FrameReport fr;
    fr.index = i;
    auto t1 = Clock::now();
    try {
      const FrameInput frame = source(i);
      t1 = Clock::now();
      const RenderedFrame r = render_frame(frame, scene, *lut, keep_components);
      fr.render_ms = ms_since(t1);
      fr.overexposed_fraction = r.overexposed_fraction;
      if (sink) sink(i, r);
    } catch (const std::exception& e) {
      fr.render_ms = ms_since(t1);
      fr.error = e.what();
    }
    report.frames.push_back(std::move(fr));
  }
  return report;
}

SequenceReport render_sequence(std::span<const FrameInput> frames, const Scene& scene,
                               std::vector<RenderedFrame>& out) {
  out.clear();
  out.resize(frames.size());
  return render_sequence(
      scene, frames.size(), [&](std::size_t i) { return frames[i]; },
      [&](std::size_t i, const RenderedFrame& r) { out[i] = r; });
}

}  // namespace deepsea::pipeline
