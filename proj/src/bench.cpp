#include "deepsea/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "deepsea/backscatter.hpp"
#include "deepsea/parallel.hpp"
#include "deepsea/pipeline.hpp"
#include "deepsea/synthetic.hpp"

namespace deepsea::bench {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

BenchReport run_bench(const Scene& scene, const BenchOptions& options) {
  const auto& cam = scene.camera();
  BenchReport r;
  r.width = cam.width;
  r.height = cam.height;
  r.n_slabs = scene.settings().n_slabs;
  r.threads = thread_count();

  const SlabSampling sampling = backscatter::slab_thicknesses(scene);
  auto t0 = Clock::now();
  const auto lut = backscatter::build_lut(scene, sampling);
  r.precompute_ms = ms_since(t0);

  const int frames = std::max(options.frames, 1);
  std::vector<double> times;
  FrameInput frame;
  for (int i = 0; i < frames; ++i) {
    frame = synthetic::seafloor_frame(cam, i);
    t0 = Clock::now();
    const auto out = pipeline::render_frame(frame, scene, lut);
    times.push_back(ms_since(t0));
  }
  double sum = 0.0;
  for (double t : times) sum += t;
  r.render_mean_ms = sum / static_cast<double>(times.size());
  std::sort(times.begin(), times.end());
  const auto p95 = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(times.size()))) - 1;
  r.render_p95_ms = times[std::min(p95, times.size() - 1)];

  struct Probe {
    int u, v;
    double length;
    Spectrum reference;
  };
  const auto lengths = pipeline::ray_lengths(cam, frame.depth);
  const double d_max = scene.settings().d_max;
  std::vector<Probe> probes;
  const int samples = std::max(options.bruteforce_pixels, 1);
  for (int k = 0; k < samples; ++k) {
    const int u = static_cast<int>((k + 0.5) * cam.width / samples);
    const int v = static_cast<int>((k * 7 % samples + 0.5) * cam.height / samples);
    const double len = lengths(u, v);
    probes.push_back({u, v, len,
                      backscatter::backscatter_bruteforce(scene, u, v, len, options.reference_step_m)});
  }

  auto rel_error = [](const Spectrum& x, const Spectrum& ref) {
    double e = 0.0;
    for (std::size_t c = 0; c < 3; ++c)
      if (ref[c] > 0.0) e = std::max(e, std::abs(x[c] - ref[c]) / ref[c]);
    return e;
  };
  for (const auto& p : probes)
    r.lut_max_rel_error =
        std::max(r.lut_max_rel_error, rel_error(backscatter::backscatter_at(lut, p.u, p.v, p.length), p.reference));

  double step = d_max;
  for (;;) {
    double err = 0.0;
    for (const auto& p : probes)
      err = std::max(err, rel_error(backscatter::backscatter_bruteforce(scene, p.u, p.v, p.length, step),
                                    p.reference));
    if (err <= r.lut_max_rel_error || step / 2.0 < 2.0 * options.reference_step_m) {
      r.bruteforce_step_m = step;
      r.bruteforce_max_rel_error = err;
      break;
    }
    step /= 2.0;
  }

  t0 = Clock::now();
  for (const auto& p : probes)
    (void)backscatter::backscatter_bruteforce(scene, p.u, p.v, p.length, r.bruteforce_step_m);
  const double per_pixel_ms = ms_since(t0) / static_cast<double>(probes.size());
  // Backscatter is replaced, everything else in the frame stays.
  r.bruteforce_frame_ms =
      per_pixel_ms * cam.width * cam.height / std::max(r.threads, 1) + r.render_mean_ms;
  r.speedup = r.bruteforce_frame_ms / r.render_mean_ms;
  return r;
}

void print_report(std::ostream& os, const BenchReport& r) {
  os << "image            " << r.width << "x" << r.height << "\n"
     << "slabs            " << r.n_slabs << "\n"
     << "threads          " << r.threads << "\n"
     << "precompute_ms    " << r.precompute_ms << "\n"
     << "render_mean_ms   " << r.render_mean_ms << "\n"
     << "render_p95_ms    " << r.render_p95_ms << "\n"
     << "lut_max_rel_error " << r.lut_max_rel_error << "\n"
     << "bruteforce_step_m " << r.bruteforce_step_m << "\n"
     << "bruteforce_max_rel_error " << r.bruteforce_max_rel_error << "\n"
     << "bruteforce_frame_ms_est " << r.bruteforce_frame_ms << "\n"
     << "speedup          " << r.speedup << "\n";
}

}  // namespace deepsea::bench
