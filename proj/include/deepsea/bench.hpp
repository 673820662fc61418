#pragma once

#include <iosfwd>

#include "deepsea/scene.hpp"

namespace deepsea::bench {

struct BenchOptions {
  int frames = 20;
  int bruteforce_pixels = 16;     // probe pixels for calibration and timing
  double reference_step_m = 0.005;
};

struct BenchReport {
  int width = 0;
  int height = 0;
  int n_slabs = 0;
  int threads = 0;
  double precompute_ms = 0.0;
  double render_mean_ms = 0.0;
  double render_p95_ms = 0.0;
  double lut_max_rel_error = 0.0;          // vs reference, over probe pixels
  double bruteforce_step_m = 0.0;          // coarsest step at least as accurate
  double bruteforce_max_rel_error = 0.0;
  double bruteforce_frame_ms = 0.0;        // estimated, full frame
  double speedup = 0.0;                    // bruteforce_frame_ms / render_mean_ms
};

/// Builds the LUT once and renders `frames` synthetic frames against it.
/// The brute-force comparison integrates backscatter per pixel with the
/// coarsest uniform step (d_max / 2^k) whose error on the probe pixels does
/// not exceed the LUT's; its per-frame cost is extrapolated from the probes.
BenchReport run_bench(const Scene& scene, const BenchOptions& options = {});

void print_report(std::ostream& os, const BenchReport& report);

}  // namespace deepsea::bench
