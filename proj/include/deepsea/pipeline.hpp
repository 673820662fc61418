#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deepsea/backscatter.hpp"
#include "deepsea/image.hpp"
#include "deepsea/scene.hpp"

namespace deepsea::pipeline {

struct ToneMapped {
  Rgb8Image image;
  double overexposed_fraction = 0.0;  // pixels with any channel clipped at 1
};

/// round(255 * clip(gain * value, 0, 1)) per channel.
ToneMapped tone_map(const SpectrumImage& linear, double gain);

struct Components {
  SpectrumImage direct;
  SpectrumImage forward;
  SpectrumImage backscatter;
};

struct RenderedFrame {
  SpectrumImage linear;
  std::optional<Components> components;
  Rgb8Image output;
  double overexposed_fraction = 0.0;
};

/// Ray length per pixel (0 where depth is invalid).
Image<double> ray_lengths(const CameraModel& camera, const DepthImage& depth);

/// Attenuated Lambertian signal of every valid-depth pixel; 0 elsewhere.
SpectrumImage render_direct(const FrameInput& frame, const Scene& scene);

/// Depth-dependent Gaussian blur of the direct image: sigma in pixels is
/// fs_coeff times the pixel's own ray length, the window is truncated at
/// 3 sigma and weights are renormalised over valid-depth neighbours.
/// fs_coeff == 0 disables the component (all zeros).
SpectrumImage forward_scatter(const SpectrumImage& direct, const Image<double>& ray_length,
                              double fs_coeff);

/// direct + forward + backscatter, tone mapped. Throws std::invalid_argument
/// when the LUT was built for another scene or image size.
RenderedFrame render_frame(const FrameInput& frame, const Scene& scene,
                           const backscatter::BackscatterLut& lut, bool keep_components = false);

/// Single-pixel fog model at distance `distance`.
Spectrum fog_model(const Spectrum& object, const Spectrum& background, const Spectrum& eta,
                   double distance);

/// Fog baseline: I = J e^{-eta d} + B (1 - e^{-eta d}) with d the ray length;
/// invalid depth gives B.
RenderedFrame render_fog(const FrameInput& frame, const CameraModel& camera, const Spectrum& eta,
                         const Spectrum& background, double gain);

struct FrameReport {
  std::size_t index = 0;
  double render_ms = 0.0;
  double overexposed_fraction = 0.0;
  std::string error;  // empty on success
};

struct SequenceReport {
  double precompute_ms = 0.0;
  int lut_builds = 0;
  std::vector<FrameReport> frames;
};

using FrameSource = std::function<FrameInput(std::size_t)>;
using FrameSink = std::function<void(std::size_t, const RenderedFrame&)>;

/// Renders `count` frames against one LUT. A prebuilt `lut` is used when
/// given and valid for the scene; otherwise one is built. Errors in a frame
/// are recorded and the sequence continues.
SequenceReport render_sequence(const Scene& scene, std::size_t count, const FrameSource& source,
                               const FrameSink& sink,
                               const backscatter::BackscatterLut* lut = nullptr,
                               bool keep_components = false);

/// Convenience overload collecting outputs in memory.
SequenceReport render_sequence(std::span<const FrameInput> frames, const Scene& scene,
                               std::vector<RenderedFrame>& out);

}  // namespace deepsea::pipeline
