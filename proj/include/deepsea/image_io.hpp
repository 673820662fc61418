#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "deepsea/image.hpp"
#include "deepsea/pipeline.hpp"
#include "deepsea/scene.hpp"

namespace deepsea::io {

// PNG (libpng). 8-bit inputs may be gray, gray+alpha, RGB, RGBA or
// palette; alpha is dropped. Other bit depths throw "unsupported bit depth".
Rgb8Image read_png_rgb8(const std::string& path);
void write_png_rgb8(const std::string& path, const Rgb8Image& image);

/// 16-bit single-channel PNG only.
Image<std::uint16_t> read_png_gray16(const std::string& path);
void write_png_gray16(const std::string& path, const Image<std::uint16_t>& image);

// PFM: little-endian floats, rows stored bottom-up on disk.
struct PfmImage {
  int width = 0;
  int height = 0;
  int channels = 0;          // 1 or 3
  std::vector<float> data;   // top row first, interleaved
};
PfmImage read_pfm(const std::string& path);
void write_pfm(const std::string& path, const SpectrumImage& image);
void write_pfm(const std::string& path, const Image<double>& image);

/// sRGB transfer function decode of an 8-bit code value.
double srgb_to_linear(std::uint8_t code);
std::uint8_t linear_to_srgb8(double value);

struct DepthEncoding {
  enum class Format { Auto, Png16, Pfm };
  Format format = Format::Auto;  // Auto picks by file extension
  double scale = 0.001;          // metres per unit for 16-bit PNG
};

/// Loads an sRGB 8-bit albedo image and a depth map; 0 depth stays invalid.
FrameInput load_rgbd(const std::string& albedo_path, const std::string& depth_path,
                     const DepthEncoding& encoding = {});

void save_image(const Rgb8Image& image, const std::string& path);

/// Writes <stem>_direct.pfm, <stem>_forward.pfm and <stem>_backscatter.pfm
/// next to `png_path`. Returns the written paths (empty when the frame has no
/// components).
std::vector<std::string> save_components(const pipeline::RenderedFrame& frame,
                                         const std::string& png_path);

}  // namespace deepsea::io
