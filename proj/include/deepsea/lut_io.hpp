#pragma once

#include <optional>
#include <string>

#include "deepsea/backscatter.hpp"

namespace deepsea::io {

/// LUT cache layout, all little-endian:
///   char[6]  "DSLUT1"
///   u32      image width, image height, downsample, slab count N
///   f64      d_max
///   f64[N]   slab thicknesses
///   u64      scene hash
///   f32[...] cells, [N][cell_h][cell_w][3]
void save_lut(const backscatter::BackscatterLut& lut, const std::string& path);

/// Throws std::runtime_error on I/O errors or a malformed file.
backscatter::BackscatterLut load_lut(const std::string& path);

/// Loads `path` only when it exists and was built for exactly this scene
/// and sampling.
std::optional<backscatter::BackscatterLut> load_lut_if_matching(const std::string& path,
                                                                 const Scene& scene,
                                                                 const SlabSampling& sampling);

}  // namespace deepsea::io
