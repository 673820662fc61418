#pragma once

#include "deepsea/scene.hpp"

namespace deepsea::synthetic {

/// Deterministic test scene: a sand-textured seafloor plane tilted towards
/// the camera, a rock (sphere) resting on it and open water in the top rows.
/// `frame_index` slides the texture as if the vehicle moved forward.
FrameInput seafloor_frame(const CameraModel& camera, int frame_index = 0);

/// Fronto-parallel plane at z = `distance` with uniform albedo.
FrameInput flat_frame(const CameraModel& camera, double distance, const Spectrum& albedo);

}  // namespace deepsea::synthetic
