#pragma once

#include <vector>

#include "deepsea/image.hpp"

namespace deepsea {

/// Unnormalised Gaussian taps exp(-k^2 / (2 sigma^2)) for k in [-r, r],
/// r = floor(3 sigma). sigma <= 0 yields the single tap {1}.
std::vector<double> gaussian_taps(double sigma);

/// Separable Gaussian blur truncated at 3 sigma. Weights are renormalised
/// over the taps that fall inside the image.
SpectrumImage gaussian_blur(const SpectrumImage& in, double sigma);

}  // namespace deepsea
