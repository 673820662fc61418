#include "deepsea/filter.hpp"

#include <cmath>

#include "deepsea/parallel.hpp"

namespace deepsea {

std::vector<double> gaussian_taps(double sigma) {
  if (!(sigma > 0.0)) return {1.0};
  const int r = static_cast<int>(std::floor(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * r + 1));
  for (int k = -r; k <= r; ++k)
    taps[static_cast<std::size_t>(k + r)] = std::exp(-0.5 * k * k / (sigma * sigma));
  return taps;
}

namespace {

// One normalised 1D pass along x (dx=1) or y (dx=0).
SpectrumImage blur_pass(const SpectrumImage& in, const std::vector<double>& taps, bool along_x) {
  const int r = static_cast<int>(taps.size() / 2);
  const int w = in.width();
  const int h = in.height();
  SpectrumImage out(w, h);
  parallel_rows(h, [&](int v) {
    for (int u = 0; u < w; ++u) {
      Spectrum acc;
      double norm = 0.0;
      for (int k = -r; k <= r; ++k) {
        const int x = along_x ? u + k : u;
        const int y = along_x ? v : v + k;
        if (x < 0 || y < 0 || x >= w || y >= h) continue;
        const double wk = taps[static_cast<std::size_t>(k + r)];
        acc += in(x, y) * wk;
        norm += wk;
      }
      out(u, v) = acc * (1.0 / norm);
    }
  });
  return out;
}

}  // namespace

SpectrumImage gaussian_blur(const SpectrumImage& in, double sigma) {
  const auto taps = gaussian_taps(sigma);
  if (taps.size() == 1) return in;
  return blur_pass(blur_pass(in, taps, true), taps, false);
}

}  // namespace deepsea
