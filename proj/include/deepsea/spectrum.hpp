#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace deepsea {

/// Per-channel (R, G, B) radiometric triple. Each channel stands in for one
/// wavelength sample of the continuous spectral quantities.
struct Spectrum {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  constexpr Spectrum() = default;
  constexpr Spectrum(double r_, double g_, double b_) : r(r_), g(g_), b(b_) {}
  constexpr explicit Spectrum(double v) : r(v), g(v), b(v) {}

  constexpr double& operator[](std::size_t c) { return c == 0 ? r : (c == 1 ? g : b); }
  constexpr double operator[](std::size_t c) const { return c == 0 ? r : (c == 1 ? g : b); }

  constexpr Spectrum& operator+=(const Spectrum& o) {
    r += o.r;
    g += o.g;
    b += o.b;
    return *this;
  }
  constexpr Spectrum& operator*=(double s) {
    r *= s;
    g *= s;
    b *= s;
    return *this;
  }

  bool operator==(const Spectrum&) const = default;

  bool finite() const { return std::isfinite(r) && std::isfinite(g) && std::isfinite(b); }
  bool non_negative() const { return r >= 0.0 && g >= 0.0 && b >= 0.0; }
  double max_component() const { return std::fmax(r, std::fmax(g, b)); }
};

constexpr Spectrum operator+(Spectrum a, const Spectrum& b) { return a += b; }
constexpr Spectrum operator-(const Spectrum& a, const Spectrum& b) {
  return {a.r - b.r, a.g - b.g, a.b - b.b};
}
constexpr Spectrum operator*(Spectrum a, double s) { return a *= s; }
constexpr Spectrum operator*(double s, Spectrum a) { return a *= s; }
constexpr Spectrum operator*(const Spectrum& a, const Spectrum& b) {
  return {a.r * b.r, a.g * b.g, a.b * b.b};
}

/// exp(-eta * distance) per channel.
inline Spectrum transmittance(const Spectrum& eta, double distance) {
  return {std::exp(-eta.r * distance), std::exp(-eta.g * distance),
          std::exp(-eta.b * distance)};
}

}  // namespace deepsea
