#include "deepsea/backscatter.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "deepsea/filter.hpp"
#include "deepsea/parallel.hpp"
#include "deepsea/radiometry.hpp"

namespace deepsea::backscatter {

SlabSampling sampling_from_thicknesses(double d_max, std::vector<double> thicknesses) {
  SlabSampling s;
  s.n_slabs = static_cast<int>(thicknesses.size());
  s.d_max = d_max;
  s.thicknesses = std::move(thicknesses);
  s.centers.resize(s.thicknesses.size());
  s.ends.resize(s.thicknesses.size());
  double start = 0.0;
  for (std::size_t i = 0; i < s.thicknesses.size(); ++i) {
    s.centers[i] = start + 0.5 * s.thicknesses[i];
    start += s.thicknesses[i];
    s.ends[i] = start;
  }
  return s;
}

SlabSampling slab_thicknesses(int n, double d_max) {
  if (n < 1) throw std::invalid_argument("slab count must be >= 1");
  if (!(d_max > 0.0) || !std::isfinite(d_max)) throw std::invalid_argument("d_max must be positive");
  std::vector<double> thicknesses(static_cast<std::size_t>(n));
  const double log_scale = std::log(2.2 * d_max) - n;
  const double log_n = std::log(static_cast<double>(n));
  for (int k = 0; k < n; ++k)
    thicknesses[static_cast<std::size_t>(k)] = std::exp(log_scale + k * log_n - std::lgamma(k + 1.0));
  return sampling_from_thicknesses(d_max, std::move(thicknesses));
}

double vsf_eval(const WaterBody& water, double scatter_angle) {
  if (!(scatter_angle >= 0.0 && scatter_angle <= std::numbers::pi))
    throw std::domain_error("scatter angle outside [0, pi]");
  return water.vsf.interpolate(scatter_angle, water.vsf.values().back());
}

ScatterGeometry scatter_geometry(const Vec3& voxel, const SpotLight& light) {
  ScatterGeometry g;
  const Vec3 to_light = light.position - voxel;
  g.d1p = to_light.norm();
  g.d2p = voxel.norm();
  g.psi = radiometry::angle_between(to_light, -voxel);
  g.phi = radiometry::angle_between(voxel, Vec3::UnitZ());
  g.theta = radiometry::angle_between(light.direction, -to_light);
  return g;
}

Spectrum voxel_irradiance(const ScatterGeometry& geom, const SpotLight& light,
                          const WaterBody& water, double min_d) {
  const double d1 = std::max(geom.d1p, min_d);
  const double scale = radiometry::evaluate_rid(light.rid, geom.theta) / (d1 * d1);
  return light.intensity_i0 * transmittance(water.eta, geom.d1p + geom.d2p) * scale;
}

// ---------------------------------------------------------------------------
// LUT

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

double cell_center(int c, int downsample, int image_extent) {
  const double x = c * static_cast<double>(downsample) + 0.5 * (downsample - 1);
  return std::min(x, static_cast<double>(image_extent - 1));
}

}  // namespace

BackscatterLut::BackscatterLut(int image_width, int image_height, int downsample,
                               SlabSampling sampling, std::uint64_t scene_hash)
    : image_width_(image_width),
      image_height_(image_height),
      downsample_(downsample),
      cell_width_(ceil_div(image_width, downsample)),
      cell_height_(ceil_div(image_height, downsample)),
      sampling_(std::move(sampling)),
      scene_hash_(scene_hash) {
  cells_.assign(static_cast<std::size_t>(cell_width_) * static_cast<std::size_t>(cell_height_) *
                    static_cast<std::size_t>(sampling_.n_slabs) * 3,
                0.0f);
}

double BackscatterLut::cell_center_x(int cu) const {
  return cell_center(cu, downsample_, image_width_);
}
double BackscatterLut::cell_center_y(int cv) const {
  return cell_center(cv, downsample_, image_height_);
}

std::uint64_t lut_bytes(int image_width, int image_height, int downsample, int n_slabs) {
  return static_cast<std::uint64_t>(ceil_div(image_width, downsample)) *
         static_cast<std::uint64_t>(ceil_div(image_height, downsample)) *
         static_cast<std::uint64_t>(n_slabs) * 3 * sizeof(float);
}

namespace {

// FNV-1a over the raw bytes of the fields a LUT depends on.
class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  void f64(double v) {
    if (v == 0.0) v = 0.0;  // fold -0
    bytes(&v, sizeof v);
  }
  void i64(std::int64_t v) { bytes(&v, sizeof v); }
  void spectrum(const Spectrum& s) {
    f64(s.r);
    f64(s.g);
    f64(s.b);
  }
  void vec(const Vec3& v) {
    f64(v.x());
    f64(v.y());
    f64(v.z());
  }
  void table(const AngularTable& t) {
    i64(static_cast<std::int64_t>(t.size()));
    for (double a : t.angles_deg()) f64(a);
    for (double v : t.values()) f64(v);
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::uint64_t lut_hash(const Scene& scene, const SlabSampling& sampling) {
  Fnv1a h;
  const auto& cam = scene.camera();
  h.i64(cam.width);
  h.i64(cam.height);
  h.f64(cam.fx);
  h.f64(cam.fy);
  h.f64(cam.cx);
  h.f64(cam.cy);
  h.i64(static_cast<std::int64_t>(scene.lights().size()));
  for (const auto& l : scene.lights()) {
    h.vec(l.position);
    h.vec(l.direction);
    h.i64(static_cast<std::int64_t>(l.rid.index()));
    if (const auto* g = std::get_if<GaussianRid>(&l.rid)) {
      h.f64(g->sigma_deg);
    } else {
      h.table(std::get<TableRid>(l.rid).table);
    }
    h.spectrum(l.intensity_i0);
  }
  h.spectrum(scene.water().eta);
  h.table(scene.water().vsf);
  const auto& st = scene.settings();
  h.f64(st.fs_coeff);
  h.i64(st.lut_downsample);
  h.f64(st.min_light_distance);
  h.i64(sampling.n_slabs);
  h.f64(sampling.d_max);
  for (double t : sampling.thicknesses) h.f64(t);
  return h.value();
}

namespace {

// Per-light quantities of one voxel: irradiance E' and the factor
// beta(pi - psi) * cos(phi) that turns it into scattered radiance per metre.
struct VoxelTerms {
  Spectrum irradiance;
  double weight = 0.0;
};

VoxelTerms voxel_terms(const Vec3& ray, double distance, const SpotLight& light,
                       const WaterBody& water, double min_d) {
  const Vec3 voxel = ray * distance;
  const ScatterGeometry g = scatter_geometry(voxel, light);
  VoxelTerms t;
  t.irradiance = voxel_irradiance(g, light, water, min_d);
  t.weight = vsf_eval(water, std::numbers::pi - g.psi) * std::cos(g.phi);
  return t;
}

}  // namespace

BackscatterLut build_lut(const Scene& scene, const SlabSampling& sampling) {
  const auto& cam = scene.camera();
  const auto& st = scene.settings();
  const std::uint64_t bytes = lut_bytes(cam.width, cam.height, st.lut_downsample, sampling.n_slabs);
  if (bytes > st.lut_memory_cap_bytes) {
    std::ostringstream os;
    os << "backscatter LUT needs " << bytes << " bytes, above the cap of "
       << st.lut_memory_cap_bytes << "; increase lut_downsample";
    throw std::length_error(os.str());
  }

  BackscatterLut lut(cam.width, cam.height, st.lut_downsample, sampling, lut_hash(scene, sampling));
  const int cw = lut.cell_width();
  const int ch = lut.cell_height();

  Image<Vec3> rays(cw, ch);
  for (int cv = 0; cv < ch; ++cv)
    for (int cu = 0; cu < cw; ++cu)
      rays(cu, cv) = radiometry::ray_through(cam, lut.cell_center_x(cu), lut.cell_center_y(cv));

  const auto& lights = scene.lights();
  const auto& water = scene.water();
  const double min_d = st.min_light_distance;

  SpectrumImage accumulated(cw, ch);
  SpectrumImage contribution(cw, ch);
  SpectrumImage irradiance(cw, ch);
  Image<double> weight(cw, ch);

  for (int i = 0; i < sampling.n_slabs; ++i) {
    const auto si = static_cast<std::size_t>(i);
    const double center = sampling.centers[si];
    const double dz = sampling.thicknesses[si];
    const double sigma_cells = st.fs_coeff * center / st.lut_downsample;

    std::fill(contribution.data().begin(), contribution.data().end(), Spectrum{});
    for (const auto& light : lights) {
      parallel_rows(ch, [&](int cv) {
        for (int cu = 0; cu < cw; ++cu) {
          const VoxelTerms t = voxel_terms(rays(cu, cv), center, light, water, min_d);
          irradiance(cu, cv) = t.irradiance;
          weight(cu, cv) = t.weight;
        }
      });
      if (sigma_cells > 0.0) {
        const SpectrumImage forward = gaussian_blur(irradiance, sigma_cells);
        parallel_rows(ch, [&](int cv) {
          for (int cu = 0; cu < cw; ++cu)
            contribution(cu, cv) += (irradiance(cu, cv) + forward(cu, cv)) * (weight(cu, cv) * dz);
        });
      } else {
        parallel_rows(ch, [&](int cv) {
          for (int cu = 0; cu < cw; ++cu)
            contribution(cu, cv) += irradiance(cu, cv) * (weight(cu, cv) * dz);
        });
      }
    }

    parallel_rows(ch, [&](int cv) {
      for (int cu = 0; cu < cw; ++cu) {
        accumulated(cu, cv) += contribution(cu, cv);
        lut.set_cell(cu, cv, i, accumulated(cu, cv));
      }
    });
  }
  return lut;
}

namespace {

// Interpolation position along the slab ends for `depth`.
struct DepthKnots {
  int lo = -1;       // -1: before the first end (scale slab 0 by `t`)
  int hi = 0;
  double t = 0.0;
};

DepthKnots depth_knots(const SlabSampling& s, double depth) {
  const int n = s.n_slabs;
  DepthKnots k;
  if (!(depth > 0.0) || depth >= s.ends.back()) {
    k.lo = k.hi = n - 1;
    return k;
  }
  if (depth <= s.ends.front()) {
    k.lo = -1;
    k.hi = 0;
    k.t = depth / s.ends.front();
    return k;
  }
  const auto it = std::upper_bound(s.ends.begin(), s.ends.end(), depth);
  k.hi = static_cast<int>(it - s.ends.begin());
  k.lo = k.hi - 1;
  const double a = s.ends[static_cast<std::size_t>(k.lo)];
  const double b = s.ends[static_cast<std::size_t>(k.hi)];
  k.t = (depth - a) / (b - a);
  return k;
}

Spectrum column_value(const BackscatterLut& lut, int cu, int cv, const DepthKnots& k) {
  if (k.lo < 0) return lut.cell(cu, cv, k.hi) * k.t;
  const Spectrum lo = lut.cell(cu, cv, k.lo);
  if (k.t == 0.0) return lo;
  const Spectrum hi = lut.cell(cu, cv, k.hi);
  return lo + (hi - lo) * k.t;
}

// Bracketing cells and weight for an image coordinate. The last cell's
// centre may be clamped to the image edge, so spacing is taken from the
// actual centres.
void cell_coordinate(double pixel, int downsample, int cells, int extent, int& c0, int& c1, double& f) {
  if (cells == 1) {
    c0 = c1 = 0;
    f = 0.0;
    return;
  }
  c0 = std::clamp(static_cast<int>(std::floor((pixel - 0.5 * (downsample - 1)) / downsample)), 0, cells - 2);
  c1 = c0 + 1;
  const double a = cell_center(c0, downsample, extent);
  const double b = cell_center(c1, downsample, extent);
  f = std::clamp((pixel - a) / (b - a), 0.0, 1.0);
  if (f == 1.0) {
    c0 = c1;
    f = 0.0;
  }
}

}  // namespace

Spectrum backscatter_at(const BackscatterLut& lut, int u, int v, double depth_along_ray) {
  if (u < 0 || v < 0 || u >= lut.image_width() || v >= lut.image_height())
    throw std::out_of_range("pixel outside LUT image");
  const DepthKnots k = depth_knots(lut.sampling(), depth_along_ray);
  if (lut.downsample() == 1) return column_value(lut, u, v, k);

  int x0, x1, y0, y1;
  double fx, fy;
  cell_coordinate(u, lut.downsample(), lut.cell_width(), lut.image_width(), x0, x1, fx);
  cell_coordinate(v, lut.downsample(), lut.cell_height(), lut.image_height(), y0, y1, fy);
  Spectrum out = column_value(lut, x0, y0, k) * ((1.0 - fx) * (1.0 - fy));
  if (fx > 0.0) out += column_value(lut, x1, y0, k) * (fx * (1.0 - fy));
  if (fy > 0.0) out += column_value(lut, x0, y1, k) * ((1.0 - fx) * fy);
  if (fx > 0.0 && fy > 0.0) out += column_value(lut, x1, y1, k) * (fx * fy);
  return out;
}

// ---------------------------------------------------------------------------
// Direct integration (no table)

namespace {

// beta * (E' [+ E'_f]) * cos(phi) per metre at `distance` along the ray
// through (x, y), summed over lights. The forward term gathers E' of the
// neighbouring pixel rays at the same distance, as the LUT's per-slab blur
// does in cell space.
Spectrum scatter_density(const Scene& scene, double x, double y, const Vec3& ray, double distance,
                         bool include_forward) {
  const auto& cam = scene.camera();
  const auto& water = scene.water();
  const double min_d = scene.settings().min_light_distance;
  const double sigma = include_forward ? scene.settings().fs_coeff * distance : 0.0;
  const auto taps = gaussian_taps(sigma);
  const int r = static_cast<int>(taps.size() / 2);

  Spectrum total;
  for (const auto& light : scene.lights()) {
    const VoxelTerms center = voxel_terms(ray, distance, light, water, min_d);
    Spectrum e = center.irradiance;
    if (sigma > 0.0) {
      Spectrum acc;
      double norm = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        const double yy = y + dy;
        if (yy < 0.0 || yy > cam.height - 1) continue;
        for (int dx = -r; dx <= r; ++dx) {
          const double xx = x + dx;
          if (xx < 0.0 || xx > cam.width - 1) continue;
          const double w = taps[static_cast<std::size_t>(dx + r)] * taps[static_cast<std::size_t>(dy + r)];
          const Vec3 nray = radiometry::ray_through(cam, xx, yy);
          acc += voxel_terms(nray, distance, light, water, min_d).irradiance * w;
          norm += w;
        }
      }
      e += acc * (1.0 / norm);
    }
    total += e * center.weight;
  }
  return total;
}

}  // namespace

Spectrum backscatter_bruteforce(const Scene& scene, double x, double y, double depth_along_ray,
                                double step, bool include_forward) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  const double d_max = scene.settings().d_max;
  const double end = depth_along_ray > 0.0 ? std::min(depth_along_ray, d_max) : d_max;
  const Vec3 ray = radiometry::ray_through(scene.camera(), x, y);
  const auto n = static_cast<long long>(std::ceil(end / step - 1e-12));
  Spectrum total;
  for (long long k = 0; k < n; ++k) {
    const double a = static_cast<double>(k) * step;
    const double b = std::min(end, a + step);
    if (!(b > a)) break;
    total += scatter_density(scene, x, y, ray, 0.5 * (a + b), include_forward) * (b - a);
  }
  return total;
}

std::vector<ProfileRow> backscatter_profile(const Scene& scene, const SlabSampling& sampling) {
  const auto& cam = scene.camera();
  const Vec3 axis = Vec3::UnitZ();
  const bool forward = scene.settings().fs_coeff > 0.0;
  std::vector<ProfileRow> rows(static_cast<std::size_t>(sampling.n_slabs));
  Spectrum acc;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    acc += scatter_density(scene, cam.cx, cam.cy, axis, sampling.centers[i], forward) *
           sampling.thicknesses[i];
    rows[i].depth = sampling.ends[i];
    rows[i].value = acc;
  }
  const Spectrum total = acc;
  for (auto& row : rows) {
    for (std::size_t c = 0; c < 3; ++c)
      row.value[c] = total[c] > 0.0 ? row.value[c] / total[c] : 0.0;
  }
  return rows;
}

Spectrum profile_at(const std::vector<ProfileRow>& rows, double depth) {
  if (rows.empty()) return {};
  if (depth >= rows.back().depth) return rows.back().value;
  if (depth <= rows.front().depth) return rows.front().value * (std::max(depth, 0.0) / rows.front().depth);
  const auto it = std::upper_bound(rows.begin(), rows.end(), depth,
                                   [](double d, const ProfileRow& r) { return d < r.depth; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (depth - lo.depth) / (hi.depth - lo.depth);
  return lo.value + (hi.value - lo.value) * t;
}

void write_profile_csv(std::ostream& os, const std::vector<ProfileRow>& rows) {
  os << "depth_m,r,g,b\n";
  const auto old = os.precision(10);
  for (const auto& row : rows)
    os << row.depth << ',' << row.value.r << ',' << row.value.g << ',' << row.value.b << '\n';
  os.precision(old);
}

}  // namespace deepsea::backscatter
