#include "deepsea/lut_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace deepsea::io {

namespace {

constexpr std::array<char, 6> kMagic{'D', 'S', 'L', 'U', 'T', '1'};

template <typename U>
void put_le(std::ostream& os, U v) {
  std::array<char, sizeof(U)> b;
  for (std::size_t i = 0; i < sizeof(U); ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b.data(), b.size());
}

template <typename U>
U get_le(std::istream& is) {
  std::array<unsigned char, sizeof(U)> b;
  if (!is.read(reinterpret_cast<char*>(b.data()), b.size()))
    throw std::runtime_error("truncated LUT file");
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& os, double d) { put_le(os, std::bit_cast<std::uint64_t>(d)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_le<std::uint64_t>(is)); }

}  // namespace

void save_lut(const backscatter::BackscatterLut& lut, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(lut.image_width()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(lut.image_height()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(lut.downsample()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(lut.n_slabs()));
  put_f64(os, lut.sampling().d_max);
  for (double t : lut.sampling().thicknesses) put_f64(os, t);
  put_le<std::uint64_t>(os, lut.scene_hash());
  for (float f : lut.raw()) put_le<std::uint32_t>(os, std::bit_cast<std::uint32_t>(f));
  if (!os) throw std::runtime_error("write failed: " + path);
}

backscatter::BackscatterLut load_lut(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::array<char, 6> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic)
    throw std::runtime_error(path + ": not a DSLUT1 file");
  const auto width = get_le<std::uint32_t>(is);
  const auto height = get_le<std::uint32_t>(is);
  const auto downsample = get_le<std::uint32_t>(is);
  const auto n = get_le<std::uint32_t>(is);
  if (width == 0 || height == 0 || downsample == 0 || n == 0 || width > 1u << 20 ||
      height > 1u << 20 || n > 1u << 16)
    throw std::runtime_error(path + ": bad LUT header");
  const double d_max = get_f64(is);
  std::vector<double> thicknesses(n);
  for (auto& t : thicknesses) t = get_f64(is);
  const auto hash = get_le<std::uint64_t>(is);

  backscatter::BackscatterLut lut(static_cast<int>(width), static_cast<int>(height),
                                  static_cast<int>(downsample),
                                  backscatter::sampling_from_thicknesses(d_max, std::move(thicknesses)),
                                  hash);
  for (float& f : lut.raw()) f = std::bit_cast<float>(get_le<std::uint32_t>(is));
  return lut;
}

std::optional<backscatter::BackscatterLut> load_lut_if_matching(const std::string& path,
                                                                 const Scene& scene,
                                                                 const SlabSampling& sampling) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  auto lut = load_lut(path);
  const auto& cam = scene.camera();
  if (lut.scene_hash() != backscatter::lut_hash(scene, sampling) ||
      lut.image_width() != cam.width || lut.image_height() != cam.height ||
      lut.downsample() != scene.settings().lut_downsample || !(lut.sampling() == sampling))
    return std::nullopt;
  return lut;
}

}  // namespace deepsea::io
