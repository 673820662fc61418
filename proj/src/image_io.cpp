#include "deepsea/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace deepsea::io {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_file(const std::string& path, const char* mode) {
  File f(std::fopen(path.c_str(), mode));
  if (!f) throw std::runtime_error("cannot open " + path + (mode[0] == 'w' ? " for writing" : ""));
  return f;
}

[[noreturn]] void png_fail(png_structp png, png_const_charp msg) {
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  if (err) *err = msg;
  png_longjmp(png, 1);
}

void png_warn(png_structp, png_const_charp) {}

// Decoded PNG in its native layout after expanding palette / sub-byte gray.
struct RawPng {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<unsigned char> bytes;  // big-endian samples for 16-bit
};

RawPng read_raw_png(const std::string& path) {
  File f = open_file(path, "rb");
  std::array<unsigned char, 8> sig{};
  if (std::fread(sig.data(), 1, sig.size(), f.get()) != sig.size() || png_sig_cmp(sig.data(), 0, 8) != 0)
    throw std::runtime_error(path + ": not a PNG file");

  std::string error;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_fail, png_warn);
  if (!png) throw std::runtime_error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  RawPng out;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error(path + ": " + error);
  }
  png_init_io(png, f.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  out.bytes.resize(stride * static_cast<std::size_t>(out.height));
  rows.resize(static_cast<std::size_t>(out.height));
  for (int y = 0; y < out.height; ++y) rows[static_cast<std::size_t>(y)] = out.bytes.data() + stride * static_cast<std::size_t>(y);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void write_raw_png(const std::string& path, int width, int height, int color_type, int bit_depth,
                   const std::vector<unsigned char>& bytes, std::size_t stride) {
  File f = open_file(path, "wb");
  std::string error;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_fail, png_warn);
  if (!png) throw std::runtime_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error(path + ": " + error);
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth,
               color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y)
    rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(bytes.data() + stride * static_cast<std::size_t>(y));
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(f.get()) != 0) throw std::runtime_error("write failed: " + path);
}

}  // namespace

Rgb8Image read_png_rgb8(const std::string& path) {
  const RawPng raw = read_raw_png(path);
  if (raw.bit_depth != 8) throw std::runtime_error(path + ": unsupported bit depth " + std::to_string(raw.bit_depth));
  Rgb8Image img(raw.width, raw.height);
  const std::size_t c = static_cast<std::size_t>(raw.channels);
  for (int y = 0; y < raw.height; ++y) {
    for (int x = 0; x < raw.width; ++x) {
      const unsigned char* p = raw.bytes.data() + (static_cast<std::size_t>(y) * static_cast<std::size_t>(raw.width) + static_cast<std::size_t>(x)) * c;
      img(x, y) = c >= 3 ? Rgb8{p[0], p[1], p[2]} : Rgb8{p[0], p[0], p[0]};
    }
  }
  return img;
}

void write_png_rgb8(const std::string& path, const Rgb8Image& image) {
  std::vector<unsigned char> bytes(image.size() * 3);
  for (std::size_t i = 0; i < image.size(); ++i)
    std::memcpy(bytes.data() + 3 * i, image.data()[i].data(), 3);
  write_raw_png(path, image.width(), image.height(), PNG_COLOR_TYPE_RGB, 8, bytes,
                static_cast<std::size_t>(image.width()) * 3);
}

Image<std::uint16_t> read_png_gray16(const std::string& path) {
  const RawPng raw = read_raw_png(path);
  if (raw.bit_depth != 16 || raw.channels != 1)
    throw std::runtime_error(path + ": unsupported bit depth (depth PNG must be 16-bit grayscale)");
  Image<std::uint16_t> img(raw.width, raw.height);
  for (std::size_t i = 0; i < img.size(); ++i)
    img.data()[i] = static_cast<std::uint16_t>((raw.bytes[2 * i] << 8) | raw.bytes[2 * i + 1]);
  return img;
}

void write_png_gray16(const std::string& path, const Image<std::uint16_t>& image) {
  std::vector<unsigned char> bytes(image.size() * 2);
  for (std::size_t i = 0; i < image.size(); ++i) {
    bytes[2 * i] = static_cast<unsigned char>(image.data()[i] >> 8);
    bytes[2 * i + 1] = static_cast<unsigned char>(image.data()[i] & 0xff);
  }
  write_raw_png(path, image.width(), image.height(), PNG_COLOR_TYPE_GRAY, 16, bytes,
                static_cast<std::size_t>(image.width()) * 2);
}

PfmImage read_pfm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string magic;
  PfmImage out;
  double scale = 0.0;
  in >> magic >> out.width >> out.height >> scale;
  if (!in || (magic != "PF" && magic != "Pf") || out.width <= 0 || out.height <= 0 || scale == 0.0)
    throw std::runtime_error(path + ": bad PFM header");
  in.get();  // single whitespace before the raster
  out.channels = magic == "PF" ? 3 : 1;
  const std::size_t row = static_cast<std::size_t>(out.width) * static_cast<std::size_t>(out.channels);
  out.data.resize(row * static_cast<std::size_t>(out.height));
  const bool little = scale < 0.0;
  std::vector<unsigned char> buf(row * 4);
  for (int y = out.height - 1; y >= 0; --y) {
    if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
      throw std::runtime_error(path + ": truncated PFM");
    for (std::size_t i = 0; i < row; ++i) {
      const unsigned char* b = buf.data() + 4 * i;
      const std::uint32_t bits = little ? (std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 | std::uint32_t{b[2]} << 16 | std::uint32_t{b[3]} << 24)
                                        : (std::uint32_t{b[3]} | std::uint32_t{b[2]} << 8 | std::uint32_t{b[1]} << 16 | std::uint32_t{b[0]} << 24);
      out.data[static_cast<std::size_t>(y) * row + i] = std::bit_cast<float>(bits);
    }
  }
  return out;
}

namespace {

void write_pfm_raw(const std::string& path, int width, int height, int channels,
                   const std::vector<float>& data) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << (channels == 3 ? "PF" : "Pf") << '\n' << width << ' ' << height << '\n' << "-1.0" << '\n';
  const std::size_t row = static_cast<std::size_t>(width) * static_cast<std::size_t>(channels);
  std::vector<unsigned char> buf(row * 4);
  for (int y = height - 1; y >= 0; --y) {
    for (std::size_t i = 0; i < row; ++i) {
      const auto bits = std::bit_cast<std::uint32_t>(data[static_cast<std::size_t>(y) * row + i]);
      for (int k = 0; k < 4; ++k) buf[4 * i + static_cast<std::size_t>(k)] = static_cast<unsigned char>(bits >> (8 * k));
    }
    os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void write_pfm(const std::string& path, const SpectrumImage& image) {
  std::vector<float> data;
  data.reserve(image.size() * 3);
  for (const auto& s : image.data()) {
    data.push_back(static_cast<float>(s.r));
    data.push_back(static_cast<float>(s.g));
    data.push_back(static_cast<float>(s.b));
  }
  write_pfm_raw(path, image.width(), image.height(), 3, data);
}

void write_pfm(const std::string& path, const Image<double>& image) {
  std::vector<float> data(image.data().begin(), image.data().end());
  write_pfm_raw(path, image.width(), image.height(), 1, data);
}

double srgb_to_linear(std::uint8_t code) {
  const double c = code / 255.0;
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

std::uint8_t linear_to_srgb8(double value) {
  const double c = std::clamp(value, 0.0, 1.0);
  const double e = c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
  return static_cast<std::uint8_t>(std::lround(255.0 * e));
}

namespace {

bool has_extension(const std::string& path, const char* ext) {
  auto e = std::filesystem::path(path).extension().string();
  for (auto& ch : e) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return e == ext;
}

}  // namespace

FrameInput load_rgbd(const std::string& albedo_path, const std::string& depth_path,
                     const DepthEncoding& encoding) {
  const Rgb8Image rgb = read_png_rgb8(albedo_path);
  std::array<double, 256> lut{};
  for (int i = 0; i < 256; ++i) lut[static_cast<std::size_t>(i)] = srgb_to_linear(static_cast<std::uint8_t>(i));

  FrameInput frame;
  frame.albedo = SpectrumImage(rgb.width(), rgb.height());
  for (std::size_t i = 0; i < rgb.size(); ++i) {
    const Rgb8& p = rgb.data()[i];
    frame.albedo.data()[i] = {lut[p[0]], lut[p[1]], lut[p[2]]};
  }

  auto format = encoding.format;
  if (format == DepthEncoding::Format::Auto)
    format = has_extension(depth_path, ".pfm") ? DepthEncoding::Format::Pfm : DepthEncoding::Format::Png16;

  if (format == DepthEncoding::Format::Pfm) {
    const PfmImage pfm = read_pfm(depth_path);
    if (pfm.channels != 1) throw std::runtime_error(depth_path + ": depth PFM must have one channel");
    frame.depth = DepthImage(pfm.width, pfm.height);
    for (std::size_t i = 0; i < frame.depth.size(); ++i) {
      const double d = pfm.data[i];
      frame.depth.data()[i] = std::isfinite(d) && d > 0.0 ? d : 0.0;
    }
  } else {
    if (!(encoding.scale > 0.0)) throw std::invalid_argument("depth scale must be positive");
    const auto raw = read_png_gray16(depth_path);
    frame.depth = DepthImage(raw.width(), raw.height());
    for (std::size_t i = 0; i < raw.size(); ++i) frame.depth.data()[i] = raw.data()[i] * encoding.scale;
  }

  if (!frame.depth.same_size(frame.albedo))
    throw std::runtime_error("albedo and depth dimensions differ (" + albedo_path + ", " + depth_path + ")");
  return frame;
}

void save_image(const Rgb8Image& image, const std::string& path) { write_png_rgb8(path, image); }

std::vector<std::string> save_components(const pipeline::RenderedFrame& frame,
                                         const std::string& png_path) {
  if (!frame.components) return {};
  const std::filesystem::path p(png_path);
  const auto base = (p.parent_path() / p.stem()).string();
  std::vector<std::string> paths{base + "_direct.pfm", base + "_forward.pfm", base + "_backscatter.pfm"};
  write_pfm(paths[0], frame.components->direct);
  write_pfm(paths[1], frame.components->forward);
  write_pfm(paths[2], frame.components->backscatter);
  return paths;
}

}  // namespace deepsea::io
