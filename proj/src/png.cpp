#include "patmg/png.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace patmg {

namespace {

void put_be32(std::vector<unsigned char>& v, std::uint32_t x) {
  v.push_back(static_cast<unsigned char>(x >> 24));
  v.push_back(static_cast<unsigned char>(x >> 16));
  v.push_back(static_cast<unsigned char>(x >> 8));
  v.push_back(static_cast<unsigned char>(x));
}

void write_chunk(std::ofstream& os, const char type[4], const std::vector<unsigned char>& data) {
  std::vector<unsigned char> head;
  put_be32(head, static_cast<std::uint32_t>(data.size()));
  os.write(reinterpret_cast<const char*>(head.data()), 4);
  os.write(type, 4);
  if (!data.empty()) os.write(reinterpret_cast<const char*>(data.data()), data.size());
  std::uint32_t crc = crc32(0, reinterpret_cast<const Bytef*>(type), 4);
  if (!data.empty()) crc = crc32(crc, data.data(), static_cast<uInt>(data.size()));
  std::vector<unsigned char> tail;
  put_be32(tail, crc);
  os.write(reinterpret_cast<const char*>(tail.data()), 4);
}

}  // namespace

void write_png_rgb(const std::filesystem::path& path, int width, int height,
                   const std::vector<unsigned char>& rgb) {
  if (rgb.size() != static_cast<std::size_t>(width) * height * 3)
    throw std::invalid_argument("write_png_rgb: buffer size mismatch");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());

  static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  os.write(reinterpret_cast<const char*>(sig), 8);

  std::vector<unsigned char> ihdr;
  put_be32(ihdr, static_cast<std::uint32_t>(width));
  put_be32(ihdr, static_cast<std::uint32_t>(height));
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(2);   // color type: truecolor
  ihdr.push_back(0);   // compression
  ihdr.push_back(0);   // filter
  ihdr.push_back(0);   // interlace
  write_chunk(os, "IHDR", ihdr);

  // raw scanlines with filter byte 0
  std::vector<unsigned char> raw;
  raw.reserve(static_cast<std::size_t>(height) * (1 + 3 * width));
  for (int r = 0; r < height; ++r) {
    raw.push_back(0);
    raw.insert(raw.end(), rgb.begin() + static_cast<std::size_t>(r) * width * 3,
               rgb.begin() + static_cast<std::size_t>(r + 1) * width * 3);
  }
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<unsigned char> comp(bound);
  if (compress2(comp.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
    throw std::runtime_error("png compression failed");
  comp.resize(bound);
  write_chunk(os, "IDAT", comp);
  write_chunk(os, "IEND", {});
}

namespace {
void hot_color(double t, unsigned char* rgb) {
  t = std::clamp(t, 0.0, 1.0);
  const double r = std::clamp(t * 3.0, 0.0, 1.0);
  const double g = std::clamp(t * 3.0 - 1.0, 0.0, 1.0);
  const double b = std::clamp(t * 3.0 - 2.0, 0.0, 1.0);
  rgb[0] = static_cast<unsigned char>(255.0 * r + 0.5);
  rgb[1] = static_cast<unsigned char>(255.0 * g + 0.5);
  rgb[2] = static_cast<unsigned char>(255.0 * b + 0.5);
}
}  // namespace

void write_field_png(const std::filesystem::path& path, const Field& f, double vmin, double vmax,
                     Colormap map) {
  if (f.rank() != 2) throw std::invalid_argument("write_field_png: 2D fields only");
  const int h = f.dim(0), w = f.dim(1);
  std::vector<unsigned char> rgb(static_cast<std::size_t>(w) * h * 3);
  const double span = vmax > vmin ? vmax - vmin : 1.0;
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      const double t = std::clamp((f.at(i, j) - vmin) / span, 0.0, 1.0);
      unsigned char* px = &rgb[(static_cast<std::size_t>(i) * w + j) * 3];
      if (map == Colormap::gray) {
        px[0] = px[1] = px[2] = static_cast<unsigned char>(255.0 * t + 0.5);
      } else {
        hot_color(t, px);
      }
    }
  write_png_rgb(path, w, h, rgb);
}

}  // namespace patmg
