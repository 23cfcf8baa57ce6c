#include "giv/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "giv/error.hpp"
#include "giv/serialize.hpp"

namespace giv {

namespace {

constexpr char kMagic[8] = {'G', 'I', 'V', 'I', 'M', 'G', '1', '\n'};

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw ConfigError("truncated image file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void write_image(const std::string& path, const GreyImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write image file: " + path);
  const Json header = {{"format", "giv-grey-image"},
                       {"version", 1},
                       {"lattice", to_json(image.lattice)},
                       {"window", to_json(image.window)},
                       {"index_box", to_json(image.box)},
                       {"provenance", image.provenance}};
  const std::string text = header.dump();
  out.write(kMagic, 8);
  put_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (double v : image.values) put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw ConfigError("failed writing image file: " + path);
}

GreyImage read_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open image file: " + path);
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw ConfigError("not an image file: " + path);
  const std::uint64_t n = get_u64(in);
  std::string text(n, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(n))) throw ConfigError("truncated image header");
  const Json header = Json::parse(text);
  GreyImage img;
  img.lattice = lattice_from_json(header.at("lattice"));
  img.window = window_from_json(header.at("window"), img.lattice.dim());
  img.box = index_box_from_json(header.at("index_box"));
  img.provenance = header.value("provenance", Json::object());
  img.values.resize(img.box.size());
  for (double& v : img.values) v = std::bit_cast<double>(get_u64(in));
  return img;
}

void write_pgm(const std::string& path, const GreyImage& image) {
  const auto nx = image.box.count[0];
  const auto ny = image.box.count[1];
  const std::int64_t slice = image.box.dim == 3 ? image.box.count[2] / 2 : 0;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write pgm file: " + path);
  out << "P5\n" << nx << ' ' << ny << "\n255\n";
  for (std::int64_t row = ny - 1; row >= 0; --row) {
    for (std::int64_t col = 0; col < nx; ++col) {
      const std::array<std::int64_t, 3> k{image.box.lo[0] + col, image.box.lo[1] + row, image.box.lo[2] + slice};
      const double v = std::clamp(image.at(k), 0.0, 1.0);
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * v))));
    }
  }
}

}  // namespace giv
