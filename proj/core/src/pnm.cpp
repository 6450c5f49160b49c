#include "cellseg/pnm.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "cellseg/errors.hpp"

namespace cellseg {

namespace {

void skip_space_and_comments(std::istream& in) {
  while (true) {
    const int c = in.peek();
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_number(std::istream& in, const char* what) {
  skip_space_and_comments(in);
  int v = 0;
  if (!(in >> v) || v <= 0) throw IoError(std::string("malformed PNM header: bad ") + what);
  return v;
}

std::ofstream open_for_writing(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

}  // namespace

RasterImage read_pnm(std::istream& in) {
  char magic[2] = {};
  if (!in.read(magic, 2) || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6')) {
    throw IoError("not a binary PGM/PPM file (expected P5 or P6)");
  }
  const int channels = magic[1] == '5' ? 1 : 3;
  const int width = read_header_number(in, "width");
  const int height = read_header_number(in, "height");
  const int maxval = read_header_number(in, "maxval");
  if (maxval != 255) throw IoError("only 8-bit PNM files are supported (maxval 255)");
  const int sep = in.get();
  if (sep != ' ' && sep != '\t' && sep != '\r' && sep != '\n') throw IoError("malformed PNM header");
  if (static_cast<long long>(width) * height > (1LL << 28)) throw IoError("PNM image too large");

  const std::size_t plane = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::string bytes(plane * static_cast<std::size_t>(channels), '\0');
  if (!in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
    throw IoError("truncated PNM pixel data");
  }
  RasterImage img(width, height, 3);
  for (std::size_t i = 0; i < plane; ++i) {
    for (int c = 0; c < 3; ++c) {
      const int src = channels == 1 ? 0 : c;
      const auto v = static_cast<unsigned char>(bytes[i * static_cast<std::size_t>(channels) + static_cast<std::size_t>(src)]);
      img.plane(c)[i] = from_level(v);
    }
  }
  return img;
}

RasterImage read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  try {
    return read_pnm(in);
  } catch (const IoError& e) {
    throw IoError("'" + path.string() + "': " + e.what());
  }
}

void write_pnm(std::ostream& out, const RasterImage& img) {
  if (img.channels() != 1 && img.channels() != 3) throw InvalidArgument("write_pnm: 1 or 3 channels required");
  out << (img.channels() == 1 ? "P5" : "P6") << '\n' << img.width() << ' ' << img.height() << "\n255\n";
  std::string bytes(img.plane_size() * static_cast<std::size_t>(img.channels()), '\0');
  for (std::size_t i = 0; i < img.plane_size(); ++i) {
    for (int c = 0; c < img.channels(); ++c) {
      bytes[i * static_cast<std::size_t>(img.channels()) + static_cast<std::size_t>(c)] =
          static_cast<char>(quantize_level(img.plane(c)[i]));
    }
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void write_pnm(const std::filesystem::path& path, const RasterImage& img) {
  auto out = open_for_writing(path);
  write_pnm(out, img);
  finish(out, path);
}

void write_pnm(const std::filesystem::path& path, const BinaryMask& mask) {
  RasterImage img(mask.width(), mask.height(), 1);
  for (std::size_t i = 0; i < mask.size(); ++i) img.plane(0)[i] = mask[i] ? kIntensityMax : 0;
  write_pnm(path, img);
}

void write_pnm(const std::filesystem::path& path, const LabelMap& labels) {
  auto out = open_for_writing(path);
  out << "P5\n" << labels.width() << ' ' << labels.height() << "\n65535\n";
  std::string bytes(labels.size() * 2, '\0');
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Label l = labels[i];
    if (l < 0 || l > 65535) throw IoError("label does not fit in a 16-bit PGM");
    bytes[2 * i] = static_cast<char>((l >> 8) & 0xff);
    bytes[2 * i + 1] = static_cast<char>(l & 0xff);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  finish(out, path);
}

}  // namespace cellseg
