#include "camhealth/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "camhealth/error.hpp"

namespace camhealth {
namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Skips whitespace and '#' comments in a PNM header.
void skip_pnm_space(const std::string& buf, std::size_t& pos) {
  while (pos < buf.size()) {
    if (std::isspace(static_cast<unsigned char>(buf[pos]))) {
      ++pos;
    } else if (buf[pos] == '#') {
      while (pos < buf.size() && buf[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
}

long read_pnm_int(const std::string& buf, std::size_t& pos, const std::string& name) {
  skip_pnm_space(buf, pos);
  std::size_t start = pos;
  while (pos < buf.size() && std::isdigit(static_cast<unsigned char>(buf[pos]))) ++pos;
  if (start == pos) throw DataError(name + ": malformed PGM header");
  return std::stol(buf.substr(start, pos - start));
}

GrayImage load_pgm(const std::filesystem::path& path) {
  const std::string buf = read_all(path);
  if (buf.size() < 2 || buf[0] != 'P' || buf[1] != '5') {
    throw DataError(path.string() + ": not a binary PGM (P5)");
  }
  std::size_t pos = 2;
  const long w = read_pnm_int(buf, pos, path.string());
  const long h = read_pnm_int(buf, pos, path.string());
  const long maxval = read_pnm_int(buf, pos, path.string());
  if (w <= 0 || h <= 0) throw DataError(path.string() + ": zero-sized image");
  if (maxval <= 0 || maxval > 65535) throw DataError(path.string() + ": bad maxval");
  ++pos;  // single whitespace byte before raster
  const std::size_t bytes_per = maxval > 255 ? 2 : 1;
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (buf.size() < pos + n * bytes_per) throw DataError(path.string() + ": truncated raster");

  std::vector<double> data(n);
  const auto* raw = reinterpret_cast<const unsigned char*>(buf.data() + pos);
  for (std::size_t i = 0; i < n; ++i) {
    double v = bytes_per == 2 ? static_cast<double>((raw[2 * i] << 8) | raw[2 * i + 1])
                              : static_cast<double>(raw[i]);
    data[i] = maxval == 255 ? v : v * 255.0 / static_cast<double>(maxval);
  }
  return GrayImage(static_cast<int>(w), static_cast<int>(h), std::move(data));
}

GrayImage load_png(const std::filesystem::path& path) {
  const std::string buf = read_all(path);
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, buf.data(), buf.size())) {
    throw DataError(path.string() + ": " + image.message);
  }
  if (image.width == 0 || image.height == 0) {
    png_image_free(&image);
    throw DataError(path.string() + ": zero-sized image");
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<png_byte> raster(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raster.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw DataError(path.string() + ": " + msg);
  }
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  std::vector<double> data(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = color ? bt601_luma(raster[3 * i], raster[3 * i + 1], raster[3 * i + 2])
                    : static_cast<double>(raster[i]);
  }
  return GrayImage(w, h, std::move(data));
}

std::vector<unsigned char> to_bytes(const GrayImage& img) {
  const GrayImage q = clamp_quantize(img);
  std::vector<unsigned char> bytes(q.size());
  auto px = q.pixels();
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = static_cast<unsigned char>(px[i]);
  return bytes;
}

}  // namespace

double bt601_luma(double r, double g, double b) {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

bool is_supported_image(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  return ext == ".pgm" || ext == ".png";
}

GrayImage load_gray(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw DataError("no such file: " + path.string());
  const std::string ext = lower_extension(path);
  if (ext == ".pgm") return load_pgm(path);
  if (ext == ".png") return load_png(path);
  throw DataError(path.string() + ": unsupported format (expected .pgm or .png)");
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw DataError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::vector<unsigned char> bytes = to_bytes(img);
  std::string out = "P5\n" + std::to_string(img.width()) + " " +
                    std::to_string(img.height()) + "\n255\n";
  out.append(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  write_file_atomic(path, out);
}

void save_png(const GrayImage& img, const std::filesystem::path& path) {
  std::vector<unsigned char> bytes = to_bytes(img);
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, bytes.data(), 0, nullptr)) {
    throw DataError(path.string() + ": " + image.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, bytes.data(), 0, nullptr)) {
    throw DataError(path.string() + ": " + image.message);
  }
  out.resize(size);
  write_file_atomic(path, out);
}

void save_gray(const GrayImage& img, const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".pgm") return save_pgm(img, path);
  if (ext == ".png") return save_png(img, path);
  throw InvalidArgument(path.string() + ": unsupported output format");
}

}  // namespace camhealth
