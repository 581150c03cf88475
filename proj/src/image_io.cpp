#include "tiered/image_io.hpp"

#include <png.h>

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

namespace tiered {

namespace {

std::string where(const std::filesystem::path& path) { return path.string() + ": "; }

void png_error_to_jump(png_structp png, png_const_charp message) {
  auto* text = static_cast<std::string*>(png_get_error_ptr(png));
  if (text) *text = message;
  png_longjmp(png, 1);
}

void png_ignore_warning(png_structp, png_const_charp) {}

// Next whitespace-separated header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string token;
  char c = 0;
  while (in.get(c)) {
    if (c == '#') {
      std::string rest;
      std::getline(in, rest);
      if (!token.empty()) break;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(c);
  }
  return token;
}

int header_int(std::istream& in, const std::filesystem::path& path, const char* what) {
  const std::string token = header_token(in);
  try {
    std::size_t used = 0;
    const int v = std::stoi(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw IoError(where(path) + "bad PGM " + what + " '" + token + "'");
  }
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(where(path) + "cannot open");
  const std::string magic = header_token(in);
  if (magic != "P5" && magic != "P2") throw IoError(where(path) + "not a PGM file (magic '" + magic + "')");
  GrayImage img;
  img.cols = header_int(in, path, "width");
  img.rows = header_int(in, path, "height");
  const int maxval = header_int(in, path, "maxval");
  if (img.cols < 1 || img.rows < 1) throw IoError(where(path) + "empty image");
  if (maxval < 1 || maxval > 255) throw IoError(where(path) + "only 8-bit PGM is supported");
  img.pixels.resize(static_cast<std::size_t>(img.rows) * img.cols);

  if (magic == "P5") {
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
      throw IoError(where(path) + "truncated pixel data");
    }
  } else {
    for (auto& px : img.pixels) {
      int v = 0;
      if (!(in >> v) || v < 0 || v > maxval) throw IoError(where(path) + "bad ASCII pixel value");
      px = static_cast<std::uint8_t>(v);
    }
  }
  if (maxval != 255) {
    for (auto& px : img.pixels) px = static_cast<std::uint8_t>(std::lround(px * 255.0 / maxval));
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(where(path) + "cannot open for writing");
  out << "P5\n" << image.cols << ' ' << image.rows << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw IoError(where(path) + "write failed");
}

GrayImage read_png(const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(std::fopen(path.c_str(), "rb"), &std::fclose);
  if (!file) throw IoError(where(path) + "cannot open");

  std::string png_message;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &png_message, &png_error_to_jump, &png_ignore_warning);
  if (!png) throw IoError(where(path) + "libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError(where(path) + "libpng initialisation failed");
  }

  GrayImage img;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(where(path) + "invalid PNG data (" + png_message + ")");
  }
  png_init_io(png, file.get());
  png_read_info(png, info);

  const png_byte color = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA || color == PNG_COLOR_TYPE_PALETTE) {
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  }
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  img.cols = static_cast<int>(png_get_image_width(png, info));
  img.rows = static_cast<int>(png_get_image_height(png, info));
  if (png_get_rowbytes(png, info) != static_cast<std::size_t>(img.cols)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(where(path) + "unsupported PNG layout");
  }
  img.pixels.resize(static_cast<std::size_t>(img.rows) * img.cols);
  rows.resize(static_cast<std::size_t>(img.rows));
  for (int r = 0; r < img.rows; ++r) rows[r] = img.pixels.data() + static_cast<std::size_t>(r) * img.cols;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

GrayImage read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(where(path) + "cannot open");
  std::array<unsigned char, 8> sig{};
  in.read(reinterpret_cast<char*>(sig.data()), sig.size());
  if (in.gcount() >= 2 && sig[0] == 'P' && (sig[1] == '5' || sig[1] == '2')) return read_pgm(path);
  if (in.gcount() == 8 && png_sig_cmp(sig.data(), 0, 8) == 0) return read_png(path);
  throw IoError(where(path) + "unrecognised image format (expected PGM or PNG)");
}

CostMap read_cost_map(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  CostMap map;
  if (ext == ".txt" || ext == ".csv") {
    std::ifstream in(path);
    if (!in) throw IoError(where(path) + "cannot open");
    if (!(in >> map.rows >> map.cols) || map.rows < 1 || map.cols < 1) {
      throw IoError(where(path) + "expected 'rows cols' header");
    }
    map.values.reserve(static_cast<std::size_t>(map.rows) * map.cols);
    std::string token;
    while (in >> token) {
      for (char& c : token)
        if (c == ',') c = ' ';
      std::istringstream parts(token);
      std::string part;
      while (parts >> part) {
        if (part == "inf" || part == "+inf" || part == "Inf") {
          map.values.push_back(HUGE_VAL);
          continue;
        }
        try {
          map.values.push_back(std::stod(part));
        } catch (const std::exception&) {
          throw IoError(where(path) + "bad number '" + part + "'");
        }
      }
    }
    if (map.values.size() != static_cast<std::size_t>(map.rows) * map.cols) {
      throw IoError(where(path) + "expected " + std::to_string(map.rows * map.cols) + " values, got " +
                    std::to_string(map.values.size()));
    }
    return map;
  }
  const GrayImage img = read_image(path);
  map.rows = img.rows;
  map.cols = img.cols;
  map.values.assign(img.pixels.begin(), img.pixels.end());
  return map;
}

}  // namespace tiered
