#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

namespace tiered {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 8-bit grayscale image, row-major.
struct GrayImage {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int r, int k) const { return pixels[static_cast<std::size_t>(r) * cols + k]; }
  std::uint8_t& at(int r, int k) { return pixels[static_cast<std::size_t>(r) * cols + k]; }
};

// PGM (P5 binary or P2 ASCII, maxval <= 255). Values are rescaled to 0..255
// when maxval < 255.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

// Grayscale PNG; colour PNGs are converted to luminance.
GrayImage read_png(const std::filesystem::path& path);

// Dispatches on the file signature (P2/P5 or PNG).
GrayImage read_image(const std::filesystem::path& path);

// Real-valued matrix: either an image (values 0..255) or a whitespace
// separated text file whose first line is "rows cols"; "inf" is accepted.
struct CostMap {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;
};
CostMap read_cost_map(const std::filesystem::path& path);

}  // namespace tiered
