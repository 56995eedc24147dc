#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "schurmark/matrix.hpp"

namespace schurmark {

/// 8-bit grayscale raster, row-major.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(Index width, Index height, std::uint8_t fill = 0);
  GrayImage(Index width, Index height, std::vector<std::uint8_t> pixels);

  Index width() const noexcept { return width_; }
  Index height() const noexcept { return height_; }
  bool empty() const noexcept { return pixels_.empty(); }
  bool is_square() const noexcept { return width_ == height_; }

  std::uint8_t& at(Index x, Index y) { return pixels_[static_cast<std::size_t>(y * width_ + x)]; }
  std::uint8_t at(Index x, Index y) const {
    return pixels_[static_cast<std::size_t>(y * width_ + x)];
  }

  std::span<std::uint8_t> pixels() noexcept { return pixels_; }
  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

  /// "WxH", used in diagnostics.
  std::string dims() const;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  Index width_ = 0;
  Index height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Parses binary (P5) or ASCII (P2) PGM with maxval 255. Comment lines are
/// allowed in the header. Throws ParseError with the offending byte offset.
GrayImage read_pgm(std::span<const std::byte> bytes);
GrayImage read_pgm(std::string_view bytes);

/// Like read_pgm but also accepts color P3/P6, reduced to Rec. 601 luma.
GrayImage read_pnm_as_gray(std::span<const std::byte> bytes);

/// Serializes as binary P5.
std::vector<std::byte> write_pgm(const GrayImage& img);

GrayImage load_pgm(const std::filesystem::path& path);
void save_pgm(const std::filesystem::path& path, const GrayImage& img);

/// Pixel v -> float v; row index is y, column index is x.
Matrix to_float(const GrayImage& img);

/// Clamps to [0, 255] then rounds half away from zero.
GrayImage from_float(const Matrix& m);

/// Rec. 601 luma, for tools that ingest color rasters.
std::uint8_t luma601(std::uint8_t r, std::uint8_t g, std::uint8_t b);

std::vector<std::byte> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes);

}  // namespace schurmark
