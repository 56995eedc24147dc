#include "schurmark/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace schurmark {

GrayImage::GrayImage(Index width, Index height, std::uint8_t fill)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw DimensionError("GrayImage: dimensions must be positive, got " + std::to_string(width) +
                         "x" + std::to_string(height));
  }
  pixels_.assign(static_cast<std::size_t>(width * height), fill);
}

GrayImage::GrayImage(Index width, Index height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0) {
    throw DimensionError("GrayImage: dimensions must be positive, got " + std::to_string(width) +
                         "x" + std::to_string(height));
  }
  if (pixels_.size() != static_cast<std::size_t>(width * height)) {
    throw DimensionError("GrayImage: pixel count " + std::to_string(pixels_.size()) +
                         " does not match " + std::to_string(width) + "x" +
                         std::to_string(height));
  }
}

std::string GrayImage::dims() const {
  return std::to_string(width_) + "x" + std::to_string(height_);
}

namespace {

class PnmCursor {
 public:
  explicit PnmCursor(std::span<const std::byte> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  int peek() const { return at_end() ? -1 : static_cast<unsigned char>(bytes_[pos_]); }
  int get() { return at_end() ? -1 : static_cast<unsigned char>(bytes_[pos_++]); }

  static bool is_space(int c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  }

  void skip_space_and_comments() {
    while (!at_end()) {
      const int c = peek();
      if (is_space(c)) {
        ++pos_;
      } else if (c == '#') {
        while (!at_end() && peek() != '\n' && peek() != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    long value = 0;
    while (!at_end() && peek() >= '0' && peek() <= '9') {
      value = value * 10 + (get() - '0');
      if (value > 1'000'000'000L) throw ParseError(std::string("PGM: ") + what + " too large", start);
    }
    if (pos_ == start) {
      throw ParseError(std::string("PGM: expected ") + what, start);
    }
    return value;
  }

  std::span<const std::byte> take(std::size_t count) {
    auto out = bytes_.subspan(pos_, count);
    pos_ += count;
    return out;
  }

 private:
  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

struct PnmHeader {
  char kind;  // '2', '3', '5' or '6'
  Index width;
  Index height;
};

PnmHeader parse_header(PnmCursor& cur, std::string_view accepted) {
  if (cur.get() != 'P') throw ParseError("PGM: missing 'P' magic", 0);
  const int kind = cur.get();
  if (kind < 0 || accepted.find(static_cast<char>(kind)) == std::string_view::npos) {
    throw ParseError("PGM: unsupported format P" + std::string(1, static_cast<char>(kind)), 1);
  }
  cur.skip_space_and_comments();
  const std::size_t dims_at = cur.offset();
  const long width = cur.read_uint("width");
  const long height = cur.read_uint("height");
  if (width <= 0 || height <= 0) {
    throw ParseError("PGM: zero image dimension " + std::to_string(width) + "x" +
                         std::to_string(height),
                     dims_at);
  }
  cur.skip_space_and_comments();
  const std::size_t maxval_at = cur.offset();
  const long maxval = cur.read_uint("maxval");
  if (maxval != 255) {
    throw ParseError("PGM: maxval must be 255, got " + std::to_string(maxval), maxval_at);
  }
  return {static_cast<char>(kind), width, height};
}

std::vector<std::uint8_t> read_raster(PnmCursor& cur, const PnmHeader& h, int channels) {
  const std::size_t count = static_cast<std::size_t>(h.width * h.height * channels);
  std::vector<std::uint8_t> samples(count);
  if (h.kind == '5' || h.kind == '6') {
    // exactly one whitespace byte separates maxval from the binary payload
    if (!PnmCursor::is_space(cur.get())) {
      throw ParseError("PGM: expected whitespace before raster", cur.offset() - 1);
    }
    if (cur.remaining() < count) {
      throw ParseError("PGM: truncated payload, expected " + std::to_string(count) +
                           " bytes, have " + std::to_string(cur.remaining()),
                       cur.offset() + cur.remaining());
    }
    auto raw = cur.take(count);
    std::memcpy(samples.data(), raw.data(), count);
  } else {
    for (auto& s : samples) {
      cur.skip_space_and_comments();
      if (cur.at_end()) throw ParseError("PGM: truncated ASCII payload", cur.offset());
      const std::size_t at = cur.offset();
      const long v = cur.read_uint("sample");
      if (v > 255) throw ParseError("PGM: sample exceeds maxval", at);
      s = static_cast<std::uint8_t>(v);
    }
  }
  return samples;
}

}  // namespace

GrayImage read_pgm(std::span<const std::byte> bytes) {
  PnmCursor cur(bytes);
  const PnmHeader h = parse_header(cur, "25");
  return GrayImage(h.width, h.height, read_raster(cur, h, 1));
}

GrayImage read_pgm(std::string_view bytes) {
  return read_pgm(std::as_bytes(std::span(bytes.data(), bytes.size())));
}

std::vector<std::byte> write_pgm(const GrayImage& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::byte> out;
  out.reserve(header.size() + img.pixels().size());
  for (char c : header) out.push_back(static_cast<std::byte>(c));
  for (std::uint8_t p : img.pixels()) out.push_back(static_cast<std::byte>(p));
  return out;
}

std::vector<std::byte> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> out(raw.size());
  std::memcpy(out.data(), raw.data(), raw.size());
  return out;
}

void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for " + path.string());
}

GrayImage load_pgm(const std::filesystem::path& path) { return read_pgm(read_file(path)); }

void save_pgm(const std::filesystem::path& path, const GrayImage& img) {
  write_file(path, write_pgm(img));
}

GrayImage read_pnm_as_gray(std::span<const std::byte> bytes) {
  PnmCursor cur(bytes);
  const PnmHeader h = parse_header(cur, "2356");
  if (h.kind == '2' || h.kind == '5') return GrayImage(h.width, h.height, read_raster(cur, h, 1));
  const auto rgb = read_raster(cur, h, 3);
  std::vector<std::uint8_t> gray(rgb.size() / 3);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    gray[i] = luma601(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]);
  }
  return GrayImage(h.width, h.height, std::move(gray));
}

Matrix to_float(const GrayImage& img) {
  Matrix m(img.height(), img.width());
  for (Index y = 0; y < img.height(); ++y) {
    for (Index x = 0; x < img.width(); ++x) m(y, x) = img.at(x, y);
  }
  return m;
}

GrayImage from_float(const Matrix& m) {
  require_finite(m, "from_float");
  GrayImage img(m.cols(), m.rows());
  for (Index y = 0; y < m.rows(); ++y) {
    for (Index x = 0; x < m.cols(); ++x) {
      const double v = std::clamp(m(y, x), 0.0, 255.0);
      img.at(x, y) = static_cast<std::uint8_t>(std::round(v));
    }
  }
  return img;
}

std::uint8_t luma601(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  return static_cast<std::uint8_t>(std::round(std::clamp(y, 0.0, 255.0)));
}

}  // namespace schurmark
