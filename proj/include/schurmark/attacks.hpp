#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "schurmark/image.hpp"

namespace schurmark {

enum class AttackKind {
  jpeg,
  gaussian_noise,
  salt_pepper,
  median,
  histeq,
  crop_border,
  rotate,
  color_reduce,
};

std::string_view to_string(AttackKind kind);
std::optional<AttackKind> parse_attack_kind(std::string_view name);

inline constexpr std::uint64_t kDefaultSeed = 42;

/// One attack and its knobs. Parameter names per kind:
///   jpeg: qf (1..100)            gaussian_noise: variance (>= 0, [0,1] pixel scale)
///   salt_pepper: density (0..1)  median: window (odd, >= 3)
///   histeq: -                    crop_border: border (pixels)
///   rotate: degrees              color_reduce: levels (2..256)
struct AttackSpec {
  AttackKind kind = AttackKind::jpeg;
  std::map<std::string, double> params;
  std::uint64_t seed = kDefaultSeed;

  /// Fills missing parameters with the benchmark defaults and range-checks
  /// them. Unknown parameter names are rejected. Throws ParameterError.
  AttackSpec resolved() const;

  /// Short label such as "jpeg(qf=10)".
  std::string label() const;

  friend bool operator==(const AttackSpec&, const AttackSpec&) = default;
};

void to_json(nlohmann::json& j, const AttackSpec& spec);
void from_json(const nlohmann::json& j, AttackSpec& spec);

/// The eight-attack suite with the benchmark parameters (JPEG QF 10, Gaussian
/// variance 0.03, salt & pepper density 0.03, 9x9 median, 8-pixel crop,
/// 1.5 degree rotation, histogram equalization, 64 gray levels).
std::vector<AttackSpec> default_attack_suite(std::uint64_t seed = kDefaultSeed);

GrayImage attack_jpeg(const GrayImage& img, int qf);
GrayImage attack_gaussian(const GrayImage& img, double variance, std::uint64_t seed);
GrayImage attack_salt_pepper(const GrayImage& img, double density, std::uint64_t seed);
GrayImage attack_median(const GrayImage& img, int window);
GrayImage attack_histeq(const GrayImage& img);
GrayImage attack_crop_border(const GrayImage& img, int border);
GrayImage attack_rotate(const GrayImage& img, double degrees);
GrayImage attack_color_reduce(const GrayImage& img, int levels);

GrayImage apply_attack(const GrayImage& img, const AttackSpec& spec);

/// IJG-scaled luminance quantization table for the given quality (row-major 8x8).
std::array<int, 64> jpeg_quant_table(int qf);

/// True for rotations beyond +/-45 degrees, outside the tested envelope.
bool outside_tested_envelope(const AttackSpec& spec);

}  // namespace schurmark
