#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "schurmark/watermark.hpp"

namespace schurmark {

/// Binary key layout (little-endian):
///   "SWMK" | u32 version = 1 | u32 n | f64 alpha.base | f64 alpha.dc |
///   n*n f64 u_w (row-major) | n*n f64 i_dct (row-major)
inline constexpr std::uint32_t kKeyFormatVersion = 1;

std::vector<std::byte> write_key_binary(const WatermarkKey& key);

/// JSON sidecar with the same fields; matrices are base64 of the
/// little-endian row-major f64 payload.
std::string write_key_json(const WatermarkKey& key);

/// Accepts either format (JSON is recognized by a leading '{'). Throws
/// ParseError with a byte offset on malformed input.
WatermarkKey read_key(std::span<const std::byte> bytes);

WatermarkKey load_key(const std::filesystem::path& path);

/// Writes JSON when the path ends in ".json", binary otherwise.
void save_key(const std::filesystem::path& path, const WatermarkKey& key);

}  // namespace schurmark
