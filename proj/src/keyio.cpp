#include "schurmark/keyio.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cstring>
#include <string_view>

#include <json.hpp>

namespace schurmark {

namespace {

constexpr std::string_view kMagic = "SWMK";
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8 + 8;

template <typename T>
void put_le(std::vector<std::byte>& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<std::byte, sizeof(T)> raw;
  std::memcpy(raw.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
  out.insert(out.end(), raw.begin(), raw.end());
}

template <typename T>
T get_le(std::span<const std::byte> bytes, std::size_t offset) {
  std::array<std::byte, sizeof(T)> raw;
  std::memcpy(raw.data(), bytes.data() + offset, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
  T value;
  std::memcpy(&value, raw.data(), sizeof(T));
  return value;
}

void put_matrix(std::vector<std::byte>& out, const Matrix& m) {
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) put_le<double>(out, m(r, c));
  }
}

Matrix get_matrix(std::span<const std::byte> bytes, std::size_t offset, Index n) {
  Matrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < n; ++c) {
      m(r, c) = get_le<double>(bytes, offset);
      offset += 8;
    }
  }
  return m;
}

std::string base64_encode(std::span<const std::byte> raw) {
  std::string out(4 * ((raw.size() + 2) / 3), '\0');
  const int written =
      EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                      reinterpret_cast<const unsigned char*>(raw.data()), static_cast<int>(raw.size()));
  out.resize(static_cast<std::size_t>(written));
  return out;
}

std::vector<std::byte> base64_decode(std::string_view text, const char* field) {
  if (text.size() % 4 != 0) {
    throw ParseError(std::string("key JSON: ") + field + " is not valid base64", 0);
  }
  std::vector<std::byte> out(text.size() / 4 * 3);
  const int written =
      EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                      reinterpret_cast<const unsigned char*>(text.data()), static_cast<int>(text.size()));
  if (written < 0) throw ParseError(std::string("key JSON: ") + field + " is not valid base64", 0);
  // EVP_DecodeBlock keeps the zero bytes that stand in for '=' padding.
  std::size_t padding = 0;
  if (!text.empty() && text.back() == '=') ++padding;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++padding;
  out.resize(static_cast<std::size_t>(written) - padding);
  return out;
}

WatermarkKey finish(WatermarkKey key, std::size_t offset) {
  try {
    key.validate();
  } catch (const Error& e) {
    throw ParseError(std::string("key: ") + e.what(), offset);
  }
  return key;
}

WatermarkKey read_key_binary(std::span<const std::byte> bytes) {
  if (bytes.size() < 4 ||
      std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw ParseError("key: bad magic, expected \"SWMK\"", 0);
  }
  if (bytes.size() < kHeaderBytes) {
    throw ParseError("key: truncated header, expected " + std::to_string(kHeaderBytes) +
                         " bytes",
                     bytes.size());
  }
  const auto version = get_le<std::uint32_t>(bytes, 4);
  if (version != kKeyFormatVersion) {
    throw ParseError("key: unsupported format version " + std::to_string(version), 4);
  }
  const auto n = get_le<std::uint32_t>(bytes, 8);
  if (n == 0) throw ParseError("key: zero side length", 8);
  WatermarkKey key;
  key.n = n;
  key.alpha.base = get_le<double>(bytes, 12);
  key.alpha.dc = get_le<double>(bytes, 20);

  const std::size_t matrix_bytes = std::size_t(n) * n * 8;
  const std::size_t expected = kHeaderBytes + 2 * matrix_bytes;
  if (bytes.size() < expected) {
    throw ParseError("key: truncated payload, expected " + std::to_string(expected) + " bytes",
                     bytes.size());
  }
  if (bytes.size() > expected) {
    throw ParseError("key: trailing bytes after payload", expected);
  }
  key.u_w = get_matrix(bytes, kHeaderBytes, n);
  key.i_dct = get_matrix(bytes, kHeaderBytes + matrix_bytes, n);
  return finish(std::move(key), kHeaderBytes);
}

Matrix matrix_from_b64(const nlohmann::json& doc, const char* field, Index n) {
  const auto raw = base64_decode(doc.at(field).get<std::string>(), field);
  const std::size_t expected = std::size_t(n) * std::size_t(n) * 8;
  if (raw.size() != expected) {
    throw ParseError(std::string("key JSON: ") + field + " holds " + std::to_string(raw.size()) +
                         " bytes, expected " + std::to_string(expected),
                     0);
  }
  return get_matrix(raw, 0, n);
}

WatermarkKey read_key_json(std::span<const std::byte> bytes) {
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("key JSON: ") + e.what(), e.byte);
  }
  try {
    if (doc.value("format", std::string(kMagic)) != kMagic) {
      throw ParseError("key JSON: bad format tag", 0);
    }
    const auto version = doc.at("version").get<std::uint32_t>();
    if (version != kKeyFormatVersion) {
      throw ParseError("key JSON: unsupported format version " + std::to_string(version), 0);
    }
    WatermarkKey key;
    key.n = doc.at("n").get<Index>();
    if (key.n <= 0) throw ParseError("key JSON: n must be positive", 0);
    key.alpha.base = doc.at("alpha").at("base").get<double>();
    key.alpha.dc = doc.at("alpha").at("dc").get<double>();
    key.u_w = matrix_from_b64(doc, "u_w", key.n);
    key.i_dct = matrix_from_b64(doc, "i_dct", key.n);
    return finish(std::move(key), 0);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("key JSON: ") + e.what(), 0);
  }
}

}  // namespace

std::vector<std::byte> write_key_binary(const WatermarkKey& key) {
  key.validate();
  std::vector<std::byte> out;
  out.reserve(kHeaderBytes + 2 * std::size_t(key.n) * key.n * 8);
  for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
  put_le<std::uint32_t>(out, kKeyFormatVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(key.n));
  put_le<double>(out, key.alpha.base);
  put_le<double>(out, key.alpha.dc);
  put_matrix(out, key.u_w);
  put_matrix(out, key.i_dct);
  return out;
}

std::string write_key_json(const WatermarkKey& key) {
  key.validate();
  std::vector<std::byte> u;
  std::vector<std::byte> i;
  put_matrix(u, key.u_w);
  put_matrix(i, key.i_dct);
  const nlohmann::json doc = {
      {"format", kMagic},
      {"version", kKeyFormatVersion},
      {"n", key.n},
      {"alpha", {{"base", key.alpha.base}, {"dc", key.alpha.dc}}},
      {"u_w", base64_encode(u)},
      {"i_dct", base64_encode(i)},
  };
  return doc.dump(2) + "\n";
}

WatermarkKey read_key(std::span<const std::byte> bytes) {
  std::size_t first = 0;
  while (first < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[first]))) ++first;
  if (first < bytes.size() && static_cast<char>(bytes[first]) == '{') return read_key_json(bytes);
  return read_key_binary(bytes);
}

WatermarkKey load_key(const std::filesystem::path& path) { return read_key(read_file(path)); }

void save_key(const std::filesystem::path& path, const WatermarkKey& key) {
  if (path.extension() == ".json") {
    const std::string text = write_key_json(key);
    write_file(path, std::as_bytes(std::span(text.data(), text.size())));
  } else {
    write_file(path, write_key_binary(key));
  }
}

}  // namespace schurmark
