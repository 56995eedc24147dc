#include <doctest.h>

#include <cstring>

#include <json.hpp>

#include "fixtures.hpp"
#include "schurmark/keyio.hpp"

using namespace schurmark;

namespace {

WatermarkKey sample_key(Index n = 8) {
  Rng rng(n);
  return embed(fixtures::random_image(rng, n, n), fixtures::random_image(rng, n, n), {0.3, 0.03}).key;
}

void check_same(const WatermarkKey& a, const WatermarkKey& b) {
  CHECK(a.n == b.n);
  CHECK(a.alpha == b.alpha);
  CHECK(a.u_w == b.u_w);
  CHECK(a.i_dct == b.i_dct);
}

std::size_t offset_of(std::span<const std::byte> bytes) {
  try {
    read_key(bytes);
  } catch (const ParseError& e) {
    return e.offset();
  }
  FAIL("expected ParseError");
  return 0;
}

}  // namespace

TEST_CASE("binary layout") {
  const WatermarkKey key = sample_key();
  const auto bytes = write_key_binary(key);
  CHECK(bytes.size() == 28 + 2 * 64 * 8);
  CHECK(std::memcmp(bytes.data(), "SWMK", 4) == 0);
  std::uint32_t version = 0;
  std::uint32_t n = 0;
  double base = 0;
  std::memcpy(&version, bytes.data() + 4, 4);
  std::memcpy(&n, bytes.data() + 8, 4);
  std::memcpy(&base, bytes.data() + 12, 8);
  CHECK(version == 1);
  CHECK(n == 8);
  CHECK(base == 0.3);
  double u01 = 0;
  std::memcpy(&u01, bytes.data() + 28 + 8, 8);
  CHECK(u01 == key.u_w(0, 1));  // row-major
}

TEST_CASE("binary and JSON roundtrips are exact") {
  const WatermarkKey key = sample_key(12);
  check_same(read_key(write_key_binary(key)), key);
  const std::string json = write_key_json(key);
  check_same(read_key(std::as_bytes(std::span(json.data(), json.size()))), key);
}

TEST_CASE("file helpers pick the format from the extension") {
  const auto dir = fixtures::scratch_dir("keyio");
  const WatermarkKey key = sample_key();
  save_key(dir / "k.bin", key);
  save_key(dir / "k.json", key);
  CHECK(static_cast<char>(read_file(dir / "k.json")[0]) == '{');
  check_same(load_key(dir / "k.bin"), key);
  check_same(load_key(dir / "k.json"), key);
}

TEST_CASE("malformed binary keys") {
  const auto good = write_key_binary(sample_key());
  SUBCASE("bad magic") {
    auto bytes = good;
    bytes[0] = std::byte{'X'};
    CHECK(offset_of(bytes) == 0);
  }
  SUBCASE("bad version") {
    auto bytes = good;
    bytes[4] = std::byte{2};
    CHECK(offset_of(bytes) == 4);
  }
  SUBCASE("truncated header") {
    CHECK(offset_of(std::span(good).first(10)) == 10);
  }
  SUBCASE("truncated payload") {
    CHECK(offset_of(std::span(good).first(100)) == 100);
  }
  SUBCASE("trailing bytes") {
    auto bytes = good;
    bytes.push_back(std::byte{0});
    CHECK(offset_of(bytes) == good.size());
  }
  SUBCASE("non-orthogonal u_w") {
    auto bytes = good;
    double v = 0;
    std::memcpy(&v, bytes.data() + 28, 8);
    v += 0.5;
    std::memcpy(bytes.data() + 28, &v, 8);
    CHECK_THROWS_AS(read_key(bytes), ParseError);
  }
}

TEST_CASE("malformed JSON keys") {
  const auto parse = [](const std::string& s) { return read_key(std::as_bytes(std::span(s.data(), s.size()))); };
  CHECK_THROWS_AS(parse("{\"format\": \"SWMK\""), ParseError);
  CHECK_THROWS_AS(parse("{\"format\": \"SWMK\", \"version\": 1}"), ParseError);
  CHECK_THROWS_AS(parse("{\"format\": \"OTHER\", \"version\": 1}"), ParseError);
  auto doc = nlohmann::json::parse(write_key_json(sample_key()));
  doc["version"] = 7;
  CHECK_THROWS_AS(parse(doc.dump()), ParseError);
  doc["version"] = 1;
  doc["u_w"] = "AAAA";
  CHECK_THROWS_AS(parse(doc.dump()), ParseError);
  doc["u_w"] = "not base64!";
  CHECK_THROWS_AS(parse(doc.dump()), ParseError);
}

TEST_CASE("writing an invalid key is refused") {
  WatermarkKey key = sample_key();
  key.alpha.base = 0;
  CHECK_THROWS_AS(write_key_binary(key), ParameterError);
}
