#include <doctest.h>

#include "embed_straightline.hpp"
#include "fixtures.hpp"
#include "schurmark/metrics.hpp"
#include "schurmark/synthetic.hpp"
#include "schurmark/watermark.hpp"

using namespace schurmark;
using fixtures::random_image;

TEST_CASE("gain matrix") {
  const Matrix g = gain_matrix(3, {0.5, 0.05});
  CHECK(g(0, 0) == 0.05);
  CHECK(g(0, 1) == 0.5);
  CHECK(g(2, 2) == 0.5);
}

TEST_CASE("alpha validation") {
  CHECK_NOTHROW(AlphaSchedule{}.validate());
  CHECK_THROWS_AS((AlphaSchedule{0.0, 0.03}.validate()), ParameterError);
  CHECK_THROWS_AS((AlphaSchedule{0.3, -1.0}.validate()), ParameterError);
  CHECK_THROWS_AS((AlphaSchedule{std::nan(""), 0.03}.validate()), ParameterError);
}

TEST_CASE("zero mark leaves the host unchanged") {
  Rng rng(1);
  const GrayImage host = random_image(rng, 32, 32);
  const EmbedResult r = embed(host, GrayImage(32, 32, 0));
  CHECK(r.watermarked == host);
  CHECK(std::isinf(psnr(host, r.watermarked)));
}

TEST_CASE("8x8 embed matches the straight-line double-sum pipeline byte for byte") {
  std::vector<std::uint8_t> mark_px(64);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) mark_px[std::size_t(r * 8 + c)] = std::uint8_t(r == c ? 200 : 10 + 7 * ((r + 2 * c) % 5));
  }
  const GrayImage mark(8, 8, mark_px);
  const GrayImage host(8, 8, 128);
  const AlphaSchedule alpha;
  const EmbedResult r = embed(host, mark, alpha);
  const auto factors = mark_factors(mark);
  const auto expected = oracle::embed_pixels(std::vector<std::uint8_t>(64, 128), 8, factors.t, alpha.base, alpha.dc);
  CHECK(std::vector<std::uint8_t>(r.watermarked.pixels().begin(), r.watermarked.pixels().end()) == expected);
  CHECK(r.watermarked != host);
}

TEST_CASE("key contents") {
  Rng rng(2);
  const GrayImage host = random_image(rng, 16, 16);
  const GrayImage mark = random_image(rng, 16, 16);
  const EmbedResult r = embed(host, mark, {0.4, 0.04});
  CHECK(r.key.n == 16);
  CHECK(r.key.alpha == AlphaSchedule{0.4, 0.04});
  CHECK(r.key.u_w == mark_factors(mark).u);
  CHECK((r.key.i_dct - dct2(to_float(host), DctPlan<double>(16))).cwiseAbs().maxCoeff() == 0.0);
  CHECK_NOTHROW(r.key.validate());
}

TEST_CASE("size and shape errors") {
  CHECK_THROWS_AS(embed(GrayImage(8, 8), GrayImage(8, 9)), DimensionError);
  CHECK_THROWS_AS(embed(GrayImage(8, 4), GrayImage(8, 4)), DimensionError);
  try {
    embed(GrayImage(16, 16), GrayImage(8, 8));
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("16x16") != std::string::npos);
    CHECK(msg.find("8x8") != std::string::npos);
  }
  Rng rng(3);
  const EmbedResult r = embed(random_image(rng, 8, 8), random_image(rng, 8, 8));
  CHECK_THROWS_AS(extract(GrayImage(16, 16), r.key), DimensionError);
}

TEST_CASE("key validation") {
  Rng rng(4);
  WatermarkKey key = embed(random_image(rng, 8, 8), random_image(rng, 8, 8)).key;
  WatermarkKey skewed = key;
  skewed.u_w(0, 0) += 1e-3;
  CHECK_THROWS_AS(skewed.validate(), ParameterError);
  WatermarkKey resized = key;
  resized.i_dct = Matrix::Zero(4, 4);
  CHECK_THROWS_AS(resized.validate(), DimensionError);
  WatermarkKey nan = key;
  nan.i_dct(1, 1) = std::nan("");
  CHECK_THROWS(nan.validate());
}

TEST_CASE("property: float pipeline recovers the mark") {
  Rng rng(5);
  for (const Index n : {8, 16, 64}) {
    for (int rep = 0; rep < 3; ++rep) {
      const Matrix host = to_float(random_image(rng, n, n));
      const GrayImage mark = random_image(rng, n, n);
      WatermarkKey key;
      const Matrix wm = embed_float(host, mark_factors(mark), {}, key);
      CAPTURE(n);
      CHECK((extract_float(wm, key) - to_float(mark)).cwiseAbs().maxCoeff() <= 1e-6);
    }
  }
}

TEST_CASE("property: the DCT residual is the gained triangular factor") {
  Rng rng(6);
  const Matrix host = to_float(random_image(rng, 32, 32));
  const GrayImage mark = random_image(rng, 32, 32);
  const auto factors = mark_factors(mark);
  const AlphaSchedule alpha{0.25, 0.02};
  WatermarkKey key;
  const Matrix wm = embed_float(host, factors, alpha, key);
  const Matrix residual = dct2(wm, DctPlan<double>(32)) - key.i_dct;
  CHECK((residual - gain_matrix(32, alpha).cwiseProduct(factors.t)).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("property: larger base gain means lower PSNR") {
  const GrayImage host = synthetic_host(0, 64, 0);
  const GrayImage mark = synthetic_mark(kDefaultMarkSeed, 64);
  double previous = std::numeric_limits<double>::infinity();
  for (const double base : {0.1, 0.3, 0.5, 1.0}) {
    const double p = psnr(host, embed(host, mark, {base, 0.03}).watermarked);
    CHECK(p < previous);
    previous = p;
  }
}

TEST_CASE("8-bit pipeline without attack") {
  const GrayImage host = synthetic_host(2, 128, 0);
  const GrayImage mark = synthetic_mark(kDefaultMarkSeed, 128);
  const EmbedResult r = embed(host, mark);
  CHECK(correlation(mark, extract(r.watermarked, r.key)) >= 0.99);
}

TEST_CASE("wrong keys do not reveal the mark") {
  const Index n = 64;
  const GrayImage host = synthetic_host(1, n, 0);
  const GrayImage mark = synthetic_mark(kDefaultMarkSeed, n);
  const EmbedResult r = embed(host, mark);
  for (std::uint64_t s = 0; s < 20; ++s) {
    WatermarkKey wrong = r.key;
    wrong.u_w = mark_factors(synthetic_mark(2000 + s, n)).u;
    CHECK(correlation(mark, extract(r.watermarked, wrong)) < 0.5);
  }
}

TEST_CASE("tiled embedding") {
  Rng rng(7);
  SUBCASE("single tile equals embed") {
    const GrayImage host = random_image(rng, 16, 16);
    const GrayImage mark = random_image(rng, 16, 16);
    const TiledEmbedResult t = embed_tiled(host, mark);
    CHECK(t.keys.size() == 1);
    CHECK(t.watermarked == embed(host, mark).watermarked);
  }
  SUBCASE("two tiles, one key each") {
    const GrayImage host = random_image(rng, 32, 16);  // width 32, height 16
    const GrayImage mark = synthetic_mark(3, 16);
    const TiledEmbedResult t = embed_tiled(host, mark);
    REQUIRE(t.keys.size() == 2);
    CHECK(t.tile == 16);
    CHECK(t.keys[0].u_w == t.keys[1].u_w);
    CHECK(t.keys[0].i_dct != t.keys[1].i_dct);
    for (const GrayImage& m : extract_tiled(t.watermarked, t.keys)) CHECK(correlation(mark, m) >= 0.97);
  }
  SUBCASE("non-divisible dimensions name H, W and B") {
    try {
      embed_tiled(GrayImage(16, 16), GrayImage(10, 10));
      FAIL("expected DimensionError");
    } catch (const DimensionError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("16") != std::string::npos);
      CHECK(msg.find("10") != std::string::npos);
    }
  }
  SUBCASE("extract_tiled errors") {
    CHECK_THROWS_AS(extract_tiled(GrayImage(16, 16), {}), DimensionError);
  }
}
