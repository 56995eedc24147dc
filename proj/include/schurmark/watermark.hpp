#pragma once

#include <vector>

#include "schurmark/dct.hpp"
#include "schurmark/image.hpp"
#include "schurmark/schur.hpp"

namespace schurmark {

/// Embedding gains: `dc` applies to the leading entry of the mark's
/// triangular factor, `base` to every other entry.
struct AlphaSchedule {
  double base = 0.3;
  double dc = 0.03;

  void validate() const;
  friend bool operator==(const AlphaSchedule&, const AlphaSchedule&) = default;
};

/// Secret material for extraction. Extraction is non-blind: besides the
/// mark's orthogonal Schur factor the key carries the host's DCT.
struct WatermarkKey {
  Index n = 0;
  Matrix u_w;
  Matrix i_dct;
  AlphaSchedule alpha;

  /// Checks shapes, alpha and orthogonality of u_w (1e-8 max-abs).
  void validate() const;
};

struct EmbedResult {
  GrayImage watermarked;
  WatermarkKey key;
};

struct TiledEmbedResult {
  GrayImage watermarked;
  /// One key per tile, tiles in row-major order.
  std::vector<WatermarkKey> keys;
  Index tile = 0;
};

/// Elementwise gain G: G(0,0) = alpha.dc, alpha.base elsewhere.
Matrix gain_matrix(Index n, const AlphaSchedule& alpha);

/// Schur factors of a mark in float form; computing them once lets callers
/// embed the same mark in many hosts.
SchurFactors<double> mark_factors(const GrayImage& mark);

/// Float-domain pipeline: returns idct2(dct2(host) + G .* t_w) without
/// quantization, and fills `key`.
Matrix embed_float(const Matrix& host, const SchurFactors<double>& mark,
                   const AlphaSchedule& alpha, WatermarkKey& key);

/// u_w * ((dct2(image) - i_dct) ./ G) * u_w^T, unquantized.
Matrix extract_float(const Matrix& image, const WatermarkKey& key);

EmbedResult embed(const GrayImage& host, const GrayImage& mark, const AlphaSchedule& alpha = {});
EmbedResult embed(const GrayImage& host, const SchurFactors<double>& mark,
                  const AlphaSchedule& alpha = {});

GrayImage extract(const GrayImage& image, const WatermarkKey& key);

/// Splits an H x W host into B x B tiles (B = mark side) and embeds the mark in
/// each. B must divide both H and W.
TiledEmbedResult embed_tiled(const GrayImage& host, const GrayImage& mark,
                             const AlphaSchedule& alpha = {});

/// Extracts one mark per tile, in the key order produced by embed_tiled.
std::vector<GrayImage> extract_tiled(const GrayImage& image, const std::vector<WatermarkKey>& keys);

}  // namespace schurmark
