#include "schurmark/watermark.hpp"

#include <cmath>
#include <string>

namespace schurmark {

void AlphaSchedule::validate() const {
  if (!(base > 0) || !(dc > 0) || !std::isfinite(base) || !std::isfinite(dc)) {
    throw ParameterError("alpha gains must be finite and positive (base=" + std::to_string(base) +
                         ", dc=" + std::to_string(dc) + ")");
  }
}

void WatermarkKey::validate() const {
  if (n <= 0) throw DimensionError("key: side length must be positive");
  if (u_w.rows() != n || u_w.cols() != n || i_dct.rows() != n || i_dct.cols() != n) {
    throw DimensionError("key: matrices must be " + detail::shape(n, n));
  }
  alpha.validate();
  require_finite(u_w, "key u_w");
  require_finite(i_dct, "key i_dct");
  const double drift = (u_w.transpose() * u_w - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (drift > 1e-8) {
    throw ParameterError("key: u_w is not orthogonal (max |u^T u - I| = " + std::to_string(drift) +
                         ")");
  }
}

Matrix gain_matrix(Index n, const AlphaSchedule& alpha) {
  Matrix g = Matrix::Constant(n, n, alpha.base);
  g(0, 0) = alpha.dc;
  return g;
}

SchurFactors<double> mark_factors(const GrayImage& mark) {
  if (!mark.is_square()) {
    throw DimensionError("mark must be square, got " + mark.dims());
  }
  return schur_decompose(to_float(mark));
}

Matrix embed_float(const Matrix& host, const SchurFactors<double>& mark, const AlphaSchedule& alpha,
                   WatermarkKey& key) {
  alpha.validate();
  require_square(host, "embed");
  if (mark.t.rows() != host.rows() || mark.u.rows() != host.rows()) {
    throw DimensionError("embed: host is " + detail::shape(host.rows(), host.cols()) +
                         " but mark is " + detail::shape(mark.t.rows(), mark.t.cols()));
  }
  const Index n = host.rows();
  const DctPlan<double> plan(n);
  key.n = n;
  key.alpha = alpha;
  key.u_w = mark.u;
  key.i_dct = dct2(host, plan);
  const Matrix marked = key.i_dct + gain_matrix(n, alpha).cwiseProduct(mark.t);
  return idct2(marked, plan);
}

Matrix extract_float(const Matrix& image, const WatermarkKey& key) {
  if (image.rows() != key.n || image.cols() != key.n) {
    throw DimensionError("extract: image is " + detail::shape(image.rows(), image.cols()) +
                         " but key expects " + detail::shape(key.n, key.n));
  }
  key.alpha.validate();
  const DctPlan<double> plan(key.n);
  const Matrix t_w = (dct2(image, plan) - key.i_dct).cwiseQuotient(gain_matrix(key.n, key.alpha));
  return schur_reconstruct(SchurFactors<double>{key.u_w, t_w});
}

EmbedResult embed(const GrayImage& host, const SchurFactors<double>& mark,
                  const AlphaSchedule& alpha) {
  if (!host.is_square()) {
    throw DimensionError("host must be square, got " + host.dims());
  }
  EmbedResult out;
  out.watermarked = from_float(embed_float(to_float(host), mark, alpha, out.key));
  return out;
}

EmbedResult embed(const GrayImage& host, const GrayImage& mark, const AlphaSchedule& alpha) {
  if (!host.is_square() || !mark.is_square() || host.width() != mark.width()) {
    throw DimensionError("host (" + host.dims() + ") and mark (" + mark.dims() +
                         ") must be square and equally sized");
  }
  alpha.validate();
  return embed(host, mark_factors(mark), alpha);
}

GrayImage extract(const GrayImage& image, const WatermarkKey& key) {
  return from_float(extract_float(to_float(image), key));
}

namespace {

Matrix tile_of(const Matrix& m, Index row, Index col, Index side) {
  return m.block(row * side, col * side, side, side);
}

}  // namespace

TiledEmbedResult embed_tiled(const GrayImage& host, const GrayImage& mark,
                             const AlphaSchedule& alpha) {
  if (!mark.is_square()) throw DimensionError("mark must be square, got " + mark.dims());
  const Index side = mark.width();
  if (host.height() % side != 0 || host.width() % side != 0) {
    throw DimensionError("embed_tiled: tile side " + std::to_string(side) +
                         " must divide host height " + std::to_string(host.height()) +
                         " and width " + std::to_string(host.width()));
  }
  alpha.validate();
  const SchurFactors<double> factors = mark_factors(mark);
  const Matrix host_f = to_float(host);
  Matrix marked(host_f.rows(), host_f.cols());

  TiledEmbedResult out;
  out.tile = side;
  for (Index r = 0; r < host.height() / side; ++r) {
    for (Index c = 0; c < host.width() / side; ++c) {
      WatermarkKey key;
      marked.block(r * side, c * side, side, side) =
          embed_float(tile_of(host_f, r, c, side), factors, alpha, key);
      out.keys.push_back(std::move(key));
    }
  }
  out.watermarked = from_float(marked);
  return out;
}

std::vector<GrayImage> extract_tiled(const GrayImage& image, const std::vector<WatermarkKey>& keys) {
  if (keys.empty()) throw DimensionError("extract_tiled: no keys");
  const Index side = keys.front().n;
  const Index cols = image.width() / side;
  const Index rows = image.height() / side;
  if (image.width() % side != 0 || image.height() % side != 0 ||
      static_cast<std::size_t>(rows * cols) != keys.size()) {
    throw DimensionError("extract_tiled: image " + image.dims() + " does not hold " +
                         std::to_string(keys.size()) + " tiles of side " + std::to_string(side));
  }
  const Matrix image_f = to_float(image);
  std::vector<GrayImage> marks;
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      marks.push_back(from_float(
          extract_float(tile_of(image_f, r, c, side), keys[static_cast<std::size_t>(r * cols + c)])));
    }
  }
  return marks;
}

}  // namespace schurmark
