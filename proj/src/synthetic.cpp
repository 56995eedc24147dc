#include "schurmark/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace schurmark {

namespace {

// Symmetric circulant matrix whose product with a signal is a circular
// Gaussian blur, taps truncated at 3 sigma.
Matrix circular_blur(Index n, double sigma) {
  const Index radius = std::max<Index>(1, static_cast<Index>(std::ceil(3.0 * sigma)));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double total = 0;
  for (Index d = -radius; d <= radius; ++d) {
    const double v = std::exp(-0.5 * double(d * d) / (sigma * sigma));
    taps[static_cast<std::size_t>(d + radius)] = v;
    total += v;
  }
  Matrix k = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index d = -radius; d <= radius; ++d) {
      const Index j = ((i + d) % n + n) % n;
      k(i, j) += taps[static_cast<std::size_t>(d + radius)] / total;
    }
  }
  return k;
}

Matrix blur(const Matrix& m, double sigma) {
  const Matrix k = circular_blur(m.rows(), sigma);
  Matrix tmp(m.rows(), m.cols());
  tmp.noalias() = k * m;
  Matrix out(m.rows(), m.cols());
  out.noalias() = tmp * k.transpose();
  return out;
}

Matrix standardize(const Matrix& m) {
  const double mean = m.mean();
  const double sd = std::sqrt((m.array() - mean).square().mean());
  return (m.array() - mean) / (sd > 0 ? sd : 1.0);
}

GrayImage quantize(const Matrix& m) {
  return from_float(m.unaryExpr([](double v) { return std::clamp(v, 0.0, 255.0); }));
}

struct Grid {
  Matrix x;  // column / n
  Matrix y;  // row / n
};

Grid grid(Index n) {
  Grid g{Matrix(n, n), Matrix(n, n)};
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < n; ++c) {
      g.x(r, c) = double(c) / double(n);
      g.y(r, c) = double(r) / double(n);
    }
  }
  return g;
}

}  // namespace

Matrix smooth_noise(Rng& rng, Index size, double sigma) {
  Matrix white(size, size);
  for (Index c = 0; c < size; ++c) {
    for (Index r = 0; r < size; ++r) white(r, c) = rng.normal();
  }
  return standardize(blur(white, sigma));
}

GrayImage synthetic_host(std::size_t variant, Index size, std::uint64_t seed) {
  if (size < 8) throw DimensionError("synthetic_host: size must be at least 8");
  const double unit = double(size) / 512.0;
  Rng rng(seed);
  const Grid g = grid(size);

  Matrix base = 0.6 * smooth_noise(rng, size, 40 * unit) + 0.4 * smooth_noise(rng, size, 12 * unit) +
                0.15 * smooth_noise(rng, size, 4 * unit);

  switch (variant % kHostVariants) {
    case 0:  // linear gradient
      base += 3.0 * (0.7 * g.x - 0.5 * g.y);
      break;
    case 1: {  // soft 8x8 checkerboard
      Matrix board(size, size);
      for (Index r = 0; r < size; ++r) {
        for (Index c = 0; c < size; ++c) {
          const auto cell = Index(std::floor(g.x(r, c) * 8)) + Index(std::floor(g.y(r, c) * 8));
          board(r, c) = cell % 2 == 0 ? -1.0 : 1.0;
        }
      }
      base += 0.8 * blur(board, 6 * unit);
      break;
    }
    case 2:  // soft discs
      for (int d = 0; d < 6; ++d) {
        const double cx = 0.1 + 0.8 * rng.uniform();
        const double cy = 0.1 + 0.8 * rng.uniform();
        const double radius = 0.05 + 0.1 * rng.uniform();
        const Matrix disc = (((g.x.array() - cx).square() + (g.y.array() - cy).square()) <
                             radius * radius)
                                .cast<double>();
        base += 0.8 * blur(disc, 4 * unit);
      }
      break;
    case 3:  // oblique stripes
      base += 0.6 * (2 * std::numbers::pi * (5 * g.x.array() + 3 * g.y.array())).sin().matrix();
      break;
    default:  // extra fine texture
      base += 0.2 * smooth_noise(rng, size, 3 * unit);
      break;
  }

  constexpr double kMean = 125;
  constexpr double kStd = 40;
  constexpr double kVignette = 0.45;
  const Matrix r2 = ((g.x.array() - 0.5).square() + (g.y.array() - 0.5).square()) / 0.5;
  Matrix img = (kMean + kStd * standardize(base).array()) * (1.0 - kVignette * r2.array());
  img.array() += kMean - img.mean();
  return quantize(img);
}

GrayImage synthetic_mark(std::uint64_t seed, Index size) {
  if (size < 8) throw DimensionError("synthetic_mark: size must be at least 8");
  const double unit = double(size) / 512.0;
  Rng rng(seed);
  const Matrix texture = 0.6 * smooth_noise(rng, size, 24 * unit) +
                         0.4 * smooth_noise(rng, size, 8 * unit) +
                         0.1 * smooth_noise(rng, size, 3 * unit);
  return quantize((128.0 + 36.0 * standardize(texture).array()).matrix());
}

std::vector<GrayImage> candidate_marks(std::size_t count, Index size, std::uint64_t first_seed) {
  std::vector<GrayImage> marks;
  marks.reserve(count);
  for (std::size_t i = 0; i < count; ++i) marks.push_back(synthetic_mark(first_seed + i, size));
  return marks;
}

}  // namespace schurmark
