#pragma once

#include <cmath>
#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include "schurmark/image.hpp"
#include "schurmark/random.hpp"

namespace fixtures {

using schurmark::GrayImage;
using schurmark::Index;
using schurmark::Matrix;

/// Entries uniform in [-1, 1].
inline Matrix random_matrix(schurmark::Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = 2.0 * rng.uniform() - 1.0;
  }
  return m;
}

inline GrayImage random_image(schurmark::Rng& rng, Index width, Index height, int lo = 0, int hi = 255) {
  std::vector<std::uint8_t> px(static_cast<std::size_t>(width * height));
  for (auto& p : px) p = static_cast<std::uint8_t>(lo + int(rng.next() % std::uint64_t(hi - lo + 1)));
  return GrayImage(width, height, std::move(px));
}

/// Eigenvalues read off a real quasi-triangular matrix: 1x1 blocks directly,
/// 2x2 blocks from their trace and determinant.
inline std::vector<std::complex<double>> quasi_triangular_eigenvalues(const Matrix& t) {
  std::vector<std::complex<double>> out;
  const Index n = t.rows();
  for (Index i = 0; i < n;) {
    if (i + 1 < n && t(i + 1, i) != 0.0) {
      const double tr = t(i, i) + t(i + 1, i + 1);
      const double det = t(i, i) * t(i + 1, i + 1) - t(i, i + 1) * t(i + 1, i);
      const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr / 4 - det));
      out.push_back(tr / 2 + disc);
      out.push_back(tr / 2 - disc);
      i += 2;
    } else {
      out.emplace_back(t(i, i), 0.0);
      i += 1;
    }
  }
  return out;
}

/// Largest distance in a greedy nearest matching of two equal-size multisets.
inline double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0;
  for (const auto& x : a) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < b.size(); ++j) {
      if (std::abs(b[j] - x) < std::abs(b[best] - x)) best = j;
    }
    worst = std::max(worst, std::abs(b[best] - x));
    b.erase(b.begin() + std::ptrdiff_t(best));
  }
  return worst;
}

/// True when t is standardized real Schur form: zero below the first
/// subdiagonal and no two adjacent nonzero subdiagonal entries.
inline bool is_quasi_triangular(const Matrix& t) {
  const Index n = t.rows();
  for (Index c = 0; c < n; ++c) {
    for (Index r = c + 2; r < n; ++r) {
      if (t(r, c) != 0.0) return false;
    }
  }
  for (Index i = 0; i + 2 < n; ++i) {
    if (t(i + 1, i) != 0.0 && t(i + 2, i + 1) != 0.0) return false;
  }
  return true;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("schurmark-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
