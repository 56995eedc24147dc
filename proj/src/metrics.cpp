#include "schurmark/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace schurmark {

namespace {

void require_same_dims(const GrayImage& a, const GrayImage& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionError(std::string(what) + ": images differ in size, " + a.dims() + " vs " +
                         b.dims());
  }
}

}  // namespace

double mse(const GrayImage& a, const GrayImage& b) {
  require_same_dims(a, b, "mse");
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  double sum = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double d = double(pa[i]) - double(pb[i]);
    sum += d * d;
  }
  return sum / double(pa.size());
}

double psnr(const GrayImage& a, const GrayImage& b) {
  const double err = mse(a, b);
  if (err == 0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / err);
}

double correlation(const GrayImage& w, const GrayImage& w_ext) {
  require_same_dims(w, w_ext, "correlation");
  const auto pa = w.pixels();
  const auto pb = w_ext.pixels();
  const double count = double(pa.size());
  double mean_a = 0;
  double mean_b = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    mean_a += pa[i];
    mean_b += pb[i];
  }
  mean_a /= count;
  mean_b /= count;

  double cross = 0;
  double var_a = 0;
  double var_b = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double da = pa[i] - mean_a;
    const double db = pb[i] - mean_b;
    cross += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0 || var_b == 0) {
    throw DegenerateInputError(std::string("correlation: ") +
                               (var_a == 0 ? "reference" : "extracted") +
                               " image is constant");
  }
  return std::clamp(cross / std::sqrt(var_a * var_b), -1.0, 1.0);
}

DetectionResult detect(const GrayImage& w, const GrayImage& w_ext, double threshold) {
  const double c = correlation(w, w_ext);
  return {c, c >= threshold, threshold};
}

}  // namespace schurmark
