#pragma once

#include "schurmark/image.hpp"

namespace schurmark {

/// Default decision floor for detection.
inline constexpr double kDefaultThreshold = 0.2;

struct DetectionResult {
  double correlation = 0;
  bool detected = false;
  double threshold = kDefaultThreshold;
};

/// Mean of squared pixel differences.
double mse(const GrayImage& a, const GrayImage& b);

/// 10 log10(255^2 / mse); +infinity when the images are identical.
double psnr(const GrayImage& a, const GrayImage& b);

/// Pearson correlation of the two pixel arrays. Throws DegenerateInputError
/// when either image is constant.
double correlation(const GrayImage& w, const GrayImage& w_ext);

DetectionResult detect(const GrayImage& w, const GrayImage& w_ext,
                       double threshold = kDefaultThreshold);

}  // namespace schurmark
