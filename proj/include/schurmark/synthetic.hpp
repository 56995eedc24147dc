#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "schurmark/image.hpp"
#include "schurmark/random.hpp"

namespace schurmark {

/// Deterministic stand-ins for photographic test material. Hosts are smooth
/// multi-scale Gaussian textures with one structural feature each (gradient,
/// soft checkerboard, discs, oblique stripes, fine texture) and a radial
/// vignette; marks are finer-grained textures of moderate contrast. Feature
/// scales are proportional to the image side.
inline constexpr std::size_t kHostVariants = 5;
inline constexpr std::uint64_t kFirstCandidateSeed = 1000;
inline constexpr std::uint64_t kDefaultMarkSeed = 1012;

GrayImage synthetic_host(std::size_t variant, Index size, std::uint64_t seed);
GrayImage synthetic_mark(std::uint64_t seed, Index size);

/// `count` marks with seeds first_seed, first_seed + 1, ...
std::vector<GrayImage> candidate_marks(std::size_t count, Index size,
                                       std::uint64_t first_seed = kFirstCandidateSeed);

/// Circularly Gaussian-blurred white noise, normalized to zero mean and unit
/// standard deviation.
Matrix smooth_noise(Rng& rng, Index size, double sigma);

}  // namespace schurmark
