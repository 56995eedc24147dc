#include "schurmark/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "schurmark/dct.hpp"
#include "schurmark/random.hpp"

namespace schurmark {

namespace {

struct KindInfo {
  AttackKind kind;
  std::string_view name;
  std::string_view param;  // empty for parameterless attacks
  double default_value;
};

constexpr std::array<KindInfo, 8> kKinds{{
    {AttackKind::jpeg, "jpeg", "qf", 10},
    {AttackKind::gaussian_noise, "gaussian_noise", "variance", 0.03},
    {AttackKind::salt_pepper, "salt_pepper", "density", 0.03},
    {AttackKind::median, "median", "window", 9},
    {AttackKind::histeq, "histeq", "", 0},
    {AttackKind::crop_border, "crop_border", "border", 8},
    {AttackKind::rotate, "rotate", "degrees", 1.5},
    {AttackKind::color_reduce, "color_reduce", "levels", 64},
}};

const KindInfo& info(AttackKind kind) {
  return kKinds[static_cast<std::size_t>(kind)];
}

// Standard JPEG luminance quantization table (ITU-T T.81 Annex K.1), row-major.
constexpr std::array<int, 64> kLuminanceTable{
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99,
};

// Mirror index into [0, n) without repeating the edge sample.
Index reflect(Index i, Index n) {
  if (n == 1) return 0;
  const Index period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

int integral_param(const AttackSpec& spec, std::string_view name) {
  const double v = spec.params.at(std::string(name));
  return static_cast<int>(v);
}

std::string format_number(double v) { return fmt::format("{:g}", v); }

void check_range(bool ok, const KindInfo& k, double v, std::string_view range) {
  if (!ok) {
    throw ParameterError(fmt::format("{}: {}={} out of range ({})", k.name, k.param,
                                     format_number(v), range));
  }
}

}  // namespace

std::string_view to_string(AttackKind kind) { return info(kind).name; }

std::optional<AttackKind> parse_attack_kind(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

AttackSpec AttackSpec::resolved() const {
  const KindInfo& k = info(kind);
  AttackSpec out{kind, {}, seed};
  for (const auto& [name, value] : params) {
    if (name != k.param) {
      throw ParameterError(fmt::format("{}: unknown parameter '{}'", k.name, name));
    }
  }
  if (k.param.empty()) return out;

  const auto it = params.find(std::string(k.param));
  const double v = it == params.end() ? k.default_value : it->second;
  const bool integral = std::isfinite(v) && v == std::floor(v);
  switch (kind) {
    case AttackKind::jpeg:
      check_range(integral && v >= 1 && v <= 100, k, v, "integer 1..100");
      break;
    case AttackKind::gaussian_noise:
      check_range(std::isfinite(v) && v >= 0, k, v, ">= 0");
      break;
    case AttackKind::salt_pepper:
      check_range(v >= 0 && v <= 1, k, v, "0..1");
      break;
    case AttackKind::median:
      check_range(integral && v >= 3 && std::fmod(v, 2.0) == 1.0, k, v, "odd integer >= 3");
      break;
    case AttackKind::crop_border:
      check_range(integral && v >= 0 && v <= 1e6, k, v, "integer >= 0");
      break;
    case AttackKind::rotate:
      check_range(std::isfinite(v), k, v, "finite");
      break;
    case AttackKind::color_reduce:
      check_range(integral && v >= 2 && v <= 256, k, v, "integer 2..256");
      break;
    case AttackKind::histeq:
      break;
  }
  out.params[std::string(k.param)] = v;
  return out;
}

std::string AttackSpec::label() const {
  const KindInfo& k = info(kind);
  if (k.param.empty()) return std::string(k.name);
  const auto it = params.find(std::string(k.param));
  const double v = it == params.end() ? k.default_value : it->second;
  return fmt::format("{}({}={})", k.name, k.param, format_number(v));
}

void to_json(nlohmann::json& j, const AttackSpec& spec) {
  j = nlohmann::json{{"kind", to_string(spec.kind)},
                     {"params", nlohmann::json::object()},
                     {"seed", spec.seed}};
  for (const auto& [name, value] : spec.params) j["params"][name] = value;
}

void from_json(const nlohmann::json& j, AttackSpec& spec) {
  if (!j.is_object()) throw ParameterError("attack spec must be a JSON object");
  const auto kind_name = j.at("kind").get<std::string>();
  const auto kind = parse_attack_kind(kind_name);
  if (!kind) throw ParameterError("unknown attack kind '" + kind_name + "'");
  spec.kind = *kind;
  spec.params.clear();
  if (j.contains("params")) {
    for (const auto& [name, value] : j.at("params").items()) {
      if (!value.is_number()) throw ParameterError("attack parameter '" + name + "' must be numeric");
      spec.params[name] = value.get<double>();
    }
  }
  spec.seed = j.value("seed", kDefaultSeed);
}

std::vector<AttackSpec> default_attack_suite(std::uint64_t seed) {
  std::vector<AttackSpec> suite;
  for (const auto& k : kKinds) suite.push_back(AttackSpec{k.kind, {}, seed}.resolved());
  return suite;
}

std::array<int, 64> jpeg_quant_table(int qf) {
  if (qf < 1 || qf > 100) throw ParameterError(fmt::format("jpeg: qf={} out of range 1..100", qf));
  const double scale = qf < 50 ? 5000.0 / qf : 200.0 - 2.0 * qf;
  std::array<int, 64> table{};
  for (std::size_t i = 0; i < 64; ++i) {
    table[i] = static_cast<int>(std::clamp(std::round(kLuminanceTable[i] * scale / 100.0), 1.0, 255.0));
  }
  return table;
}

GrayImage attack_jpeg(const GrayImage& img, int qf) {
  const auto table = jpeg_quant_table(qf);
  const Index w = img.width();
  const Index h = img.height();
  const Index pw = (w + 7) / 8 * 8;
  const Index ph = (h + 7) / 8 * 8;

  Matrix padded(ph, pw);
  for (Index y = 0; y < ph; ++y) {
    for (Index x = 0; x < pw; ++x) padded(y, x) = img.at(reflect(x, w), reflect(y, h)) - 128.0;
  }

  const DctPlan<double> plan(8);
  for (Index by = 0; by < ph; by += 8) {
    for (Index bx = 0; bx < pw; bx += 8) {
      Matrix coeffs = dct2(padded.block(by, bx, 8, 8), plan);
      for (Index i = 0; i < 8; ++i) {
        for (Index j = 0; j < 8; ++j) {
          const double q = table[static_cast<std::size_t>(i * 8 + j)];
          coeffs(i, j) = std::round(coeffs(i, j) / q) * q;
        }
      }
      padded.block(by, bx, 8, 8) = idct2(coeffs, plan);
    }
  }
  return from_float(padded.topLeftCorner(h, w).array() + 128.0);
}

GrayImage attack_gaussian(const GrayImage& img, double variance, std::uint64_t seed) {
  if (!(variance >= 0) || !std::isfinite(variance)) {
    throw ParameterError(fmt::format("gaussian_noise: variance={} must be >= 0", variance));
  }
  if (variance == 0) return img;
  const double sigma = std::sqrt(variance) * 255.0;
  Rng rng(seed);
  GrayImage out = img;
  for (auto& p : out.pixels()) {
    const double v = std::clamp(double(p) + sigma * rng.normal(), 0.0, 255.0);
    p = static_cast<std::uint8_t>(std::round(v));
  }
  return out;
}

GrayImage attack_salt_pepper(const GrayImage& img, double density, std::uint64_t seed) {
  if (!(density >= 0 && density <= 1)) {
    throw ParameterError(fmt::format("salt_pepper: density={} out of range 0..1", density));
  }
  Rng rng(seed);
  GrayImage out = img;
  for (auto& p : out.pixels()) {
    const double hit = rng.uniform();
    const double coin = rng.uniform();
    if (hit < density) p = coin < 0.5 ? 0 : 255;
  }
  return out;
}

GrayImage attack_median(const GrayImage& img, int window) {
  if (window < 3 || window % 2 == 0) {
    throw ParameterError(fmt::format("median: window={} must be an odd integer >= 3", window));
  }
  const Index r = window / 2;
  const Index w = img.width();
  const Index h = img.height();
  const std::size_t mid = static_cast<std::size_t>(window * window) / 2;
  GrayImage out(w, h);
  std::vector<std::uint8_t> buf(static_cast<std::size_t>(window * window));
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      std::size_t k = 0;
      for (Index dy = -r; dy <= r; ++dy) {
        const Index sy = reflect(y + dy, h);
        for (Index dx = -r; dx <= r; ++dx) buf[k++] = img.at(reflect(x + dx, w), sy);
      }
      std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(mid), buf.end());
      out.at(x, y) = buf[mid];
    }
  }
  return out;
}

GrayImage attack_histeq(const GrayImage& img) {
  std::array<std::int64_t, 256> hist{};
  for (std::uint8_t p : img.pixels()) ++hist[p];
  std::array<std::int64_t, 256> cdf{};
  std::int64_t running = 0;
  for (std::size_t v = 0; v < 256; ++v) cdf[v] = running += hist[v];

  const std::int64_t total = running;
  std::int64_t cdf_min = 0;
  for (std::size_t v = 0; v < 256; ++v) {
    if (hist[v] != 0) {
      cdf_min = cdf[v];
      break;
    }
  }
  if (total == cdf_min) return img;  // single gray level

  std::array<std::uint8_t, 256> lut{};
  for (std::size_t v = 0; v < 256; ++v) {
    const double mapped = 255.0 * double(cdf[v] - cdf_min) / double(total - cdf_min);
    lut[v] = static_cast<std::uint8_t>(std::round(std::clamp(mapped, 0.0, 255.0)));
  }
  GrayImage out = img;
  for (auto& p : out.pixels()) p = lut[p];
  return out;
}

GrayImage attack_crop_border(const GrayImage& img, int border) {
  if (border < 0 || 2 * Index(border) >= std::min(img.width(), img.height())) {
    throw ParameterError(fmt::format("crop_border: border={} too large for {}", border, img.dims()));
  }
  GrayImage out = img;
  for (Index y = 0; y < img.height(); ++y) {
    for (Index x = 0; x < img.width(); ++x) {
      if (y < border || x < border) out.at(x, y) = 0;
    }
  }
  return out;
}

GrayImage attack_rotate(const GrayImage& img, double degrees) {
  if (!std::isfinite(degrees)) throw ParameterError("rotate: degrees must be finite");
  const Index w = img.width();
  const Index h = img.height();
  const double theta = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double cx = double(w - 1) / 2.0;
  const double cy = double(h - 1) / 2.0;

  auto sample = [&](Index x, Index y) -> double {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0.0;
    return img.at(x, y);
  };

  Matrix out(h, w);
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      // inverse map: source = R(-theta) * (dest - center) + center, y axis down
      const double dx = double(x) - cx;
      const double dy = double(y) - cy;
      const double sx = c * dx - s * dy + cx;
      const double sy = s * dx + c * dy + cy;
      const double fx = std::floor(sx);
      const double fy = std::floor(sy);
      const Index x0 = static_cast<Index>(fx);
      const Index y0 = static_cast<Index>(fy);
      const double ax = sx - fx;
      const double ay = sy - fy;
      out(y, x) = (1 - ay) * ((1 - ax) * sample(x0, y0) + ax * sample(x0 + 1, y0)) +
                  ay * ((1 - ax) * sample(x0, y0 + 1) + ax * sample(x0 + 1, y0 + 1));
    }
  }
  return from_float(out);
}

GrayImage attack_color_reduce(const GrayImage& img, int levels) {
  if (levels < 2 || levels > 256) {
    throw ParameterError(fmt::format("color_reduce: levels={} out of range 2..256", levels));
  }
  const double steps = levels - 1;
  std::array<std::uint8_t, 256> lut{};
  for (int v = 0; v < 256; ++v) {
    const double level = std::round(v * steps / 255.0);
    lut[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(std::round(level * 255.0 / steps));
  }
  GrayImage out = img;
  for (auto& p : out.pixels()) p = lut[p];
  return out;
}

GrayImage apply_attack(const GrayImage& img, const AttackSpec& spec) {
  const AttackSpec r = spec.resolved();
  switch (r.kind) {
    case AttackKind::jpeg:
      return attack_jpeg(img, integral_param(r, "qf"));
    case AttackKind::gaussian_noise:
      return attack_gaussian(img, r.params.at("variance"), r.seed);
    case AttackKind::salt_pepper:
      return attack_salt_pepper(img, r.params.at("density"), r.seed);
    case AttackKind::median:
      return attack_median(img, integral_param(r, "window"));
    case AttackKind::histeq:
      return attack_histeq(img);
    case AttackKind::crop_border:
      return attack_crop_border(img, integral_param(r, "border"));
    case AttackKind::rotate:
      return attack_rotate(img, r.params.at("degrees"));
    case AttackKind::color_reduce:
      return attack_color_reduce(img, integral_param(r, "levels"));
  }
  throw ParameterError("unknown attack kind");
}

bool outside_tested_envelope(const AttackSpec& spec) {
  if (spec.kind != AttackKind::rotate) return false;
  const auto it = spec.params.find("degrees");
  return it != spec.params.end() && std::abs(it->second) > 45.0;
}

}  // namespace schurmark
