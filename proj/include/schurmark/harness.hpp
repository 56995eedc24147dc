#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "schurmark/attacks.hpp"
#include "schurmark/metrics.hpp"
#include "schurmark/synthetic.hpp"
#include "schurmark/watermark.hpp"

namespace schurmark {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

struct CorpusImage {
  std::string name;
  GrayImage image;
};

using Corpus = std::vector<CorpusImage>;

/// `count` synthetic hosts cycling through the host variants; image k uses
/// seed `seed + k`.
Corpus synthetic_corpus(std::size_t count = 5, Index size = 512, std::uint64_t seed = 0);

/// Loads PGM/PPM files; color input is reduced to Rec. 601 luma.
Corpus load_corpus(std::span<const std::filesystem::path> paths);

struct SweepPoint {
  double param = 0;
  double mean_corr = 0;
  double min_corr = 0;
  double max_corr = 0;
};

struct SweepResult {
  AttackKind kind = AttackKind::jpeg;
  std::vector<SweepPoint> points;  // strictly increasing param
};

/// Correlation of each candidate mark with the mark extracted from an
/// attacked watermarked host.
struct DetectorResponse {
  std::vector<double> responses;
  std::size_t true_index = 0;
  std::size_t argmax = 0;
};

struct ReportCell {
  std::string image;
  std::optional<DetectionResult> result;
  std::string error;  // set when the cell failed
};

struct AttackRow {
  AttackSpec attack;
  std::vector<ReportCell> watermarked;  // one cell per corpus image, corpus order
  std::vector<ReportCell> control;      // same attack on the unwatermarked host
  bool all_detected() const;
};

struct RobustnessReport {
  std::string corpus_id;
  AlphaSchedule alpha;
  double threshold = kDefaultThreshold;
  std::vector<std::pair<std::string, double>> embed_psnr;
  std::vector<AttackRow> rows;
  std::vector<SweepResult> sweeps;
  std::string version{kToolkitVersion};
  std::uint64_t seed = kDefaultSeed;
  std::string generated_at;

  bool all_detected() const;
};

/// Embeds one mark into every corpus image once and runs attacks against
/// the 8-bit watermarked images. Cells are independent and results are
/// assembled in (attack, image) order.
class Experiment {
 public:
  Experiment(Corpus corpus, const GrayImage& mark, const AlphaSchedule& alpha);

  const Corpus& corpus() const noexcept { return corpus_; }
  const GrayImage& mark() const noexcept { return mark_; }
  const AlphaSchedule& alpha() const noexcept { return alpha_; }
  const EmbedResult& embedded(std::size_t i) const { return embedded_.at(i); }

  /// Correlation between the mark and the mark extracted after the attack.
  /// DegenerateInputError is rethrown with the image named.
  double attacked_correlation(std::size_t image, const AttackSpec& attack) const;
  /// Same, but the attack is applied to the original (unwatermarked) host.
  double control_correlation(std::size_t image, const AttackSpec& attack) const;

  SweepResult qf_sweep(std::span<const int> qfs) const;
  SweepResult median_sweep(std::span<const int> windows) const;
  RobustnessReport report(std::span<const AttackSpec> suite, double threshold) const;

 private:
  SweepResult sweep(AttackKind kind, std::span<const int> values) const;

  Corpus corpus_;
  GrayImage mark_;
  AlphaSchedule alpha_;
  std::vector<EmbedResult> embedded_;
};

SweepResult run_qf_sweep(const Corpus& corpus, const GrayImage& mark, const AlphaSchedule& alpha,
                         std::span<const int> qfs);
SweepResult run_median_sweep(const Corpus& corpus, const GrayImage& mark,
                             const AlphaSchedule& alpha, std::span<const int> windows);
DetectorResponse run_detector_response(const GrayImage& host, std::span<const GrayImage> marks,
                                       std::size_t true_index, const AlphaSchedule& alpha,
                                       const std::optional<AttackSpec>& attack);
RobustnessReport run_full_report(const Corpus& corpus, const GrayImage& mark,
                                 const AlphaSchedule& alpha, std::span<const AttackSpec> suite,
                                 double threshold = kDefaultThreshold);

/// `param,mean_corr,min_corr,max_corr` with fixed 6-decimal correlations.
std::string sweep_csv(const SweepResult& sweep);

nlohmann::json to_json(const SweepResult& sweep);
nlohmann::json to_json(const RobustnessReport& report);

/// Benchmark configuration; see docs/bench_config.md for the JSON schema.
struct BenchConfig {
  std::size_t synthetic_count = 5;
  Index synthetic_size = 512;
  std::uint64_t corpus_seed = 0;
  std::vector<std::filesystem::path> corpus_paths;
  std::optional<std::filesystem::path> mark_path;
  std::uint64_t mark_seed = kDefaultMarkSeed;
  AlphaSchedule alpha;
  std::vector<AttackSpec> attacks;
  std::vector<int> qf_sweep{10, 20, 30, 40, 50, 60, 70, 80, 90};
  std::vector<int> median_sweep{3, 5, 7, 9};
  double threshold = kDefaultThreshold;
  std::uint64_t seed = kDefaultSeed;

  /// Relative paths are resolved against `base_dir`.
  static BenchConfig from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
  static BenchConfig load(const std::filesystem::path& path);
};

struct BenchOutcome {
  RobustnessReport report;
  std::string qf_csv;
  std::string median_csv;
};

/// Loads the corpus and mark, runs both sweeps and the attack-suite report.
/// Throws ConfigError for an empty corpus.
BenchOutcome run_bench(const BenchConfig& config);

}  // namespace schurmark
