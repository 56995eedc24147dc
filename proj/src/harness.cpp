#include "schurmark/harness.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "schurmark/synthetic.hpp"

namespace schurmark {

Corpus synthetic_corpus(std::size_t count, Index size, std::uint64_t seed) {
  Corpus corpus;
  corpus.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    corpus.push_back({fmt::format("synthetic-{}", k), synthetic_host(k, size, seed + k)});
  }
  return corpus;
}

Corpus load_corpus(std::span<const std::filesystem::path> paths) {
  Corpus corpus;
  for (const auto& p : paths) corpus.push_back({p.filename().string(), read_pnm_as_gray(read_file(p))});
  return corpus;
}

bool AttackRow::all_detected() const {
  return std::all_of(watermarked.begin(), watermarked.end(), [](const ReportCell& c) {
    return c.result && c.result->detected;
  });
}

bool RobustnessReport::all_detected() const {
  return std::all_of(rows.begin(), rows.end(), [](const AttackRow& r) { return r.all_detected(); });
}

Experiment::Experiment(Corpus corpus, const GrayImage& mark, const AlphaSchedule& alpha)
    : corpus_(std::move(corpus)), mark_(mark), alpha_(alpha) {
  if (corpus_.empty()) throw ConfigError("corpus is empty");
  alpha_.validate();
  for (const auto& entry : corpus_) {
    if (entry.image.width() != mark_.width() || entry.image.height() != mark_.height()) {
      throw DimensionError("corpus image " + entry.name + " is " + entry.image.dims() +
                           " but the mark is " + mark_.dims());
    }
  }
  const SchurFactors<double> factors = mark_factors(mark_);
  embedded_.reserve(corpus_.size());
  for (const auto& entry : corpus_) embedded_.push_back(embed(entry.image, factors, alpha_));
}

namespace {

double correlate_named(const GrayImage& mark, const GrayImage& extracted, const std::string& name) {
  try {
    return correlation(mark, extracted);
  } catch (const DegenerateInputError& e) {
    throw DegenerateInputError("image " + name + ": " + e.what());
  }
}

}  // namespace

double Experiment::attacked_correlation(std::size_t image, const AttackSpec& attack) const {
  const EmbedResult& e = embedded_.at(image);
  const GrayImage extracted = extract(apply_attack(e.watermarked, attack), e.key);
  return correlate_named(mark_, extracted, corpus_[image].name);
}

double Experiment::control_correlation(std::size_t image, const AttackSpec& attack) const {
  const EmbedResult& e = embedded_.at(image);
  const GrayImage extracted = extract(apply_attack(corpus_[image].image, attack), e.key);
  return correlate_named(mark_, extracted, corpus_[image].name);
}

SweepResult Experiment::sweep(AttackKind kind, std::span<const int> values) const {
  if (values.empty()) throw ConfigError(fmt::format("{} sweep: empty parameter list", to_string(kind)));
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] <= values[i - 1]) {
      throw ConfigError(fmt::format("{} sweep: parameters must be strictly increasing", to_string(kind)));
    }
  }
  const std::string param = kind == AttackKind::jpeg ? "qf" : "window";
  SweepResult out{kind, {}};
  for (const int v : values) {
    const AttackSpec spec = AttackSpec{kind, {{param, double(v)}}, kDefaultSeed}.resolved();
    SweepPoint point{double(v), 0, std::numeric_limits<double>::infinity(),
                     -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < corpus_.size(); ++i) {
      const double c = attacked_correlation(i, spec);
      point.mean_corr += c;
      point.min_corr = std::min(point.min_corr, c);
      point.max_corr = std::max(point.max_corr, c);
    }
    point.mean_corr /= double(corpus_.size());
    out.points.push_back(point);
  }
  return out;
}

SweepResult Experiment::qf_sweep(std::span<const int> qfs) const {
  return sweep(AttackKind::jpeg, qfs);
}

SweepResult Experiment::median_sweep(std::span<const int> windows) const {
  return sweep(AttackKind::median, windows);
}

RobustnessReport Experiment::report(std::span<const AttackSpec> suite, double threshold) const {
  if (suite.empty()) throw ConfigError("attack suite is empty");
  RobustnessReport report;
  report.alpha = alpha_;
  report.threshold = threshold;
  for (std::size_t i = 0; i < corpus_.size(); ++i) {
    report.embed_psnr.emplace_back(corpus_[i].name, psnr(corpus_[i].image, embedded_[i].watermarked));
  }

  auto run_cell = [&](std::size_t image, auto&& compute) {
    ReportCell cell{corpus_[image].name, std::nullopt, {}};
    try {
      const double c = compute();
      cell.result = DetectionResult{c, c >= threshold, threshold};
    } catch (const Error& e) {
      cell.error = e.what();
    }
    return cell;
  };

  for (const AttackSpec& raw : suite) {
    AttackRow row;
    try {
      row.attack = raw.resolved();
    } catch (const Error& e) {
      row.attack = raw;
      for (std::size_t i = 0; i < corpus_.size(); ++i) {
        row.watermarked.push_back({corpus_[i].name, std::nullopt, e.what()});
        row.control.push_back({corpus_[i].name, std::nullopt, e.what()});
      }
      report.rows.push_back(std::move(row));
      continue;
    }
    for (std::size_t i = 0; i < corpus_.size(); ++i) {
      row.watermarked.push_back(run_cell(i, [&] { return attacked_correlation(i, row.attack); }));
      row.control.push_back(run_cell(i, [&] { return control_correlation(i, row.attack); }));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

SweepResult run_qf_sweep(const Corpus& corpus, const GrayImage& mark, const AlphaSchedule& alpha,
                         std::span<const int> qfs) {
  if (qfs.empty()) throw ConfigError("jpeg sweep: empty parameter list");
  return Experiment(corpus, mark, alpha).qf_sweep(qfs);
}

SweepResult run_median_sweep(const Corpus& corpus, const GrayImage& mark,
                             const AlphaSchedule& alpha, std::span<const int> windows) {
  if (windows.empty()) throw ConfigError("median sweep: empty parameter list");
  return Experiment(corpus, mark, alpha).median_sweep(windows);
}

DetectorResponse run_detector_response(const GrayImage& host, std::span<const GrayImage> marks,
                                       std::size_t true_index, const AlphaSchedule& alpha,
                                       const std::optional<AttackSpec>& attack) {
  if (marks.empty()) throw ConfigError("detector response: no candidate marks");
  if (true_index >= marks.size()) {
    throw ConfigError(fmt::format("detector response: true index {} out of range for {} marks",
                                  true_index, marks.size()));
  }
  for (std::size_t i = 0; i < marks.size(); ++i) {
    if (marks[i].width() != host.width() || marks[i].height() != host.height()) {
      throw DimensionError(fmt::format("candidate mark {} is {} but the host is {}", i,
                                       marks[i].dims(), host.dims()));
    }
  }
  const EmbedResult e = embed(host, marks[true_index], alpha);
  const GrayImage received = attack ? apply_attack(e.watermarked, *attack) : e.watermarked;
  const GrayImage extracted = extract(received, e.key);

  DetectorResponse out;
  out.true_index = true_index;
  out.responses.reserve(marks.size());
  for (const GrayImage& m : marks) out.responses.push_back(correlation(m, extracted));
  out.argmax = static_cast<std::size_t>(
      std::max_element(out.responses.begin(), out.responses.end()) - out.responses.begin());
  return out;
}

RobustnessReport run_full_report(const Corpus& corpus, const GrayImage& mark,
                                 const AlphaSchedule& alpha, std::span<const AttackSpec> suite,
                                 double threshold) {
  if (suite.empty()) throw ConfigError("attack suite is empty");
  return Experiment(corpus, mark, alpha).report(suite, threshold);
}

std::string sweep_csv(const SweepResult& sweep) {
  std::string out = "param,mean_corr,min_corr,max_corr\n";
  for (const auto& p : sweep.points) {
    out += fmt::format("{:g},{:.6f},{:.6f},{:.6f}\n", p.param, p.mean_corr, p.min_corr, p.max_corr);
  }
  return out;
}

namespace {

nlohmann::json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::json cell_json(const ReportCell& c) {
  nlohmann::json j{{"image", c.image}};
  if (c.result) {
    j["correlation"] = c.result->correlation;
    j["detected"] = c.result->detected;
  } else {
    j["correlation"] = nullptr;
    j["detected"] = false;
    j["error"] = c.error;
  }
  return j;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t json_u64(const nlohmann::json& doc, const char* key, std::uint64_t fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(fmt::format("config: '{}' must be a non-negative integer", key));
  }
  return v.get<std::uint64_t>();
}

std::vector<int> json_int_list(const nlohmann::json& doc, const char* key, std::vector<int> fallback) {
  if (!doc.contains(key)) return fallback;
  std::vector<int> out;
  for (const auto& v : doc.at(key)) {
    if (!v.is_number_integer()) throw ConfigError(fmt::format("config: '{}' must list integers", key));
    out.push_back(v.get<int>());
  }
  return out;
}

}  // namespace

nlohmann::json to_json(const SweepResult& sweep) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : sweep.points) {
    points.push_back({{"param", p.param},
                      {"mean_corr", p.mean_corr},
                      {"min_corr", p.min_corr},
                      {"max_corr", p.max_corr}});
  }
  return {{"attack", to_string(sweep.kind)}, {"points", points}};
}

nlohmann::json to_json(const RobustnessReport& report) {
  nlohmann::json psnr = nlohmann::json::array();
  for (const auto& [name, value] : report.embed_psnr) {
    psnr.push_back({{"image", name}, {"psnr_db", number_or_inf(value)}});
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json wm = nlohmann::json::array();
    nlohmann::json ctl = nlohmann::json::array();
    for (const auto& c : row.watermarked) wm.push_back(cell_json(c));
    for (const auto& c : row.control) ctl.push_back(cell_json(c));
    rows.push_back({{"label", row.attack.label()},
                    {"attack", row.attack},
                    {"all_detected", row.all_detected()},
                    {"watermarked", wm},
                    {"control", ctl}});
  }
  nlohmann::json sweeps = nlohmann::json::array();
  for (const auto& s : report.sweeps) sweeps.push_back(to_json(s));
  return {
      {"toolkit_version", report.version},
      {"generated_at", report.generated_at},
      {"corpus", report.corpus_id},
      {"alpha", {{"base", report.alpha.base}, {"dc", report.alpha.dc}}},
      {"threshold", report.threshold},
      {"seed", report.seed},
      {"embed_psnr", psnr},
      {"attacks", rows},
      {"sweeps", sweeps},
      {"all_detected", report.all_detected()},
  };
}

BenchConfig BenchConfig::from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
  BenchConfig cfg;
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  try {
    cfg.seed = json_u64(doc, "seed", cfg.seed);
    cfg.threshold = doc.value("threshold", cfg.threshold);
    if (doc.contains("corpus")) {
      const auto& c = doc.at("corpus");
      cfg.synthetic_count = c.value("synthetic", std::size_t{0});
      cfg.synthetic_size = c.value("size", cfg.synthetic_size);
      cfg.corpus_seed = json_u64(c, "seed", cfg.corpus_seed);
      for (const auto& p : c.value("paths", std::vector<std::string>{})) cfg.corpus_paths.push_back(resolve(p));
    }
    if (doc.contains("mark")) {
      const auto& m = doc.at("mark");
      if (m.contains("path")) cfg.mark_path = resolve(m.at("path").get<std::string>());
      cfg.mark_seed = json_u64(m, "synthetic_seed", cfg.mark_seed);
    }
    if (doc.contains("alpha")) {
      cfg.alpha.base = doc.at("alpha").value("base", cfg.alpha.base);
      cfg.alpha.dc = doc.at("alpha").value("dc", cfg.alpha.dc);
    }
    if (doc.contains("attacks")) {
      for (const auto& a : doc.at("attacks")) {
        AttackSpec spec = a.get<AttackSpec>();
        if (!a.contains("seed")) spec.seed = cfg.seed;
        cfg.attacks.push_back(spec.resolved());
      }
    } else {
      cfg.attacks = default_attack_suite(cfg.seed);
    }
    cfg.qf_sweep = json_int_list(doc, "qf_sweep", cfg.qf_sweep);
    cfg.median_sweep = json_int_list(doc, "median_sweep", cfg.median_sweep);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.alpha.validate();
  if (cfg.synthetic_count == 0 && cfg.corpus_paths.empty()) throw ConfigError("config: corpus is empty");
  if (cfg.attacks.empty()) throw ConfigError("config: attack suite is empty");
  if (cfg.synthetic_size < 8) throw ConfigError("config: synthetic size must be at least 8");
  return cfg;
}

BenchConfig BenchConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return from_json(doc, path.parent_path());
}

BenchOutcome run_bench(const BenchConfig& config) {
  Corpus corpus = synthetic_corpus(config.synthetic_count, config.synthetic_size, config.corpus_seed);
  Corpus loaded = load_corpus(config.corpus_paths);
  std::move(loaded.begin(), loaded.end(), std::back_inserter(corpus));
  if (corpus.empty()) throw ConfigError("corpus is empty");

  const Index side = corpus.front().image.width();
  const GrayImage mark = config.mark_path ? read_pnm_as_gray(read_file(*config.mark_path))
                                          : synthetic_mark(config.mark_seed, side);

  const Experiment experiment(std::move(corpus), mark, config.alpha);
  BenchOutcome out;
  out.report = experiment.report(config.attacks, config.threshold);
  if (!config.qf_sweep.empty()) out.report.sweeps.push_back(experiment.qf_sweep(config.qf_sweep));
  if (!config.median_sweep.empty()) {
    out.report.sweeps.push_back(experiment.median_sweep(config.median_sweep));
  }
  for (const auto& s : out.report.sweeps) {
    (s.kind == AttackKind::jpeg ? out.qf_csv : out.median_csv) = sweep_csv(s);
  }

  std::string id = fmt::format("synthetic:{}x{}:seed={}", config.synthetic_count,
                               config.synthetic_size, config.corpus_seed);
  for (const auto& p : config.corpus_paths) id += "+" + p.filename().string();
  out.report.corpus_id = id;
  out.report.seed = config.seed;
  out.report.generated_at = utc_timestamp();
  return out;
}

}  // namespace schurmark
