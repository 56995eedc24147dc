#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "schurmark/harness.hpp"
#include "schurmark/keyio.hpp"

namespace schurmark::cli {

namespace fs = std::filesystem;

std::string format_correlation(double value) {
  if (value == 0) value = 0;  // drop the sign of -0
  std::string s = fmt::format("{:.6f}", value);
  while (s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

namespace {

struct EmbedArgs {
  std::string host, mark, out, key;
  double alpha = AlphaSchedule{}.base;
  double alpha_dc = AlphaSchedule{}.dc;
};

struct ExtractArgs {
  std::string image, key, out;
};

struct AttackArgs {
  std::string in, out, spec, type;
  std::optional<double> qf, variance, density, window, border, degrees, levels;
  std::uint64_t seed = kDefaultSeed;
};

struct EvaluateArgs {
  std::string mark, extracted;
  double threshold = kDefaultThreshold;
};

struct BenchArgs {
  std::string config, report, csv_dir;
};

void require_readable(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) throw ConfigError(fmt::format("{} '{}' is not a readable file", what, path));
}

void require_writable_parent(const std::string& path, const char* what) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw ConfigError(fmt::format("{} '{}': directory {} does not exist", what, path, parent.string()));
  }
}

int cmd_embed(const EmbedArgs& a, std::ostream& out) {
  require_readable(a.host, "host");
  require_readable(a.mark, "mark");
  require_writable_parent(a.out, "--out");
  require_writable_parent(a.key, "--key");
  const AlphaSchedule alpha{a.alpha, a.alpha_dc};
  alpha.validate();
  const GrayImage host = load_pgm(a.host);
  const GrayImage mark = load_pgm(a.mark);
  if (host.width() != mark.width() || host.height() != mark.height()) {
    throw DimensionError(fmt::format("host is {} but mark is {}; sizes must match", host.dims(), mark.dims()));
  }
  const EmbedResult r = embed(host, mark, alpha);
  save_pgm(a.out, r.watermarked);
  save_key(a.key, r.key);
  const double p = psnr(host, r.watermarked);
  out << (std::isinf(p) ? std::string("psnr_db=inf") : fmt::format("psnr_db={:.4f}", p)) << '\n';
  return kOk;
}

int cmd_extract(const ExtractArgs& a) {
  require_readable(a.image, "image");
  require_readable(a.key, "key");
  require_writable_parent(a.out, "--out");
  const WatermarkKey key = load_key(a.key);
  const GrayImage image = load_pgm(a.image);
  if (image.width() != key.n || image.height() != key.n) {
    throw DimensionError(fmt::format("image is {} but the key expects {}x{}", image.dims(), key.n, key.n));
  }
  save_pgm(a.out, extract(image, key));
  return kOk;
}

AttackSpec attack_spec_from(const AttackArgs& a, bool seed_given) {
  AttackSpec spec;
  if (!a.spec.empty()) {
    std::string text = a.spec;
    if (text.find('{') == std::string::npos) {
      require_readable(text, "--spec");
      std::ifstream in(text);
      text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParameterError(std::string("--spec: ") + e.what());
    }
    spec = doc.get<AttackSpec>();
    if (seed_given) spec.seed = a.seed;
  } else {
    const auto kind = parse_attack_kind(a.type);
    if (!kind) throw ParameterError(fmt::format("unknown attack type '{}'", a.type));
    spec.kind = *kind;
    spec.seed = a.seed;
    const std::pair<const char*, const std::optional<double>*> flags[] = {
        {"qf", &a.qf},         {"variance", &a.variance}, {"density", &a.density},
        {"window", &a.window}, {"border", &a.border},     {"degrees", &a.degrees},
        {"levels", &a.levels},
    };
    for (const auto& [name, value] : flags) {
      if (value->has_value()) spec.params[name] = **value;
    }
  }
  return spec.resolved();
}

int cmd_attack(const AttackArgs& a, bool seed_given, std::ostream& out, std::ostream& err) {
  require_readable(a.in, "input");
  require_writable_parent(a.out, "--out");
  const AttackSpec spec = attack_spec_from(a, seed_given);
  if (outside_tested_envelope(spec)) {
    err << "warning: " << spec.label() << " is outside the tested envelope (|degrees| <= 45)\n";
  }
  const GrayImage input = load_pgm(a.in);
  const GrayImage attacked = apply_attack(input, spec);
  save_pgm(a.out, attacked);
  out << nlohmann::json(spec).dump() << '\n';
  const double p = psnr(input, attacked);
  out << (std::isinf(p) ? std::string("psnr_db=inf") : fmt::format("psnr_db={:.4f}", p)) << '\n';
  return kOk;
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  require_readable(a.mark, "mark");
  require_readable(a.extracted, "extracted");
  const GrayImage mark = load_pgm(a.mark);
  const GrayImage extracted = load_pgm(a.extracted);
  if (mark.width() != extracted.width() || mark.height() != extracted.height()) {
    throw DimensionError(
        fmt::format("mark is {} but extracted image is {}", mark.dims(), extracted.dims()));
  }
  const DetectionResult r = detect(mark, extracted, a.threshold);
  out << "corr=" << format_correlation(r.correlation) << " detected=" << (r.detected ? "true" : "false")
      << '\n';
  return r.detected ? kOk : kNotDetected;
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  require_readable(a.config, "--config");
  if (!a.report.empty()) require_writable_parent(a.report, "--report");
  const BenchConfig config = BenchConfig::load(a.config);
  const BenchOutcome outcome = run_bench(config);
  if (!a.report.empty()) {
    std::ofstream f(a.report, std::ios::trunc);
    f << to_json(outcome.report).dump(2) << '\n';
    if (!f) throw Error("cannot write " + a.report);
  }
  if (!a.csv_dir.empty()) {
    fs::create_directories(a.csv_dir);
    const auto write = [&](const char* name, const std::string& text) {
      if (text.empty()) return;
      write_file(fs::path(a.csv_dir) / name, std::as_bytes(std::span(text.data(), text.size())));
    };
    write("qf_sweep.csv", outcome.qf_csv);
    write("median_sweep.csv", outcome.median_csv);
  }
  for (const auto& row : outcome.report.rows) {
    std::size_t hits = 0;
    for (const auto& c : row.watermarked) hits += c.result && c.result->detected;
    out << fmt::format("{:<28} detected {}/{}\n", row.attack.label(), hits, row.watermarked.size());
  }
  const bool ok = outcome.report.all_detected();
  out << "all_detected=" << (ok ? "true" : "false") << '\n';
  return ok ? kOk : kNotDetected;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Schur-factor DCT image watermarking", "schurmark"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolkitVersion));

  EmbedArgs embed_args;
  auto* embed_cmd = app.add_subcommand("embed", "Embed a mark into a host image");
  embed_cmd->add_option("host", embed_args.host, "Host PGM")->required();
  embed_cmd->add_option("mark", embed_args.mark, "Mark PGM (same size as host)")->required();
  embed_cmd->add_option("--alpha", embed_args.alpha, "Gain for all but the leading coefficient");
  embed_cmd->add_option("--alpha-dc", embed_args.alpha_dc, "Gain for the leading coefficient");
  embed_cmd->add_option("--out", embed_args.out, "Watermarked PGM")->required();
  embed_cmd->add_option("--key", embed_args.key, "Key file (.json for the JSON sidecar)")->required();

  ExtractArgs extract_args;
  auto* extract_cmd = app.add_subcommand("extract", "Extract the mark from an image");
  extract_cmd->add_option("image", extract_args.image, "Watermarked (possibly attacked) PGM")->required();
  extract_cmd->add_option("--key", extract_args.key, "Key file")->required();
  extract_cmd->add_option("--out", extract_args.out, "Extracted mark PGM")->required();

  AttackArgs attack_args;
  auto* attack_cmd = app.add_subcommand("attack", "Apply one attack to an image");
  attack_cmd->add_option("in", attack_args.in, "Input PGM")->required();
  auto* spec_opt = attack_cmd->add_option("--spec", attack_args.spec, "Attack spec as inline JSON or a file");
  auto* type_opt = attack_cmd->add_option("--type", attack_args.type, "Attack kind");
  spec_opt->excludes(type_opt);
  attack_cmd->add_option("--qf", attack_args.qf, "JPEG quality factor 1..100");
  attack_cmd->add_option("--variance", attack_args.variance, "Gaussian variance, [0,1] pixel scale");
  attack_cmd->add_option("--density", attack_args.density, "Salt-and-pepper density");
  attack_cmd->add_option("--window", attack_args.window, "Median window (odd)");
  attack_cmd->add_option("--border", attack_args.border, "Crop border in pixels");
  attack_cmd->add_option("--degrees", attack_args.degrees, "Rotation angle");
  attack_cmd->add_option("--levels", attack_args.levels, "Gray levels for color reduction");
  auto* seed_opt = attack_cmd->add_option("--seed", attack_args.seed, "Seed for random attacks");
  attack_cmd->add_option("--out", attack_args.out, "Attacked PGM")->required();

  EvaluateArgs evaluate_args;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Correlate a mark with an extracted mark");
  evaluate_cmd->add_option("mark", evaluate_args.mark, "Original mark PGM")->required();
  evaluate_cmd->add_option("extracted", evaluate_args.extracted, "Extracted mark PGM")->required();
  evaluate_cmd->add_option("--threshold", evaluate_args.threshold, "Detection threshold");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Run the robustness benchmark");
  bench_cmd->add_option("--config", bench_args.config, "Benchmark config JSON")->required();
  bench_cmd->add_option("--report", bench_args.report, "Report JSON output");
  bench_cmd->add_option("--csv-dir", bench_args.csv_dir, "Directory for the sweep CSVs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*embed_cmd) return cmd_embed(embed_args, out);
    if (*extract_cmd) return cmd_extract(extract_args);
    if (*attack_cmd) {
      if (attack_args.spec.empty() && attack_args.type.empty()) {
        throw ConfigError("attack: one of --spec or --type is required");
      }
      return cmd_attack(attack_args, seed_opt->count() > 0, out, err);
    }
    if (*evaluate_cmd) return cmd_evaluate(evaluate_args, out);
    if (*bench_cmd) return cmd_bench(bench_args, out);
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace schurmark::cli
