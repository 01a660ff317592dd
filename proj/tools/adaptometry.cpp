// adaptometry: command-line driver for the correlation adaptometry pipeline.
//
//   adaptometry analyze --input panel.csv [--threshold 0.7] [--exclude 17,19]
//                       [--grouped table.csv --cv-estimator sample|unnormalized
//                        --flag-policy topk:K|threshold:T] [--out DIR] [--plots]
//   adaptometry synth --config synth.conf --seed N --out DIR [--sweep COUNT]

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <CLI11.hpp>

#include "adaptometry.hpp"

namespace fs = std::filesystem;
namespace am = adaptometry;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

bool use_color() { return std::getenv("ADAPTOMETRY_NO_COLOR") == nullptr && ::isatty(STDERR_FILENO); }

void diag(const char* level, const char* color, const std::string& msg) {
  if (use_color()) std::cerr << color << level << "\033[0m: " << msg << '\n';
  else std::cerr << level << ": " << msg << '\n';
}
void error(const std::string& msg) { diag("error", "\033[1;31m", msg); }
void warning(const std::string& msg) { diag("warning", "\033[1;33m", msg); }

void write_atomic(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw am::Error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw am::Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out = "sha256:";
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xF]);
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Period labels become file names.
std::string file_stem(const std::string& label) {
  std::string out;
  for (char c : label) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "_" : out;
}

std::set<int> parse_id_list(const std::string& text) {
  std::set<int> ids;
  if (am::csv::trim(text).empty()) return ids;
  auto fields = am::csv::split_record(text);
  for (const auto& f : *fields) {
    auto v = am::csv::parse_int(f);
    if (!v) throw CLI::ValidationError("--exclude", "not an integer list: " + text);
    ids.insert(static_cast<int>(*v));
  }
  return ids;
}

struct AnalyzeArgs {
  std::string input;
  double threshold = am::kDefaultThreshold;
  std::string exclude;
  std::string grouped;
  std::string estimator = "sample";
  std::string flag_policy = "topk:2";
  std::string out = ".";
  bool plots = false;
};

int run_analyze(const AnalyzeArgs& args) {
  if (!fs::is_regular_file(args.input)) {
    error("input file not found: " + args.input);
    return kExitUsage;
  }
  if (!args.grouped.empty() && !fs::is_regular_file(args.grouped)) {
    error("grouped table not found: " + args.grouped);
    return kExitUsage;
  }
  const auto estimator = am::parse_estimator(args.estimator);
  const auto policy = am::parse_flag_policy(args.flag_policy);
  if (!estimator || !policy) {
    error("bad --cv-estimator or --flag-policy");
    return kExitUsage;
  }

  const std::string text = am::read_text_file(args.input);
  am::IndicatorPanel panel;
  try {
    panel = am::parse_panel(text);
  } catch (const am::Error& e) {
    error(args.input + ": " + e.what());
    return kExitValidation;
  }
  const auto validation = am::validate(panel);
  for (const auto& d : validation.errors) error(d.location + ": " + d.message);
  if (!validation.ok()) return kExitValidation;
  for (const auto& d : validation.warnings) warning(d.location + ": " + d.message);

  am::AnalyzeOptions options;
  options.threshold = args.threshold;
  options.exclude = parse_id_list(args.exclude);
  for (int id : options.exclude)
    if (!panel.indicator_index(id)) {
      error("--exclude: unknown indicator id " + std::to_string(id));
      return kExitUsage;
    }

  am::AdaptometryReport report;
  report.metadata.threshold = args.threshold;
  report.metadata.excluded.assign(options.exclude.begin(), options.exclude.end());
  report.metadata.estimator = args.estimator;
  report.metadata.input_digest = sha256_hex(text);
  report.metadata.generated_at = utc_timestamp();

  std::string variation_csv;
  if (!args.grouped.empty()) {
    am::GroupedIndicatorTable table;
    try {
      table = am::parse_grouped_table(am::read_text_file(args.grouped));
    } catch (const am::Error& e) {
      error(args.grouped + ": " + e.what());
      return kExitValidation;
    }
    const auto profile = am::variation_table(table, *estimator);
    for (const auto& e : profile.entries)
      if (!e.error.empty()) warning("indicator " + std::to_string(e.id) + ": " + e.error);
    std::set<int> flagged;
    try {
      flagged = am::flag_exclusions(profile, *policy);
    } catch (const am::Error& e) {
      error(std::string("--flag-policy: ") + e.what());
      return kExitUsage;
    }
    report.metadata.flag_policy = args.flag_policy;
    report.metadata.flagged.assign(flagged.begin(), flagged.end());
    variation_csv = am::write_profile_csv(profile, flagged);
  }

  am::Analysis analysis;
  try {
    analysis = am::analyze(panel, options);
  } catch (const am::Error& e) {
    error(e.what());
    return kExitValidation;
  }
  report.periods = analysis.periods;

  const fs::path out(args.out);
  write_atomic(out / "report.json", am::serialize_report(report));
  for (std::size_t p = 0; p < analysis.periods.size(); ++p) {
    const auto stem = file_stem(analysis.periods[p].period) + ".csv";
    write_atomic(out / "matrices" / stem, am::write_matrix_csv(analysis.networks[p].matrix));
    write_atomic(out / "distances" / stem, am::write_distance_csv(analysis.dispersion[p]));
  }
  if (!variation_csv.empty()) write_atomic(out / "variation.csv", variation_csv);

  if (args.plots) {
    std::vector<double> w, dmin, dmax;
    for (const auto& r : analysis.periods) {
      w.push_back(r.total_weight);
      dmin.push_back(r.d_min);
      dmax.push_back(r.d_max);
    }
    const auto& labels = analysis.panel.periods();
    write_atomic(out / "weight.svg",
                 am::svg::line_chart("Correlation network total weight", "w", labels, {{"w", w}}));
    write_atomic(out / "dispersion.svg",
                 am::svg::line_chart("Dispersion", "distance", labels, {{"d_min", dmin}, {"d_max", dmax}}));
  }
  return kExitOk;
}

struct SynthArgs {
  std::string config;
  std::uint64_t seed = 0;
  std::string out = ".";
  double threshold = am::kDefaultThreshold;
  std::size_t sweep = 1;
};

int run_synth(const SynthArgs& args) {
  am::SynthConfig config;
  try {
    config = am::parse_synth_config(am::read_text_file(args.config));
  } catch (const am::Error& e) {
    error(args.config + ": " + e.what());
    return kExitUsage;
  }
  config.seed = args.seed;
  const fs::path out(args.out);
  write_atomic(out / "panel.csv", am::write_panel_csv(am::generate_panel(config)));

  std::string contrast = "seed,w_baseline,w_stressed,dmax_baseline,dmax_stressed\n";
  try {
    for (std::size_t s = 0; s < args.sweep; ++s) {
      auto c = config;
      c.seed = args.seed + s;
      const auto r = am::stress_contrast(c, args.threshold);
      contrast += std::to_string(c.seed) + ',' + am::csv::format_shortest(r.w_baseline) + ',' +
                  am::csv::format_shortest(r.w_stressed) + ',' + am::csv::format_shortest(r.dmax_baseline) + ',' +
                  am::csv::format_shortest(r.dmax_stressed) + '\n';
    }
  } catch (const am::Error& e) {
    error(std::string("contrast: ") + e.what());
    return kExitUsage;
  }
  write_atomic(out / "contrast.csv", contrast);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation adaptometry: adaptation tension indicators for panel data"};
  app.set_version_flag("--version", std::string(am::kToolVersion));
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Run correlation and dispersion analysis on a panel CSV");
  an->add_option("--input", analyze.input, "Panel CSV (period,unit,indicator_id,indicator_name,value)")->required();
  an->add_option("--threshold", analyze.threshold, "Correlation threshold r0")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0))
      ->check([](const std::string& s) {
        const double v = std::stod(s);
        return (v > 0 && v < 1) ? std::string() : std::string("threshold must lie strictly within (0, 1)");
      });
  an->add_option("--exclude", analyze.exclude, "Comma-separated indicator ids to drop");
  an->add_option("--grouped", analyze.grouped, "Grouped table CSV (indicator_id,group,value)");
  an->add_option("--cv-estimator", analyze.estimator, "CV estimator")
      ->capture_default_str()
      ->check(CLI::IsMember({"sample", "unnormalized"}));
  an->add_option("--flag-policy", analyze.flag_policy, "topk:K or threshold:T")->capture_default_str()->check(
      [](const std::string& s) { return am::parse_flag_policy(s) ? std::string() : "expected topk:K or threshold:T"; });
  an->add_option("--out", analyze.out, "Output directory")->capture_default_str();
  an->add_flag("--plots", analyze.plots, "Also write weight.svg and dispersion.svg");

  SynthArgs synth;
  auto* sy = app.add_subcommand("synth", "Generate a synthetic baseline/stressed panel");
  sy->add_option("--config", synth.config, "key = value config file")->required()->check(CLI::ExistingFile);
  sy->add_option("--seed", synth.seed, "RNG seed")->required();
  sy->add_option("--out", synth.out, "Output directory")->capture_default_str();
  sy->add_option("--threshold", synth.threshold, "Correlation threshold r0 for the contrast")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  sy->add_option("--sweep", synth.sweep, "Number of consecutive seeds in contrast.csv")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Error& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*an) return run_analyze(analyze);
    return run_synth(synth);
  } catch (const CLI::Error& e) {
    error(e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    error(e.what());
    return kExitValidation;
  }
}
