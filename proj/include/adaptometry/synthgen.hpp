#pragma once

// Seeded one-factor generator for baseline and stressed synthetic panels.
//
// For each period and unit k a shared factor f_k ~ N(0, 1) is drawn, and
//   x_ik = clamp(mean_i + λ · f_k + ε_ik, 0, 100),  ε_ik ~ N(0, σ²)
// with λ and σ² taken from the period's regime:
//   baseline: λ = loading_baseline, σ = noise_sd
//   stressed: λ = loading_stressed, σ = noise_sd · sqrt(variance_multiplier)
//
// Random source: std::mt19937_64 seeded with `seed`, std::normal_distribution.
// Output is reproducible within one build.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "correlation.hpp"
#include "csv.hpp"
#include "dispersion.hpp"
#include "error.hpp"
#include "panel.hpp"

namespace adaptometry {

enum class Regime { baseline, stressed };

struct SynthPeriod {
  std::string label;
  Regime regime = Regime::baseline;
};

struct SynthConfig {
  int units = 0;
  int indicators = 0;
  std::vector<SynthPeriod> periods;
  std::vector<double> means{50.0};  // one per indicator, or a single value broadcast
  double noise_sd = 1.0;
  double loading_baseline = 0.0;
  double loading_stressed = 0.0;
  double variance_multiplier = 1.0;
  std::uint64_t seed = 0;
};

inline void validate_config(const SynthConfig& c) {
  if (c.units < 2) throw Error("synth: units must be >= 2");
  if (c.indicators < 1) throw Error("synth: indicators must be >= 1");
  if (c.periods.empty()) throw Error("synth: at least one period required");
  if (c.means.size() != 1 && c.means.size() != static_cast<std::size_t>(c.indicators))
    throw Error("synth: means must have 1 or `indicators` entries");
  for (double m : c.means)
    if (!std::isfinite(m)) throw Error("synth: means must be finite");
  if (!(c.noise_sd > 0) || !std::isfinite(c.noise_sd)) throw Error("synth: noise_sd must be > 0");
  if (!(c.loading_baseline >= 0)) throw Error("synth: loading_baseline must be >= 0");
  if (!(c.loading_stressed >= c.loading_baseline)) throw Error("synth: loading_stressed must be >= loading_baseline");
  if (!(c.variance_multiplier >= 1)) throw Error("synth: variance_multiplier must be >= 1");
  for (std::size_t i = 0; i < c.periods.size(); ++i)
    for (std::size_t j = i + 1; j < c.periods.size(); ++j)
      if (c.periods[i].label == c.periods[j].label) throw Error("synth: duplicate period " + c.periods[i].label);
}

/// Plain `key = value` file; `#` starts a comment. Keys:
///   units, indicators, periods (comma list of label:baseline|stressed),
///   mean or means, noise_sd, loading_baseline, loading_stressed,
///   variance_multiplier, seed
inline SynthConfig parse_synth_config(std::string_view text) {
  SynthConfig c;
  std::map<std::string, bool> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = csv::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
    const std::string key(csv::trim(line.substr(0, eq)));
    const std::string_view val = csv::trim(line.substr(eq + 1));
    if (seen[key]) throw ParseError(line_no, "duplicate key " + key);
    seen[key] = true;

    auto num = [&] {
      auto v = csv::parse_double(val);
      if (!v) throw ParseError(line_no, key + ": not a number");
      return *v;
    };
    auto integer = [&] {
      auto v = csv::parse_int(val);
      if (!v) throw ParseError(line_no, key + ": not an integer");
      return *v;
    };
    auto list = [&] {
      auto f = csv::split_record(val);
      if (!f) throw ParseError(line_no, key + ": bad list");
      return *f;
    };

    if (key == "units") c.units = static_cast<int>(integer());
    else if (key == "indicators") c.indicators = static_cast<int>(integer());
    else if (key == "noise_sd") c.noise_sd = num();
    else if (key == "loading_baseline") c.loading_baseline = num();
    else if (key == "loading_stressed") c.loading_stressed = num();
    else if (key == "variance_multiplier") c.variance_multiplier = num();
    else if (key == "seed") {
      const auto s = integer();
      if (s < 0) throw ParseError(line_no, "seed must be >= 0");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "mean" || key == "means") {
      if (seen["mean"] && seen["means"]) throw ParseError(line_no, "give either mean or means");
      c.means.clear();
      for (const auto& f : list()) {
        auto v = csv::parse_double(f);
        if (!v) throw ParseError(line_no, key + ": not a number list");
        c.means.push_back(*v);
      }
    } else if (key == "periods") {
      for (const auto& f : list()) {
        const auto item = csv::trim(f);
        const auto colon = item.rfind(':');
        if (colon == std::string_view::npos) throw ParseError(line_no, "period needs label:regime");
        const auto regime = csv::trim(item.substr(colon + 1));
        SynthPeriod p{std::string(csv::trim(item.substr(0, colon))), Regime::baseline};
        if (regime == "stressed") p.regime = Regime::stressed;
        else if (regime != "baseline") throw ParseError(line_no, "unknown regime " + std::string(regime));
        if (p.label.empty()) throw ParseError(line_no, "empty period label");
        c.periods.push_back(std::move(p));
      }
    } else {
      throw ParseError(line_no, "unknown key " + key);
    }
  }
  validate_config(c);
  return c;
}

inline IndicatorPanel generate_panel(const SynthConfig& config) {
  validate_config(config);
  const auto m = static_cast<std::size_t>(config.units);
  const auto n = static_cast<std::size_t>(config.indicators);

  std::vector<std::string> units(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::string digits = std::to_string(k + 1);
    units[k] = "U" + std::string(digits.size() < 3 ? 3 - digits.size() : 0, '0') + digits;
  }
  std::vector<Indicator> indicators(n);
  for (std::size_t i = 0; i < n; ++i) indicators[i] = {static_cast<int>(i + 1), "indicator " + std::to_string(i + 1)};
  std::vector<std::string> periods;
  for (const auto& p : config.periods) periods.push_back(p.label);

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> values;
  values.reserve(periods.size() * m * n);
  for (const auto& p : config.periods) {
    const bool stressed = p.regime == Regime::stressed;
    const double loading = stressed ? config.loading_stressed : config.loading_baseline;
    const double sd = config.noise_sd * (stressed ? std::sqrt(config.variance_multiplier) : 1.0);
    for (std::size_t k = 0; k < m; ++k) {
      const double factor = gauss(rng);
      for (std::size_t i = 0; i < n; ++i) {
        const double mean = config.means.size() == 1 ? config.means[0] : config.means[i];
        const double x = mean + loading * factor + sd * gauss(rng);
        values.push_back(std::clamp(x, kMinPrevalence, kMaxPrevalence));
      }
    }
  }
  return IndicatorPanel(std::move(periods), std::move(units), std::move(indicators), std::move(values));
}

struct StressContrast {
  double w_baseline = 0;
  double w_stressed = 0;
  double dmax_baseline = 0;
  double dmax_stressed = 0;
};

/// Mean total weight and mean d_max over the baseline and the stressed periods.
inline StressContrast stress_contrast(const SynthConfig& config, double r0 = kDefaultThreshold) {
  std::size_t nb = 0, ns = 0;
  for (const auto& p : config.periods) (p.regime == Regime::stressed ? ns : nb)++;
  if (nb == 0 || ns == 0) throw Error("stress_contrast needs baseline and stressed periods");

  const IndicatorPanel panel = generate_panel(config);
  StressContrast out;
  for (std::size_t p = 0; p < panel.period_count(); ++p) {
    const PeriodSlice slice = slice_period(panel, p);
    const double w = build_network(correlation_matrix(slice), r0).total_weight;
    const double dmax = max_distance(slice);
    if (config.periods[p].regime == Regime::stressed) {
      out.w_stressed += w;
      out.dmax_stressed += dmax;
    } else {
      out.w_baseline += w;
      out.dmax_baseline += dmax;
    }
  }
  out.w_baseline /= static_cast<double>(nb);
  out.dmax_baseline /= static_cast<double>(nb);
  out.w_stressed /= static_cast<double>(ns);
  out.dmax_stressed /= static_cast<double>(ns);
  return out;
}

}  // namespace adaptometry
