#pragma once

// Full per-period pipeline and its JSON report.

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "correlation.hpp"
#include "dispersion.hpp"
#include "panel.hpp"
#include "variation.hpp"

namespace adaptometry {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;

struct PeriodReport {
  std::string period;
  double total_weight = 0;
  std::size_t edge_count = 0;
  std::vector<Edge> edges;
  std::map<int, int> degrees;
  std::vector<std::pair<int, int>> undefined_pairs;  // indicator ids
  double d_min = 0;
  double d_max = 0;
  std::optional<double> volume;      // empty when out of double range
  std::optional<double> log_volume;  // empty when volume == 0

  bool operator==(const PeriodReport&) const = default;
};

struct RunMetadata {
  double threshold = kDefaultThreshold;
  std::vector<int> excluded;
  std::string estimator = "sample";
  std::optional<std::string> flag_policy;
  std::vector<int> flagged;
  std::string input_digest;
  std::string tool_version = kToolVersion;
  std::string generated_at;

  bool operator==(const RunMetadata&) const = default;
};

struct AdaptometryReport {
  int schema_version = kReportSchemaVersion;
  RunMetadata metadata;
  std::vector<PeriodReport> periods;

  bool operator==(const AdaptometryReport&) const = default;
};

struct AnalyzeOptions {
  double threshold = kDefaultThreshold;
  std::set<int> exclude;
  ZeroVariancePolicy zero_variance = ZeroVariancePolicy::treat_as_undefined;
};

struct Analysis {
  IndicatorPanel panel;  // after exclusion
  std::vector<CorrelationNetwork> networks;
  std::vector<DispersionSummary> dispersion;
  std::vector<PeriodReport> periods;
};

inline Analysis analyze(const IndicatorPanel& input, const AnalyzeOptions& options = {}) {
  Analysis a{exclude_indicators(input, options.exclude), {}, {}, {}};
  for (std::size_t p = 0; p < a.panel.period_count(); ++p) {
    const PeriodSlice slice = slice_period(a.panel, p);
    auto net = build_network(correlation_matrix(slice, options.zero_variance), options.threshold);
    auto disp = summarize_dispersion(slice);

    PeriodReport r;
    r.period = slice.period;
    r.total_weight = net.total_weight;
    r.edge_count = net.edges.size();
    r.edges = net.edges;
    r.degrees = net.degrees;
    for (auto [i, j] : net.matrix.undefined_pairs)
      r.undefined_pairs.emplace_back(net.matrix.indicator_ids[i], net.matrix.indicator_ids[j]);
    r.d_min = disp.d_min;
    r.d_max = disp.d_max;
    if (!disp.volume.overflow) r.volume = disp.volume.value;
    if (std::isfinite(disp.volume.log_value)) r.log_volume = disp.volume.log_value;

    a.networks.push_back(std::move(net));
    a.dispersion.push_back(std::move(disp));
    a.periods.push_back(std::move(r));
  }
  return a;
}

inline void to_json(nlohmann::ordered_json& j, const Edge& e) {
  j = nlohmann::ordered_json{{"i", e.i}, {"j", e.j}, {"weight", e.weight}};
}

inline void from_json(const nlohmann::ordered_json& j, Edge& e) {
  j.at("i").get_to(e.i);
  j.at("j").get_to(e.j);
  j.at("weight").get_to(e.weight);
}

namespace detail {

inline nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

inline std::optional<double> read_optional_number(const nlohmann::ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace detail

inline void to_json(nlohmann::ordered_json& j, const PeriodReport& r) {
  nlohmann::ordered_json degrees = nlohmann::ordered_json::object();
  for (auto [id, d] : r.degrees) degrees[std::to_string(id)] = d;
  nlohmann::ordered_json undefined = nlohmann::ordered_json::array();
  for (auto [a, b] : r.undefined_pairs) undefined.push_back({a, b});
  j = nlohmann::ordered_json{
      {"period", r.period},
      {"total_weight", r.total_weight},
      {"edge_count", r.edge_count},
      {"edges", r.edges},
      {"degrees", degrees},
      {"undefined_pairs", undefined},
      {"d_min", r.d_min},
      {"d_max", r.d_max},
      {"volume", detail::optional_number(r.volume)},
      {"volume_overflow", !r.volume.has_value()},
      {"log_volume", detail::optional_number(r.log_volume)},
  };
}

inline void from_json(const nlohmann::ordered_json& j, PeriodReport& r) {
  j.at("period").get_to(r.period);
  j.at("total_weight").get_to(r.total_weight);
  j.at("edge_count").get_to(r.edge_count);
  j.at("edges").get_to(r.edges);
  r.degrees.clear();
  for (const auto& [k, v] : j.at("degrees").items()) r.degrees[std::stoi(k)] = v.get<int>();
  r.undefined_pairs.clear();
  for (const auto& p : j.at("undefined_pairs")) r.undefined_pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
  j.at("d_min").get_to(r.d_min);
  j.at("d_max").get_to(r.d_max);
  r.volume = detail::read_optional_number(j.at("volume"));
  r.log_volume = detail::read_optional_number(j.at("log_volume"));
}

inline void to_json(nlohmann::ordered_json& j, const RunMetadata& m) {
  j = nlohmann::ordered_json{
      {"threshold", m.threshold},
      {"excluded", m.excluded},
      {"estimator", m.estimator},
      {"flag_policy", m.flag_policy ? nlohmann::ordered_json(*m.flag_policy) : nlohmann::ordered_json(nullptr)},
      {"flagged", m.flagged},
      {"input_digest", m.input_digest},
      {"tool_version", m.tool_version},
      {"generated_at", m.generated_at},
  };
}

inline void from_json(const nlohmann::ordered_json& j, RunMetadata& m) {
  j.at("threshold").get_to(m.threshold);
  j.at("excluded").get_to(m.excluded);
  j.at("estimator").get_to(m.estimator);
  if (j.at("flag_policy").is_null()) m.flag_policy.reset();
  else m.flag_policy = j.at("flag_policy").get<std::string>();
  j.at("flagged").get_to(m.flagged);
  j.at("input_digest").get_to(m.input_digest);
  j.at("tool_version").get_to(m.tool_version);
  j.at("generated_at").get_to(m.generated_at);
}

inline void to_json(nlohmann::ordered_json& j, const AdaptometryReport& r) {
  j = nlohmann::ordered_json{{"schema_version", r.schema_version}, {"metadata", r.metadata}, {"periods", r.periods}};
}

inline void from_json(const nlohmann::ordered_json& j, AdaptometryReport& r) {
  j.at("schema_version").get_to(r.schema_version);
  j.at("metadata").get_to(r.metadata);
  j.at("periods").get_to(r.periods);
}

inline std::string serialize_report(const AdaptometryReport& r) { return nlohmann::ordered_json(r).dump(2) + "\n"; }

inline AdaptometryReport parse_report(const std::string& text) {
  return nlohmann::ordered_json::parse(text).get<AdaptometryReport>();
}

}  // namespace adaptometry
