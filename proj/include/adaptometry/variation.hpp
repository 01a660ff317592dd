#pragma once

// Coefficient-of-variation profiling of indicators over a grouping axis
// (e.g. party support) and selection of high-dispersion indicators.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "correlation.hpp"
#include "csv.hpp"
#include "error.hpp"
#include "matrix.hpp"

namespace adaptometry {

enum class CvEstimator { sample, unnormalized };

inline std::string_view to_string(CvEstimator e) { return e == CvEstimator::sample ? "sample" : "unnormalized"; }

inline std::optional<CvEstimator> parse_estimator(std::string_view s) {
  if (s == "sample") return CvEstimator::sample;
  if (s == "unnormalized") return CvEstimator::unnormalized;
  return std::nullopt;
}

/// sample:       sqrt(Σ(x - x̄)² / (L - 1)) / x̄
/// unnormalized: sqrt(Σ(x - x̄)²) / x̄
template <numeric_range R>
double coefficient_of_variation(const R& values, CvEstimator estimator = CvEstimator::sample) {
  const std::size_t L = std::ranges::size(values);
  if (L < 2) throw Error("coefficient of variation needs at least two groups");
  double mean = 0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(L);
  if (!(mean > 0)) throw Error("coefficient of variation undefined for non-positive mean");
  double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double spread = estimator == CvEstimator::sample ? std::sqrt(ss / static_cast<double>(L - 1)) : std::sqrt(ss);
  return spread / mean;
}

/// Indicators x groups. An "overall" group column, if present in the input,
/// is held separately and never enters the CV.
struct GroupedIndicatorTable {
  std::vector<int> indicator_ids;
  std::vector<std::string> groups;
  Matrix<double> values;                 // indicator x group
  std::optional<std::vector<double>> overall;
};

inline bool is_overall_group(std::string_view label) {
  std::string lower;
  for (char c : label) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return lower == "overall" || lower == "in general";
}

inline constexpr std::string_view kGroupedHeader = "indicator_id,group,value";

inline GroupedIndicatorTable parse_grouped_table(std::string_view text) {
  std::vector<int> ids;
  std::vector<std::string> groups;
  std::map<int, std::size_t> id_pos;
  std::map<std::string, std::size_t, std::less<>> group_pos;
  std::map<std::pair<std::size_t, std::size_t>, double> cells;
  std::map<std::size_t, double> overall;

  bool header_seen = false;
  csv::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto fields = csv::split_record(line);
    if (!fields) throw ParseError(line_no, "unterminated quoted field");
    if (!header_seen) {
      std::string joined;
      for (std::size_t i = 0; i < fields->size(); ++i) joined += (i ? "," : "") + std::string(csv::trim((*fields)[i]));
      if (joined != kGroupedHeader)
        throw ParseError(line_no, "malformed header, expected `" + std::string(kGroupedHeader) + "`");
      header_seen = true;
      return;
    }
    if (fields->size() != 3) throw ParseError(line_no, "expected 3 fields");
    auto id = csv::parse_int((*fields)[0]);
    if (!id) throw ParseError(line_no, "indicator_id is not an integer");
    const std::string group(csv::trim((*fields)[1]));
    if (group.empty()) throw ParseError(line_no, "empty group label");
    auto value = csv::parse_double((*fields)[2]);
    if (!value || !std::isfinite(*value) || *value < 0) throw ParseError(line_no, "value must be a finite number >= 0");

    auto [it, inserted] = id_pos.emplace(static_cast<int>(*id), ids.size());
    if (inserted) ids.push_back(static_cast<int>(*id));
    if (is_overall_group(group)) {
      if (!overall.emplace(it->second, *value).second) throw ParseError(line_no, "duplicate overall cell");
      return;
    }
    auto [gt, ginserted] = group_pos.emplace(group, groups.size());
    if (ginserted) groups.push_back(group);
    if (!cells.emplace(std::pair{it->second, gt->second}, *value).second)
      throw ParseError(line_no, "duplicate cell (" + std::to_string(*id) + ", " + group + ")");
  });
  if (!header_seen) throw ParseError(0, "missing header");
  if (groups.size() < 2) throw ParseError(0, "at least two groups required");

  GroupedIndicatorTable t{ids, groups, Matrix<double>(ids.size(), groups.size()), std::nullopt};
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t g = 0; g < groups.size(); ++g) {
      auto it = cells.find({i, g});
      if (it == cells.end())
        throw ParseError(0, "missing cell (" + std::to_string(ids[i]) + ", " + groups[g] + ")");
      t.values(i, g) = it->second;
    }
  if (!overall.empty()) {
    if (overall.size() != ids.size()) throw ParseError(0, "overall column must cover every indicator");
    t.overall.emplace(ids.size());
    for (auto [i, v] : overall) (*t.overall)[i] = v;
  }
  return t;
}

struct VariationEntry {
  int id = 0;
  std::optional<double> cv_sample;
  std::optional<double> cv_unnormalized;
  std::string error;  // set when the CV is undefined

  std::optional<double> value(CvEstimator e) const { return e == CvEstimator::sample ? cv_sample : cv_unnormalized; }
};

struct VariationProfile {
  CvEstimator estimator = CvEstimator::sample;
  std::vector<VariationEntry> entries;  // table order
  std::vector<int> ranking;             // descending by selected CV, ties by ascending id

  const VariationEntry* find(int id) const {
    for (const auto& e : entries)
      if (e.id == id) return &e;
    return nullptr;
  }
};

/// Recomputes `ranking` from `entries` under `profile.estimator`.
inline void rank_profile(VariationProfile& profile) {
  std::vector<const VariationEntry*> defined;
  for (const auto& e : profile.entries)
    if (e.value(profile.estimator)) defined.push_back(&e);
  std::sort(defined.begin(), defined.end(), [&](const VariationEntry* a, const VariationEntry* b) {
    const double va = *a->value(profile.estimator), vb = *b->value(profile.estimator);
    if (va != vb) return va > vb;
    return a->id < b->id;
  });
  profile.ranking.clear();
  for (const auto* e : defined) profile.ranking.push_back(e->id);
}

inline VariationProfile variation_table(const GroupedIndicatorTable& table, CvEstimator estimator = CvEstimator::sample) {
  VariationProfile profile;
  profile.estimator = estimator;
  for (std::size_t i = 0; i < table.indicator_ids.size(); ++i) {
    VariationEntry e;
    e.id = table.indicator_ids[i];
    try {
      e.cv_sample = coefficient_of_variation(table.values.row(i), CvEstimator::sample);
      e.cv_unnormalized = coefficient_of_variation(table.values.row(i), CvEstimator::unnormalized);
    } catch (const Error& err) {
      e.cv_sample.reset();
      e.cv_unnormalized.reset();
      e.error = err.what();
    }
    profile.entries.push_back(std::move(e));
  }
  rank_profile(profile);
  return profile;
}

struct TopK {
  std::size_t k = 2;
};
struct CvThreshold {
  double t = 0;
};
using FlagPolicy = std::variant<TopK, CvThreshold>;

/// "topk:K" or "threshold:T".
inline std::optional<FlagPolicy> parse_flag_policy(std::string_view s) {
  if (s.starts_with("topk:")) {
    auto k = csv::parse_int(s.substr(5));
    if (!k || *k < 0) return std::nullopt;
    return TopK{static_cast<std::size_t>(*k)};
  }
  if (s.starts_with("threshold:")) {
    auto t = csv::parse_double(s.substr(10));
    if (!t || !(*t >= 0)) return std::nullopt;
    return CvThreshold{*t};
  }
  return std::nullopt;
}

inline std::set<int> flag_exclusions(const VariationProfile& profile, const FlagPolicy& policy) {
  std::set<int> out;
  if (const auto* top = std::get_if<TopK>(&policy)) {
    if (top->k > profile.ranking.size())
      throw Error("top_k: k = " + std::to_string(top->k) + " exceeds " + std::to_string(profile.ranking.size()) +
                  " ranked indicators");
    out.insert(profile.ranking.begin(), profile.ranking.begin() + static_cast<std::ptrdiff_t>(top->k));
  } else {
    const double t = std::get<CvThreshold>(policy).t;
    if (t < 0) throw Error("threshold must be non-negative");
    for (const auto& e : profile.entries)
      if (auto v = e.value(profile.estimator); v && *v > t) out.insert(e.id);
  }
  return out;
}

inline std::string write_profile_csv(const VariationProfile& profile, const std::set<int>& flagged) {
  std::string out = "indicator_id,cv_sample,cv_unnormalized,rank,flagged\n";
  for (const auto& e : profile.entries) {
    auto rank_it = std::find(profile.ranking.begin(), profile.ranking.end(), e.id);
    out += std::to_string(e.id) + ',' + (e.cv_sample ? csv::format_shortest(*e.cv_sample) : "NA") + ',' +
           (e.cv_unnormalized ? csv::format_shortest(*e.cv_unnormalized) : "NA") + ',' +
           (rank_it == profile.ranking.end() ? std::string("NA")
                                             : std::to_string(rank_it - profile.ranking.begin() + 1)) +
           ',' + (flagged.contains(e.id) ? "1" : "0") + '\n';
  }
  return out;
}

}  // namespace adaptometry
