#pragma once

// Panel data model: prevalence rates indexed by (period, unit, indicator).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "csv.hpp"
#include "error.hpp"
#include "matrix.hpp"

namespace adaptometry {

struct Indicator {
  int id = 0;
  std::string name;

  bool operator==(const Indicator&) const = default;
};

/// Dense 3-axis table. Immutable after construction.
class IndicatorPanel {
 public:
  IndicatorPanel() = default;

  /// `values` is laid out period-major, then unit, then indicator.
  IndicatorPanel(std::vector<std::string> periods, std::vector<std::string> units,
                 std::vector<Indicator> indicators, std::vector<double> values)
      : periods_(std::move(periods)),
        units_(std::move(units)),
        indicators_(std::move(indicators)),
        values_(std::move(values)) {
    if (values_.size() != periods_.size() * units_.size() * indicators_.size())
      throw Error("panel value count does not match its dimensions");
  }

  const std::vector<std::string>& periods() const noexcept { return periods_; }
  const std::vector<std::string>& units() const noexcept { return units_; }
  const std::vector<Indicator>& indicators() const noexcept { return indicators_; }

  std::size_t period_count() const noexcept { return periods_.size(); }
  std::size_t unit_count() const noexcept { return units_.size(); }
  std::size_t indicator_count() const noexcept { return indicators_.size(); }

  double value(std::size_t period, std::size_t unit, std::size_t indicator) const {
    return values_[(period * units_.size() + unit) * indicators_.size() + indicator];
  }

  std::vector<int> indicator_ids() const {
    std::vector<int> ids;
    ids.reserve(indicators_.size());
    for (const auto& ind : indicators_) ids.push_back(ind.id);
    return ids;
  }

  std::optional<std::size_t> period_index(std::string_view label) const {
    auto it = std::find(periods_.begin(), periods_.end(), label);
    if (it == periods_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - periods_.begin());
  }

  std::optional<std::size_t> indicator_index(int id) const {
    auto it = std::find_if(indicators_.begin(), indicators_.end(),
                           [id](const Indicator& i) { return i.id == id; });
    if (it == indicators_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - indicators_.begin());
  }

  bool operator==(const IndicatorPanel&) const = default;

 private:
  std::vector<std::string> periods_;
  std::vector<std::string> units_;
  std::vector<Indicator> indicators_;
  std::vector<double> values_;
};

/// One period as a units x indicators matrix.
struct PeriodSlice {
  std::string period;
  std::vector<std::string> units;
  std::vector<int> indicator_ids;
  Matrix<double> values;

  std::size_t unit_count() const noexcept { return values.rows(); }
  std::size_t indicator_count() const noexcept { return values.cols(); }
};

struct Diagnostic {
  std::string location;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

struct ValidationReport {
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;

  bool ok() const noexcept { return errors.empty(); }
};

inline constexpr double kMinPrevalence = 0.0;
inline constexpr double kMaxPrevalence = 100.0;

/// Checks the panel invariants. Zero-variance (period, indicator) pairs are
/// warnings, everything else is an error.
inline ValidationReport validate(const IndicatorPanel& panel) {
  ValidationReport report;

  auto check_unique = [&](const std::vector<std::string>& labels, const char* what) {
    std::set<std::string> seen;
    for (const auto& l : labels) {
      if (!seen.insert(l).second)
        report.errors.push_back({std::string(what) + " " + l, std::string("duplicate ") + what + " label"});
    }
  };
  check_unique(panel.periods(), "period");
  check_unique(panel.units(), "unit");
  {
    std::set<int> seen;
    for (const auto& ind : panel.indicators())
      if (!seen.insert(ind.id).second)
        report.errors.push_back({"indicator " + std::to_string(ind.id), "duplicate indicator id"});
  }

  for (std::size_t p = 0; p < panel.period_count(); ++p) {
    for (std::size_t i = 0; i < panel.indicator_count(); ++i) {
      const auto location = "period " + panel.periods()[p] + ", indicator " +
                            std::to_string(panel.indicators()[i].id);
      bool constant = panel.unit_count() > 0;
      for (std::size_t u = 0; u < panel.unit_count(); ++u) {
        const double v = panel.value(p, u, i);
        if (!std::isfinite(v)) {
          report.errors.push_back({location + ", unit " + panel.units()[u], "value is not finite"});
        } else if (v < kMinPrevalence || v > kMaxPrevalence) {
          report.errors.push_back({location + ", unit " + panel.units()[u],
                                   "value " + csv::format_shortest(v) + " outside [0, 100]"});
        }
        if (v != panel.value(p, 0, i)) constant = false;
      }
      if (constant) report.warnings.push_back({location, "zero variance across units"});
    }
  }
  return report;
}

inline constexpr std::string_view kPanelHeader = "period,unit,indicator_id,indicator_name,value";

/// Parses the long-format panel CSV. Axis order follows first appearance.
inline IndicatorPanel parse_panel(std::string_view text) {
  std::vector<std::string> periods, units;
  std::vector<Indicator> indicators;
  std::map<std::string, std::size_t, std::less<>> period_pos, unit_pos;
  std::map<int, std::size_t> indicator_pos;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> cells;

  bool header_seen = false;
  csv::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto fields = csv::split_record(line);
    if (!fields) throw ParseError(line_no, "unterminated quoted field");
    if (!header_seen) {
      std::vector<std::string> trimmed;
      for (const auto& f : *fields) trimmed.emplace_back(csv::trim(f));
      std::string joined;
      for (std::size_t i = 0; i < trimmed.size(); ++i) joined += (i ? "," : "") + trimmed[i];
      if (joined != kPanelHeader)
        throw ParseError(line_no, "malformed header, expected `" + std::string(kPanelHeader) + "`");
      header_seen = true;
      return;
    }
    if (fields->size() != 5)
      throw ParseError(line_no, "expected 5 fields, found " + std::to_string(fields->size()));
    const std::string period(csv::trim((*fields)[0]));
    const std::string unit(csv::trim((*fields)[1]));
    const std::string name(csv::trim((*fields)[3]));
    if (period.empty()) throw ParseError(line_no, "empty period label");
    if (unit.empty()) throw ParseError(line_no, "empty unit label");
    auto id = csv::parse_int((*fields)[2]);
    if (!id) throw ParseError(line_no, "indicator_id is not an integer");
    auto value = csv::parse_double((*fields)[4]);
    if (!value || !std::isfinite(*value)) throw ParseError(line_no, "value is not a finite number");
    if (*value < kMinPrevalence || *value > kMaxPrevalence)
      throw ParseError(line_no, "value " + csv::format_shortest(*value) + " outside [0, 100]");

    auto intern = [](auto& pos, auto& list, const std::string& label) {
      auto [it, inserted] = pos.emplace(label, list.size());
      if (inserted) list.push_back(label);
      return it->second;
    };
    const std::size_t p = intern(period_pos, periods, period);
    const std::size_t u = intern(unit_pos, units, unit);
    const int iid = static_cast<int>(*id);
    auto [it, inserted] = indicator_pos.emplace(iid, indicators.size());
    if (inserted) {
      indicators.push_back({iid, name});
    } else if (indicators[it->second].name != name) {
      throw ParseError(line_no, "indicator " + std::to_string(iid) + " has conflicting names");
    }
    if (!cells.emplace(std::tuple{p, u, it->second}, *value).second)
      throw ParseError(line_no, "duplicate cell (" + period + ", " + unit + ", " + std::to_string(iid) + ")");
  });
  if (!header_seen) throw ParseError(0, "missing header");

  std::vector<double> values(periods.size() * units.size() * indicators.size());
  for (std::size_t p = 0; p < periods.size(); ++p)
    for (std::size_t u = 0; u < units.size(); ++u)
      for (std::size_t i = 0; i < indicators.size(); ++i) {
        auto it = cells.find({p, u, i});
        if (it == cells.end())
          throw ParseError(0, "missing cell (" + periods[p] + ", " + units[u] + ", " +
                                  std::to_string(indicators[i].id) + ")");
        values[(p * units.size() + u) * indicators.size() + i] = it->second;
      }
  return IndicatorPanel(std::move(periods), std::move(units), std::move(indicators), std::move(values));
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Serializes in the same schema `parse_panel` reads, period-major.
inline std::string write_panel_csv(const IndicatorPanel& panel) {
  std::string out(kPanelHeader);
  out += '\n';
  for (std::size_t p = 0; p < panel.period_count(); ++p)
    for (std::size_t u = 0; u < panel.unit_count(); ++u)
      for (std::size_t i = 0; i < panel.indicator_count(); ++i) {
        const auto& ind = panel.indicators()[i];
        out += csv::escape(panel.periods()[p]) + ',' + csv::escape(panel.units()[u]) + ',' +
               std::to_string(ind.id) + ',' + csv::escape(ind.name) + ',' +
               csv::format_shortest(panel.value(p, u, i)) + '\n';
      }
  return out;
}

/// Removes the given indicator columns from every period.
inline IndicatorPanel exclude_indicators(const IndicatorPanel& panel, const std::set<int>& ids) {
  for (int id : ids)
    if (!panel.indicator_index(id)) throw Error("unknown indicator id " + std::to_string(id));

  std::vector<std::size_t> keep;
  std::vector<Indicator> kept;
  for (std::size_t i = 0; i < panel.indicator_count(); ++i) {
    if (!ids.contains(panel.indicators()[i].id)) {
      keep.push_back(i);
      kept.push_back(panel.indicators()[i]);
    }
  }
  std::vector<double> values;
  values.reserve(panel.period_count() * panel.unit_count() * keep.size());
  for (std::size_t p = 0; p < panel.period_count(); ++p)
    for (std::size_t u = 0; u < panel.unit_count(); ++u)
      for (std::size_t i : keep) values.push_back(panel.value(p, u, i));
  return IndicatorPanel(panel.periods(), panel.units(), std::move(kept), std::move(values));
}

inline PeriodSlice slice_period(const IndicatorPanel& panel, std::size_t p) {
  PeriodSlice slice{panel.periods().at(p), panel.units(), panel.indicator_ids(),
                    Matrix<double>(panel.unit_count(), panel.indicator_count())};
  for (std::size_t u = 0; u < panel.unit_count(); ++u)
    for (std::size_t i = 0; i < panel.indicator_count(); ++i) slice.values(u, i) = panel.value(p, u, i);
  return slice;
}

inline PeriodSlice slice_period(const IndicatorPanel& panel, std::string_view period) {
  auto p = panel.period_index(period);
  if (!p) throw Error("unknown period " + std::string(period));
  return slice_period(panel, *p);
}

}  // namespace adaptometry
