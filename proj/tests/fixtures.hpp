#pragma once

#include <map>
#include <string>
#include <vector>

#include "adaptometry.hpp"

#ifndef ADAPTOMETRY_SOURCE_DIR
#error "ADAPTOMETRY_SOURCE_DIR must be defined by the build"
#endif

namespace fixtures {

inline std::string source_path(const std::string& rel) { return std::string(ADAPTOMETRY_SOURCE_DIR) + "/" + rel; }

inline const adaptometry::IndicatorPanel& fears_panel() {
  static const auto panel = adaptometry::parse_panel(adaptometry::read_text_file(source_path("data/ukraine_fears.csv")));
  return panel;
}

inline const std::vector<std::string>& fear_periods() {
  static const std::vector<std::string> p{"2009-08", "2010-03", "2011-03", "2012-07"};
  return p;
}

/// Rows of a golden CSV as string fields, header first.
inline std::vector<std::vector<std::string>> read_rows(const std::string& rel) {
  std::vector<std::vector<std::string>> rows;
  adaptometry::csv::for_each_line(adaptometry::read_text_file(source_path(rel)),
                                  [&](std::size_t, std::string_view line) {
                                    rows.push_back(*adaptometry::csv::split_record(line));
                                  });
  return rows;
}

/// Published correlation matrix for a period, 2-decimal entries.
inline adaptometry::Matrix<double> golden_correlation(const std::string& period) {
  const auto rows = read_rows("tests/golden/correlation_" + period + ".csv");
  const std::size_t n = rows.size() - 1;
  adaptometry::Matrix<double> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = std::stod(rows[i + 1][j + 1]);
  return m;
}

struct GoldenDistance {
  std::string period, a, b;
  double value;
};

inline std::vector<GoldenDistance> golden_distances() {
  std::vector<GoldenDistance> out;
  const auto rows = read_rows("tests/golden/distances.csv");
  for (std::size_t r = 1; r < rows.size(); ++r) out.push_back({rows[r][0], rows[r][1], rows[r][2], std::stod(rows[r][3])});
  return out;
}

/// Published degree table: id -> per-period counts; id 0 holds the sums.
inline std::map<int, std::vector<int>> golden_degrees() {
  std::map<int, std::vector<int>> out;
  const auto rows = read_rows("tests/golden/degrees.csv");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const int id = rows[r][0] == "sum" ? 0 : std::stoi(rows[r][0]);
    for (std::size_t c = 1; c < rows[r].size(); ++c) out[id].push_back(std::stoi(rows[r][c]));
  }
  return out;
}

inline adaptometry::VariationProfile printed_cv_profile() {
  adaptometry::VariationProfile p;
  p.estimator = adaptometry::CvEstimator::unnormalized;
  const auto rows = read_rows("tests/golden/printed_cv.csv");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    adaptometry::VariationEntry e;
    e.id = std::stoi(rows[r][0]);
    e.cv_unnormalized = std::stod(rows[r][1]);
    p.entries.push_back(e);
  }
  adaptometry::rank_profile(p);
  return p;
}

inline std::size_t unit_index(const std::string& name) {
  const auto& u = fears_panel().units();
  return static_cast<std::size_t>(std::find(u.begin(), u.end(), name) - u.begin());
}

}  // namespace fixtures
