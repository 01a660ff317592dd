#pragma once

// Pearson correlation matrices and thresholded correlation networks.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <iterator>
#include <limits>
#include <map>
#include <ranges>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "csv.hpp"
#include "error.hpp"
#include "matrix.hpp"
#include "panel.hpp"

namespace adaptometry {

inline constexpr double kDefaultThreshold = 0.7;

template <typename R>
concept numeric_range = std::ranges::sized_range<R> &&
                        std::convertible_to<std::ranges::range_value_t<R>, double>;

namespace detail {

template <numeric_range R>
bool is_constant(const R& r) {
  auto it = std::ranges::begin(r);
  const auto first = *it;
  return std::all_of(it, std::ranges::end(r), [&](const auto& v) { return v == first; });
}

}  // namespace detail

/// Pearson's r between two equally long samples, two-pass (means first).
///
/// Throws when lengths differ, when fewer than two observations are given,
/// or when either sample is constant (`ZeroVarianceError` with id -1; the
/// matrix builder maps it to a real indicator id).
template <numeric_range X, numeric_range Y>
double pearson(const X& x, const Y& y) {
  const std::size_t m = std::ranges::size(x);
  if (m != std::ranges::size(y)) throw Error("pearson: length mismatch");
  if (m < 2) throw Error("pearson: at least two observations required");
  if (detail::is_constant(x) || detail::is_constant(y)) throw ZeroVarianceError(-1);

  double mean_x = 0, mean_y = 0;
  for (double v : x) mean_x += v;
  for (double v : y) mean_y += v;
  mean_x /= static_cast<double>(m);
  mean_y /= static_cast<double>(m);

  double sxy = 0, sxx = 0, syy = 0;
  auto ix = std::ranges::begin(x);
  auto iy = std::ranges::begin(y);
  for (; ix != std::ranges::end(x); ++ix, ++iy) {
    const double dx = static_cast<double>(*ix) - mean_x;
    const double dy = static_cast<double>(*iy) - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

/// 1 iff |r| > r0, strictly.
inline int threshold_gate(double r, double r0) noexcept { return std::abs(r) > r0 ? 1 : 0; }

enum class ZeroVariancePolicy { error, treat_as_undefined };

/// Symmetric n x n matrix of r_ij. Undefined entries hold NaN.
struct CorrelationMatrix {
  std::vector<int> indicator_ids;
  Matrix<double> entries;
  std::set<std::pair<std::size_t, std::size_t>> undefined_pairs;  // (i, j), i < j, by index

  std::size_t size() const noexcept { return indicator_ids.size(); }
  bool defined(std::size_t i, std::size_t j) const {
    return !undefined_pairs.contains(std::minmax(i, j)) && !std::isnan(entries(i, j));
  }
};

inline CorrelationMatrix correlation_matrix(const PeriodSlice& slice,
                                            ZeroVariancePolicy policy = ZeroVariancePolicy::treat_as_undefined) {
  const std::size_t n = slice.indicator_count();
  if (slice.unit_count() < 2) throw Error("correlation needs at least two units");

  std::vector<std::vector<double>> columns(n);
  std::vector<bool> constant(n);
  for (std::size_t i = 0; i < n; ++i) {
    columns[i] = slice.values.column(i);
    constant[i] = detail::is_constant(columns[i]);
    if (constant[i] && policy == ZeroVariancePolicy::error) throw ZeroVarianceError(slice.indicator_ids[i]);
  }

  CorrelationMatrix out{slice.indicator_ids, Matrix<double>(n, n, std::numeric_limits<double>::quiet_NaN()), {}};
  for (std::size_t i = 0; i < n; ++i) {
    if (!constant[i]) out.entries(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (constant[i] || constant[j]) {
        out.undefined_pairs.emplace(i, j);
        continue;
      }
      const double r = pearson(columns[i], columns[j]);
      out.entries(i, j) = out.entries(j, i) = r;
    }
  }
  return out;
}

struct Edge {
  int i = 0;  // indicator id, smaller index first
  int j = 0;
  double weight = 0;  // |r_ij|

  bool operator==(const Edge&) const = default;
};

struct CorrelationNetwork {
  CorrelationMatrix matrix;
  double threshold = kDefaultThreshold;
  std::vector<Edge> edges;
  double total_weight = 0;
  std::map<int, int> degrees;  // every indicator id appears, possibly with 0
};

/// Keeps pairs with |r| > r0; the diagonal never contributes.
inline CorrelationNetwork build_network(CorrelationMatrix matrix, double r0 = kDefaultThreshold) {
  if (!(r0 > 0.0 && r0 < 1.0)) throw Error("threshold must lie in (0, 1)");
  CorrelationNetwork net;
  net.threshold = r0;
  for (int id : matrix.indicator_ids) net.degrees[id] = 0;
  const std::size_t n = matrix.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!matrix.defined(i, j)) continue;
      const double r = matrix.entries(i, j);
      if (!threshold_gate(r, r0)) continue;
      const int a = matrix.indicator_ids[i], b = matrix.indicator_ids[j];
      net.edges.push_back({a, b, std::abs(r)});
      net.total_weight += std::abs(r);
      ++net.degrees[a];
      ++net.degrees[b];
    }
  net.matrix = std::move(matrix);
  return net;
}

struct DegreeCounts {
  std::map<int, int> counts;
  int sum = 0;
};

/// Strong-edge counts for `report_ids`; edges to unreported indicators count.
inline DegreeCounts degree_counts(const CorrelationNetwork& network, const std::vector<int>& report_ids) {
  DegreeCounts out;
  for (int id : report_ids) {
    auto it = network.degrees.find(id);
    if (it == network.degrees.end()) throw Error("unknown indicator id " + std::to_string(id));
    out.counts[id] = it->second;
    out.sum += it->second;
  }
  return out;
}

struct WeightPoint {
  std::string period;
  double total_weight = 0;
};

inline CorrelationNetwork period_network(const IndicatorPanel& panel, std::size_t period, double r0,
                                         ZeroVariancePolicy policy = ZeroVariancePolicy::treat_as_undefined) {
  return build_network(correlation_matrix(slice_period(panel, period), policy), r0);
}

inline std::vector<WeightPoint> weight_series(const IndicatorPanel& panel, double r0 = kDefaultThreshold,
                                              const std::set<int>& exclude = {},
                                              ZeroVariancePolicy policy = ZeroVariancePolicy::treat_as_undefined) {
  const IndicatorPanel reduced = exclude_indicators(panel, exclude);
  std::vector<WeightPoint> out;
  for (std::size_t p = 0; p < reduced.period_count(); ++p)
    out.push_back({reduced.periods()[p], period_network(reduced, p, r0, policy).total_weight});
  return out;
}

/// Matrix as CSV: header row and column of indicator ids, "NA" where undefined.
inline std::string write_matrix_csv(const CorrelationMatrix& m, int decimals = 2) {
  std::string out = "id";
  for (int id : m.indicator_ids) out += ',' + std::to_string(id);
  out += '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += std::to_string(m.indicator_ids[i]);
    for (std::size_t j = 0; j < m.size(); ++j) out += ',' + csv::format_fixed(m.entries(i, j), decimals);
    out += '\n';
  }
  return out;
}

}  // namespace adaptometry
