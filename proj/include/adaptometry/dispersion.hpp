#pragma once

// Inter-unit dispersion: Euclidean distances between unit points in
// indicator space, the maximal distance, the bounding-box volume and the
// diameter of the ball with that volume.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "correlation.hpp"
#include "csv.hpp"
#include "error.hpp"
#include "matrix.hpp"
#include "panel.hpp"

namespace adaptometry {

template <numeric_range U, numeric_range V>
double euclidean_distance(const U& u, const V& v) {
  if (std::ranges::size(u) != std::ranges::size(v)) throw Error("euclidean_distance: length mismatch");
  double sum = 0;
  auto iv = std::ranges::begin(v);
  for (auto iu = std::ranges::begin(u); iu != std::ranges::end(u); ++iu, ++iv) {
    const double d = static_cast<double>(*iu) - static_cast<double>(*iv);
    sum += d * d;
  }
  return std::sqrt(sum);
}

inline Matrix<double> distance_matrix(const PeriodSlice& slice) {
  const std::size_t m = slice.unit_count();
  Matrix<double> d(m, m, 0.0);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = k + 1; l < m; ++l)
      d(k, l) = d(l, k) = euclidean_distance(slice.values.row(k), slice.values.row(l));
  return d;
}

inline double max_distance(const Matrix<double>& distances) {
  double best = 0;
  for (double v : distances.data()) best = std::max(best, v);
  return best;
}

inline double max_distance(const PeriodSlice& slice) {
  if (slice.unit_count() < 2) throw Error("max_distance needs at least two units");
  return max_distance(distance_matrix(slice));
}

/// Product of per-indicator ranges, carried alongside its logarithm so that
/// wide panels do not lose the value to overflow.
struct BoundingVolume {
  double value = 0;      // +inf when out of double range
  double log_value = 0;  // -inf when value == 0
  bool overflow = false;
};

inline BoundingVolume bounding_volume(const PeriodSlice& slice) {
  if (slice.unit_count() < 1 || slice.indicator_count() < 1)
    throw Error("bounding_volume needs at least one unit and one indicator");
  BoundingVolume v{1.0, 0.0, false};
  for (std::size_t i = 0; i < slice.indicator_count(); ++i) {
    double lo = slice.values(0, i), hi = lo;
    for (std::size_t k = 1; k < slice.unit_count(); ++k) {
      lo = std::min(lo, slice.values(k, i));
      hi = std::max(hi, slice.values(k, i));
    }
    const double amplitude = hi - lo;
    v.value *= amplitude;
    v.log_value += amplitude > 0 ? std::log(amplitude) : -std::numeric_limits<double>::infinity();
  }
  if (v.log_value == -std::numeric_limits<double>::infinity()) {
    v.value = 0;
  } else if (!std::isfinite(v.value)) {
    v.value = std::numeric_limits<double>::infinity();
    v.overflow = true;
  }
  return v;
}

/// ln Γ(twice_x / 2) by exact recursion from Γ(1) = 1 and Γ(1/2) = √π.
inline double log_gamma_half_integer(long long twice_x) {
  if (twice_x <= 0) throw Error("log_gamma_half_integer: argument must be positive");
  double acc = 0;
  if (twice_x % 2 == 0) {
    // Γ(k) = (k-1)!
    for (long long j = 2; j < twice_x / 2; ++j) acc += std::log(static_cast<double>(j));
  } else {
    // Γ(k + 1/2) = √π · Π_{j<k} (j + 1/2)
    acc = 0.5 * std::log(std::numbers::pi);
    for (long long j = 0; j < twice_x / 2; ++j) acc += std::log(static_cast<double>(j) + 0.5);
  }
  return acc;
}

/// Diameter of the n-ball with volume exp(log_volume).
inline double ball_diameter_from_log(double log_volume, int n) {
  if (n < 1) throw Error("ball_diameter: dimension must be positive");
  if (log_volume == -std::numeric_limits<double>::infinity()) return 0.0;
  const double dn = static_cast<double>(n);
  const double log_d = std::log(2.0) + log_gamma_half_integer(n + 2LL) / dn -
                       0.5 * std::log(std::numbers::pi) + log_volume / dn;
  return std::exp(log_d);
}

/// d = 2 Γ(n/2 + 1)^(1/n) / √π · V^(1/n)
inline double ball_diameter(double volume, int n) {
  if (volume < 0 || std::isnan(volume)) throw Error("ball_diameter: volume must be non-negative");
  if (n == 1) return volume;  // the 1-ball is the interval itself
  return ball_diameter_from_log(volume == 0 ? -std::numeric_limits<double>::infinity() : std::log(volume), n);
}

struct DispersionSummary {
  std::string period;
  std::vector<std::string> units;
  Matrix<double> distances;
  double d_max = 0;
  BoundingVolume volume;
  double d_min = 0;
  int n = 0;
};

inline DispersionSummary summarize_dispersion(const PeriodSlice& slice) {
  if (slice.unit_count() < 2) throw Error("dispersion needs at least two units");
  DispersionSummary s;
  s.period = slice.period;
  s.units = slice.units;
  s.distances = distance_matrix(slice);
  s.d_max = max_distance(s.distances);
  s.n = static_cast<int>(slice.indicator_count());
  s.volume = bounding_volume(slice);
  s.d_min = s.volume.overflow ? ball_diameter_from_log(s.volume.log_value, s.n) : ball_diameter(s.volume.value, s.n);
  return s;
}

inline std::vector<DispersionSummary> dispersion_series(const IndicatorPanel& panel, const std::set<int>& exclude = {}) {
  const IndicatorPanel reduced = exclude_indicators(panel, exclude);
  std::vector<DispersionSummary> out;
  for (std::size_t p = 0; p < reduced.period_count(); ++p) out.push_back(summarize_dispersion(slice_period(reduced, p)));
  return out;
}

/// Full symmetric distance matrix with unit labels on both axes.
inline std::string write_distance_csv(const DispersionSummary& s, int decimals = 2) {
  std::string out = "unit";
  for (const auto& u : s.units) out += ',' + csv::escape(u);
  out += '\n';
  for (std::size_t k = 0; k < s.units.size(); ++k) {
    out += csv::escape(s.units[k]);
    for (std::size_t l = 0; l < s.units.size(); ++l) out += ',' + csv::format_fixed(s.distances(k, l), decimals);
    out += '\n';
  }
  return out;
}

}  // namespace adaptometry
