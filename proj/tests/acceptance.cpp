// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "sign_test.hpp"

namespace am = adaptometry;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double v, int decimals = 4) { return am::csv::format_fixed(v, decimals); }

const std::array<double, 4> kPublishedWeights{15.72, 23.20, 22.91, 25.78};
const std::array<double, 4> kPublishedDmax{31.59, 46.16, 38.24, 40.72};

Outcome correlation_golden() {
  Outcome o;
  int total = 0, exact = 0;
  double worst = 0;
  for (const auto& period : fixtures::fear_periods()) {
    const auto m = am::correlation_matrix(am::slice_period(fixtures::fears_panel(), period));
    const auto golden = fixtures::golden_correlation(period);
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        ++total;
        const double rounded = std::round(m.entries(i, j) * 100) / 100;
        if (std::abs(rounded - golden(i, j)) < 1e-9) ++exact;
        worst = std::max(worst, std::abs(m.entries(i, j) - golden(i, j)));
      }
  }
  o.require(total == 4 * 171, "expected 684 entries, got " + std::to_string(total));
  o.require(worst <= 0.005 + 1e-12, "max |r - published| = " + fmt(worst));
  o.require(exact >= static_cast<int>(std::ceil(0.99 * total)), "exact matches " + std::to_string(exact));
  o.detail = std::to_string(exact) + "/" + std::to_string(total) + " exact at 2 decimals, max deviation " + fmt(worst) +
             (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

Outcome weight_series() {
  Outcome o;
  const auto s = am::weight_series(fixtures::fears_panel(), 0.7, {});
  std::string values;
  for (std::size_t p = 0; p < 4; ++p) {
    values += (p ? ", " : "") + fmt(s[p].total_weight, 3);
    o.require(std::abs(s[p].total_weight - kPublishedWeights[p]) <= 0.30, s[p].period + " off by more than 0.30");
  }
  o.require(s[0].total_weight < s[2].total_weight && s[2].total_weight < s[1].total_weight &&
                s[1].total_weight < s[3].total_weight,
            "ordering 2009 < 2011 < 2010 < 2012 violated");
  o.detail = "w = (" + values + ")" + (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

Outcome distance_golden() {
  Outcome o;
  // The published distances are reproduced on the 17-fear space (17 and 19 removed).
  const auto panel = am::exclude_indicators(fixtures::fears_panel(), {17, 19});
  const auto series = am::dispersion_series(panel);
  double worst = 0;
  int checked = 0;
  for (const auto& g : fixtures::golden_distances()) {
    const auto p = *panel.period_index(g.period);
    const double d = series[p].distances(fixtures::unit_index(g.a), fixtures::unit_index(g.b));
    worst = std::max(worst, std::abs(d - g.value));
    ++checked;
  }
  o.require(checked == 60, "expected 60 entries");
  o.require(worst <= 0.50, "max |d - published| = " + fmt(worst));
  std::string dmax;
  for (std::size_t p = 0; p < 4; ++p) {
    dmax += (p ? ", " : "") + fmt(series[p].d_max, 2);
    o.require(std::abs(series[p].d_max - kPublishedDmax[p]) <= 0.50, series[p].period + " d_max off");
  }
  o.detail = std::to_string(checked) + " entries, max deviation " + fmt(worst) + ", d_max = (" + dmax + ")" +
             (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

Outcome degree_counts() {
  Outcome o;
  const auto golden = fixtures::golden_degrees();
  std::vector<int> report;
  for (const auto& [id, v] : golden)
    if (id != 0) report.push_back(id);
  std::string sums, fear1;
  for (std::size_t p = 0; p < 4; ++p) {
    const auto net = am::period_network(fixtures::fears_panel(), p, 0.7);
    const auto d = am::degree_counts(net, report);
    sums += (p ? ", " : "") + std::to_string(d.sum);
    fear1 += (p ? ", " : "") + std::to_string(d.counts.at(1));
    o.require(std::abs(d.sum - golden.at(0)[p]) <= 2, "sum " + fixtures::fear_periods()[p]);
    o.require(std::abs(d.counts.at(1) - golden.at(1)[p]) <= 1, "fear 1 " + fixtures::fear_periods()[p]);
  }
  o.detail = "sums = (" + sums + "), fear 1 = (" + fear1 + ")" + (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

Outcome cv_reproduction() {
  Outcome o;
  const auto table = am::parse_grouped_table(am::read_text_file(fixtures::source_path("data/ukraine_fears_by_party.csv")));
  const auto unnorm = am::variation_table(table, am::CvEstimator::unnormalized);
  const std::array<std::pair<int, double>, 3> rows{{{1, 0.16}, {2, 0.27}, {4, 0.72}}};
  std::string got;
  for (auto [id, expected] : rows) {
    const double v = unnorm.find(id)->cv_unnormalized.value();
    got += (got.empty() ? "" : ", ") + fmt(v, 3);
    o.require(std::abs(v - expected) <= 0.02, "fear " + std::to_string(id));
  }
  const auto flagged = am::flag_exclusions(fixtures::printed_cv_profile(), am::TopK{2});
  o.require(flagged == std::set<int>{17, 19}, "top_k(2) on printed column");

  // Independent evaluation of sqrt(Σ(x - x̄)²/(L - 1)) / x̄.
  const std::array<double, 19> oracle{0.0629152870, 0.1120350718, 0.2986000122, 0.2921186973, 0.2399056797,
                                      0.3587974807, 0.2010204875, 0.2501441338, 0.2588279949, 0.2507396466,
                                      0.1986145306, 0.7979128680, 0.3899984172, 0.6373774392, 0.4161455074,
                                      0.4311557918, 0.9965505244, 0.6682080945, 0.5669933699};
  const auto sample = am::variation_table(table, am::CvEstimator::sample);
  double worst = 0;
  for (std::size_t i = 0; i < 19; ++i) worst = std::max(worst, std::abs(sample.entries[i].cv_sample.value() - oracle[i]));
  o.require(worst <= 1e-9, "sample estimator vs oracle " + std::to_string(worst));
  o.detail = "unnormalized (1,2,4) = (" + got + "), printed top-2 = {17,19}" + (flagged == std::set<int>{17, 19} ? "" : " NOT") +
             ", sample max dev " + std::to_string(worst) + (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

Outcome dmin_properties() {
  Outcome o;
  for (double a : {0.5, 3.0, 17.0}) o.require(am::ball_diameter(a, 1) == a, "n=1 identity");
  o.require(std::abs(am::ball_diameter(std::numbers::pi, 2) - 2.0) <= 1e-9, "n=2 circle");
  for (int n = 1; n <= 30; ++n)
    for (double side : {0.5, 4.0, 60.0})
      o.require(am::ball_diameter_from_log(n * std::log(side), n) <= side * std::sqrt(n) * (1 + 1e-12), "cube bound");
  for (int n = 1; n <= 25; ++n) {
    double g = (n % 2 == 0) ? 1.0 : std::sqrt(std::numbers::pi);
    for (double x = (n % 2 == 0) ? 1.0 : 0.5; x <= n / 2.0 + 1e-9; x += 1.0) g *= x;
    for (double v : {1e-3, 2.0, 1e6}) {
      const double plain = 2 * std::pow(g, 1.0 / n) / std::sqrt(std::numbers::pi) * std::pow(v, 1.0 / n);
      o.require(std::abs(am::ball_diameter(v, n) - plain) <= 1e-9 * plain, "log/plain n=" + std::to_string(n));
    }
  }
  const auto base = am::dispersion_series(fixtures::fears_panel());
  for (double c : {0.5, 2.0, 1.3}) {
    std::vector<double> values;
    const auto& p = fixtures::fears_panel();
    for (std::size_t t = 0; t < p.period_count(); ++t)
      for (std::size_t u = 0; u < p.unit_count(); ++u)
        for (std::size_t i = 0; i < p.indicator_count(); ++i) values.push_back(c * p.value(t, u, i) / 2.0);
    const am::IndicatorPanel scaled(p.periods(), p.units(), p.indicators(), values);
    const auto s = am::dispersion_series(scaled);
    for (std::size_t t = 0; t < s.size(); ++t)
      o.require(std::abs(s[t].d_min - c / 2.0 * base[t].d_min) <= 1e-9 * base[t].d_min, "homogeneity");
  }
  if (o.pass) o.detail = "n=1 identity, circle, cube bound n<=30, log/plain n<=25, homogeneity";
  return o;
}

Outcome property_suites() {
  Outcome o;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0, 100), coef(0.1, 5), shift(-20, 20);
  std::normal_distribution<double> gauss(0, 1);
  int panels = 0;
  for (int t = 0; t < 150; ++t) {
    const std::size_t m = 2 + rng() % 9, n = 2 + rng() % 11;
    am::PeriodSlice s{"p", {}, {}, am::Matrix<double>(m, n)};
    for (std::size_t k = 0; k < m; ++k) s.units.push_back("u" + std::to_string(k));
    for (std::size_t i = 0; i < n; ++i) s.indicator_ids.push_back(static_cast<int>(i + 1));
    const double loading = u(rng) / 5;
    for (std::size_t k = 0; k < m; ++k) {
      const double f = gauss(rng);
      for (std::size_t i = 0; i < n; ++i) s.values(k, i) = std::clamp(50 + loading * f + 10 * gauss(rng), 0.0, 100.0);
    }
    ++panels;

    // Pearson affine invariance.
    const auto x = s.values.column(0), y = s.values.column(1);
    const double r = am::pearson(x, y), a = coef(rng), b = shift(rng);
    std::vector<double> px(m), nx(m);
    for (std::size_t k = 0; k < m; ++k) {
      px[k] = a * x[k] + b;
      nx[k] = -a * x[k] + b;
    }
    o.require(std::abs(am::pearson(px, y) - r) <= 1e-9 && std::abs(am::pearson(nx, y) + r) <= 1e-9, "pearson affine");
    o.require(std::abs(am::pearson(y, x) - r) <= 1e-12, "pearson symmetry");

    // w monotone in r0.
    const auto cm = am::correlation_matrix(s);
    double prev = std::numeric_limits<double>::infinity();
    for (double r0 = 0.05; r0 < 1; r0 += 0.05) {
      const double w = am::build_network(cm, r0).total_weight;
      o.require(w <= prev, "w monotone");
      prev = w;
    }

    // Permutation invariance.
    std::vector<std::size_t> pu(m), pi(n);
    std::iota(pu.begin(), pu.end(), 0);
    std::iota(pi.begin(), pi.end(), 0);
    std::shuffle(pu.begin(), pu.end(), rng);
    std::shuffle(pi.begin(), pi.end(), rng);
    am::PeriodSlice ps{"p", {}, {}, am::Matrix<double>(m, n)};
    for (auto k : pu) ps.units.push_back(s.units[k]);
    for (auto i : pi) ps.indicator_ids.push_back(s.indicator_ids[i]);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t i = 0; i < n; ++i) ps.values(k, i) = s.values(pu[k], pi[i]);
    o.require(std::abs(am::build_network(am::correlation_matrix(ps)).total_weight - am::build_network(cm).total_weight) <= 1e-12,
              "w permutation");

    // Metric axioms.
    const auto d = am::distance_matrix(s);
    for (std::size_t k = 0; k < m; ++k) {
      o.require(d(k, k) == 0, "zero diagonal");
      for (std::size_t l = 0; l < m; ++l) {
        o.require(d(k, l) == d(l, k) && d(k, l) >= 0, "symmetry");
        for (std::size_t q = 0; q < m; ++q) o.require(d(k, q) <= d(k, l) + d(l, q) + 1e-9, "triangle");
      }
    }

    // CV scale invariance and the estimator relation.
    std::vector<double> g(2 + rng() % 8);
    for (auto& v : g) v = 0.5 + u(rng);
    const double c = coef(rng);
    std::vector<double> cg(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) cg[k] = c * g[k];
    const double cs = am::coefficient_of_variation(g, am::CvEstimator::sample);
    const double cu = am::coefficient_of_variation(g, am::CvEstimator::unnormalized);
    o.require(std::abs(am::coefficient_of_variation(cg, am::CvEstimator::sample) - cs) <= 1e-9, "cv scale");
    o.require(std::abs(cu - cs * std::sqrt(static_cast<double>(g.size() - 1))) <= 1e-12, "cv relation");
  }
  o.require(panels >= 100, "fewer than 100 panels");
  if (o.pass) o.detail = std::to_string(panels) + " random panels, all invariants held";
  return o;
}

Outcome stress_detection() {
  Outcome o;
  auto stress = am::parse_synth_config(am::read_text_file(fixtures::source_path("data/synth_stress.conf")));
  auto null = am::parse_synth_config(am::read_text_file(fixtures::source_path("data/synth_null.conf")));
  int wins = 0, w_pos = 0, w_n = 0, d_pos = 0, d_n = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    stress.seed = null.seed = seed;
    const auto s = am::stress_contrast(stress, 0.7);
    wins += s.w_stressed > s.w_baseline && s.dmax_stressed > s.dmax_baseline;
    const auto n = am::stress_contrast(null, 0.7);
    if (n.w_stressed != n.w_baseline) {
      ++w_n;
      w_pos += n.w_stressed > n.w_baseline;
    }
    if (n.dmax_stressed != n.dmax_baseline) {
      ++d_n;
      d_pos += n.dmax_stressed > n.dmax_baseline;
    }
  }
  const double pw = fixtures::sign_test_p(w_pos, w_n), pd = fixtures::sign_test_p(d_pos, d_n);
  o.require(wins >= 95, "stress detected in only " + std::to_string(wins));
  o.require(pw > 0.01 && pd > 0.01, "null config shows a direction");
  o.detail = "stressed > baseline in " + std::to_string(wins) + "/100 seeds; null sign test p(w) = " + fmt(pw, 3) +
             ", p(d_max) = " + fmt(pd, 3) + (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 correlation matrices vs published (+-0.005, >=99% exact)", correlation_golden},
      {"2 weight series (+-0.30) and ordering", weight_series},
      {"3 distance table (+-0.50) and yearly d_max", distance_golden},
      {"4 strong-interaction degree counts", degree_counts},
      {"5 coefficient of variation reproduction", cv_reproduction},
      {"6 d_min properties", dmin_properties},
      {"7 randomized property suites", property_suites},
      {"8 synthetic collective-stress detection", stress_detection},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] AC%s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
