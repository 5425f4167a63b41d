// Independent reference implementations used as test oracles. Everything
// here is deliberately written the slow, obvious way and kept separate from
// the library code paths it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "cp3o/segmentation.hpp"
#include "cp3o/time_series.hpp"

namespace oracle {

// Standard normal CDF.
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// E|N(mu, sigma^2)| via the folded normal mean.
inline double folded_normal_mean(double mu, double sigma) {
  return sigma * std::sqrt(2.0 / M_PI) * std::exp(-mu * mu / (2 * sigma * sigma)) +
         mu * (1.0 - 2.0 * norm_cdf(-mu / sigma));
}

// Population energy statistic E(X,Y|1) for X ~ N(mx, s^2), Y ~ N(my, s^2).
inline double normal_energy_limit(double mx, double my, double s) {
  const double cross = folded_normal_mean(std::fabs(mx - my), s * std::sqrt(2.0));
  const double within = folded_normal_mean(0.0, s * std::sqrt(2.0));
  return 2.0 * cross - 2.0 * within;
}

// Population 2*sup|F_X - F_Y| for N(mx,1) vs N(my,1): the supremum sits at
// the midpoint of the means.
inline double normal_ks_limit(double mx, double my) {
  const double mid = 0.5 * (mx + my);
  return 2.0 * std::fabs(norm_cdf(mid - mx) - norm_cdf(mid - my));
}

using PairSet = std::set<std::pair<int, int>>;

// Literal enumeration of the incomplete U-statistic index sets, clamped to
// the segment bounds, deduplicated through the std::set.
struct EnumeratedSets {
  PairSet within_x, within_y, between;
};

inline EnumeratedSets enumerate_index_sets(int a, int n, int m, int delta) {
  EnumeratedSets out;
  const int split = a + n;
  for (int i = std::max(a, split - delta); i < split; ++i)
    for (int j = i + 1; j < split; ++j) out.within_x.insert({i, j});
  for (int i = 0; i <= n - delta - 1; ++i)
    out.within_x.insert({a + i, a + i + 1});
  const int wy_hi = split + std::min(delta, m);
  for (int i = split; i < wy_hi; ++i)
    for (int j = i + 1; j < wy_hi; ++j) out.within_y.insert({i, j});
  for (int i = delta - 1; i <= m - 2; ++i)
    out.within_y.insert({split + i, split + i + 1});
  for (int i = std::max(a, split - delta); i < split; ++i)
    for (int j = split; j < wy_hi; ++j) out.between.insert({i, j});
  for (int i = delta + 1; i <= std::min(n, m); ++i)
    out.between.insert({split - i, split + i - 1});
  return out;
}

// Incomplete energy divergence evaluated straight off the enumerated sets.
inline double incomplete_energy_from_sets(const cp3o::TimeSeries& s, int a,
                                          int n, int m, double alpha,
                                          int delta) {
  const auto sets = enumerate_index_sets(a, n, m, delta);
  auto mean_over = [&](const PairSet& pairs) {
    double acc = 0.0;
    for (const auto& [i, j] : pairs) {
      double dist = 0.0;
      for (int c = 0; c < s.dim(); ++c) {
        const double diff = s.value(i, c) - s.value(j, c);
        dist += diff * diff;
      }
      dist = s.dim() == 1 ? std::fabs(s.value(i, 0) - s.value(j, 0))
                          : std::sqrt(dist);
      acc += dist == 0.0 ? 0.0
             : alpha == 1.0 ? dist
                            : std::exp(alpha * std::log(dist));
    }
    return acc / static_cast<double>(pairs.size());
  };
  const double e = 2.0 * mean_over(sets.between) - mean_over(sets.within_x) -
                   mean_over(sets.within_y);
  const double nn = n, mm = m;
  return nn * mm / ((nn + mm) * (nn + mm)) * e;
}

// Adjusted Rand index by counting all C(T,2) index pairs directly.
inline double pair_counting_rand(const cp3o::Segmentation& a,
                                 const cp3o::Segmentation& b) {
  const auto la = a.labels();
  const auto lb = b.labels();
  const int T = a.series_length;
  std::int64_t both = 0, in_a = 0, in_b = 0, total = 0;
  for (int i = 0; i < T; ++i)
    for (int j = i + 1; j < T; ++j) {
      ++total;
      const bool same_a = la[i] == la[j];
      const bool same_b = lb[i] == lb[j];
      if (same_a) ++in_a;
      if (same_b) ++in_b;
      if (same_a && same_b) ++both;
    }
  const double expected = static_cast<double>(in_a) *
                          static_cast<double>(in_b) /
                          static_cast<double>(total);
  const double maximum =
      0.5 * (static_cast<double>(in_a) + static_cast<double>(in_b));
  if (maximum == expected) return 1.0;
  return (static_cast<double>(both) - expected) / (maximum - expected);
}

// Two-piece linear fit chooser, written independently of the library: naive
// slope/intercept least squares per piece, residuals summed explicitly.
inline int knee_by_enumeration(const std::vector<double>& curve) {
  const int K = static_cast<int>(curve.size());
  auto piece_sse = [&](int lo, int hi) {
    const int n = hi - lo + 1;
    double mx = 0, my = 0;
    for (int i = lo; i <= hi; ++i) {
      mx += i + 1;
      my += curve[i];
    }
    mx /= n;
    my /= n;
    double num = 0, den = 0;
    for (int i = lo; i <= hi; ++i) {
      num += (i + 1 - mx) * (curve[i] - my);
      den += (i + 1 - mx) * (i + 1 - mx);
    }
    const double slope = den > 0 ? num / den : 0.0;
    const double icept = my - slope * mx;
    double sse = 0;
    for (int i = lo; i <= hi; ++i) {
      const double resid = curve[i] - (slope * (i + 1) + icept);
      sse += resid * resid;
    }
    return sse;
  };
  int best_c = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int c = 2; c <= K - 1; ++c) {
    const double sse = piece_sse(0, c - 1) + piece_sse(c - 1, K - 1);
    if (sse < best) {
      best = sse;
      best_c = c;
    }
  }
  return best_c;
}

}  // namespace oracle
