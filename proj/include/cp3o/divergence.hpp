#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cp3o/config.hpp"
#include "cp3o/errors.hpp"
#include "cp3o/time_series.hpp"

namespace cp3o {

// dist^alpha with dist=0 mapped to 0. General powers go through
// exp(alpha*log(dist)) so tiny alpha (e.g. 0.09) behaves; alpha=1 and
// alpha=2 take the cheap route.
inline double alpha_pow(double dist, double alpha) {
  if (dist == 0.0) return 0.0;
  if (alpha == 1.0) return dist;
  if (alpha == 2.0) return dist * dist;
  return std::exp(alpha * std::log(dist));
}

// Euclidean distance between two d-dimensional points.
inline double point_dist(const double* a, const double* b, int d) {
  if (d == 1) return std::fabs(a[0] - b[0]);
  double acc = 0.0;
  for (int j = 0; j < d; ++j) {
    const double diff = a[j] - b[j];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

inline double row_dist(const TimeSeries& s, int i, int j) {
  return point_dist(s.row(i), s.row(j), s.dim());
}

// mn/(m+n)^2, the sample-proportion scaling of every divergence here.
inline double mn_scale(int n, int m) {
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return nn * mm / ((nn + mm) * (nn + mm));
}

// |cx/n - cy/m|, shared by every KS evaluation path so that the rank-scan
// and sort-merge routes produce bit-identical values.
inline double ecdf_gap(std::int64_t cx, int n, std::int64_t cy, int m) {
  return std::fabs(static_cast<double>(cx) / static_cast<double>(n) -
                   static_cast<double>(cy) / static_cast<double>(m));
}

namespace detail {

// Puts the two samples in a data-determined order so the cross sum is
// accumulated identically for (X,Y) and (Y,X).
inline bool view_less(const SampleView& a, const SampleView& b) {
  if (a.n != b.n) return a.n < b.n;
  const std::size_t len = static_cast<std::size_t>(a.n) * a.d;
  return std::lexicographical_compare(a.data, a.data + len, b.data,
                                      b.data + len);
}

inline double within_mean(const SampleView& s, double alpha) {
  double acc = 0.0;
  for (int i = 0; i < s.n; ++i)
    for (int j = i + 1; j < s.n; ++j)
      acc += alpha_pow(point_dist(s.point(i), s.point(j), s.d), alpha);
  const double pairs = 0.5 * static_cast<double>(s.n) *
                       static_cast<double>(s.n - 1);
  return acc / pairs;
}

inline double cross_mean(const SampleView& x, const SampleView& y,
                         double alpha) {
  double acc = 0.0;
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < y.n; ++j)
      acc += alpha_pow(point_dist(x.point(i), y.point(j), x.d), alpha);
  return acc / (static_cast<double>(x.n) * static_cast<double>(y.n));
}

}  // namespace detail

// Empirical energy statistic
//   E(X,Y|a) = 2*mean|x-y|^a - mean|x-x'|^a - mean|y-y'|^a
// over unordered within pairs. May be negative for finite samples.
inline double energy_stat(SampleView x, SampleView y, double alpha) {
  if (x.d != y.d) throw InputError("energy_stat: dimension mismatch");
  if (x.n < 2 || y.n < 2)
    throw InputError("energy_stat: both samples need at least 2 points");
  if (detail::view_less(y, x)) std::swap(x, y);
  return 2.0 * detail::cross_mean(x, y, alpha) -
         detail::within_mean(x, alpha) - detail::within_mean(y, alpha);
}

inline double energy_stat(const std::vector<double>& x,
                          const std::vector<double>& y, double alpha) {
  return energy_stat(view_of(x), view_of(y), alpha);
}

// mn/(m+n)^2 * E(X,Y|a).
inline double energy_divergence(SampleView x, SampleView y, double alpha) {
  return mn_scale(x.n, y.n) * energy_stat(x, y, alpha);
}

inline double energy_divergence(const std::vector<double>& x,
                                const std::vector<double>& y, double alpha) {
  return energy_divergence(view_of(x), view_of(y), alpha);
}

// Index pairs of the incomplete U-statistic for adjacent segments
// X = Z_a..Z_{a+n-1}, Y = Z_{a+n}..Z_{a+n+m-1} (global 0-based indices).
// Within delta of the split all pairs enter; outside, only adjacent points.
struct EnergyIndexSets {
  std::vector<std::pair<int, int>> within_x;
  std::vector<std::pair<int, int>> within_y;
  std::vector<std::pair<int, int>> between;
};

inline EnergyIndexSets energy_index_sets(int a, int n, int m, int delta) {
  if (n < 2 || m < 2)
    throw InputError("incomplete energy: both segments need >= 2 points");
  if (delta < 1) throw InputError("incomplete energy: delta must be >= 1");
  EnergyIndexSets sets;
  const int split = a + n;
  // within X: all pairs in the last min(delta,n) points, then the adjacency
  // chain over the rest
  const int wx_lo = std::max(a, split - delta);
  for (int i = wx_lo; i < split; ++i)
    for (int j = i + 1; j < split; ++j) sets.within_x.emplace_back(i, j);
  for (int i = 0; i <= n - delta - 1; ++i)
    sets.within_x.emplace_back(a + i, a + i + 1);
  // within Y: mirrored, window at the start of Y
  const int wy_hi = split + std::min(delta, m);
  for (int i = split; i < wy_hi; ++i)
    for (int j = i + 1; j < wy_hi; ++j) sets.within_y.emplace_back(i, j);
  for (int i = delta - 1; i <= m - 2; ++i)
    sets.within_y.emplace_back(split + i, split + i + 1);
  // between: the delta x delta rectangle at the split plus a diagonal
  // reaching out to min(n,m)
  for (int i = wx_lo; i < split; ++i)
    for (int j = split; j < wy_hi; ++j) sets.between.emplace_back(i, j);
  for (int i = delta + 1; i <= std::min(n, m); ++i)
    sets.between.emplace_back(split - i, split + i - 1);
  if (sets.within_x.empty() || sets.within_y.empty() || sets.between.empty())
    throw InputError("incomplete energy: degenerate index set");
  return sets;
}

// Incomplete U-statistic energy divergence, mn/(m+n)^2 * E~(X,Y|a,delta).
// Cost O(delta^2 + max(n,m)) instead of O(n*m). Sums follow the same pair
// order as energy_index_sets.
inline double energy_incomplete(const TimeSeries& s, int a, int n, int m,
                                double alpha, int delta) {
  if (n < 2 || m < 2)
    throw InputError("incomplete energy: both segments need >= 2 points");
  if (delta < 1) throw InputError("incomplete energy: delta must be >= 1");
  if (a < 0 || a + n + m > s.rows())
    throw InputError("incomplete energy: segment out of bounds");
  const int split = a + n;

  double sum_x = 0.0;
  std::int64_t cnt_x = 0;
  const int wx_lo = std::max(a, split - delta);
  for (int i = wx_lo; i < split; ++i)
    for (int j = i + 1; j < split; ++j) {
      sum_x += alpha_pow(row_dist(s, i, j), alpha);
      ++cnt_x;
    }
  for (int i = 0; i <= n - delta - 1; ++i) {
    sum_x += alpha_pow(row_dist(s, a + i, a + i + 1), alpha);
    ++cnt_x;
  }

  double sum_y = 0.0;
  std::int64_t cnt_y = 0;
  const int wy_hi = split + std::min(delta, m);
  for (int i = split; i < wy_hi; ++i)
    for (int j = i + 1; j < wy_hi; ++j) {
      sum_y += alpha_pow(row_dist(s, i, j), alpha);
      ++cnt_y;
    }
  for (int i = delta - 1; i <= m - 2; ++i) {
    sum_y += alpha_pow(row_dist(s, split + i, split + i + 1), alpha);
    ++cnt_y;
  }

  double sum_b = 0.0;
  std::int64_t cnt_b = 0;
  for (int i = wx_lo; i < split; ++i)
    for (int j = split; j < wy_hi; ++j) {
      sum_b += alpha_pow(row_dist(s, i, j), alpha);
      ++cnt_b;
    }
  for (int i = delta + 1; i <= std::min(n, m); ++i) {
    sum_b += alpha_pow(row_dist(s, split - i, split + i - 1), alpha);
    ++cnt_b;
  }

  if (cnt_x == 0 || cnt_y == 0 || cnt_b == 0)
    throw InputError("incomplete energy: degenerate index set");
  const double incomplete = 2.0 * (sum_b / static_cast<double>(cnt_b)) -
                            sum_x / static_cast<double>(cnt_x) -
                            sum_y / static_cast<double>(cnt_y);
  return mn_scale(n, m) * incomplete;
}

// Two-sample Kolmogorov-Smirnov scaled by 2: 2*sup_r |F_X(r) - F_Y(r)|.
// The sup over half-lines is attained at pooled sample points, so a merge
// over the two sorted samples evaluates it exactly.
inline double ks_stat(SampleView x, SampleView y) {
  if (x.d != 1 || y.d != 1)
    throw InputError("KS metric is univariate; use energy metric for d>1");
  if (x.n < 1 || y.n < 1)
    throw InputError("ks_stat: both samples need at least 1 point");
  thread_local std::vector<double> xs, ys;
  xs.assign(x.data, x.data + x.n);
  ys.assign(y.data, y.data + y.n);
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const int n = x.n, m = y.n;
  int i = 0, j = 0;
  double d = 0.0;
  while (i < n || j < m) {
    double v;
    if (j >= m || (i < n && xs[i] <= ys[j]))
      v = xs[i];
    else
      v = ys[j];
    while (i < n && xs[i] == v) ++i;
    while (j < m && ys[j] == v) ++j;
    d = std::max(d, ecdf_gap(i, n, j, m));
  }
  return 2.0 * d;
}

inline double ks_stat(const std::vector<double>& x,
                      const std::vector<double>& y) {
  return ks_stat(view_of(x), view_of(y));
}

inline double ks_divergence(SampleView x, SampleView y) {
  return mn_scale(x.n, y.n) * ks_stat(x, y);
}

inline double ks_divergence(const std::vector<double>& x,
                            const std::vector<double>& y) {
  return ks_divergence(view_of(x), view_of(y));
}

// KS divergence over only the points within delta of the split: compares
// rows [max(a,b-delta), b) against rows [b, min(c, b+delta)).
inline double ks_windowed(const TimeSeries& s, int a, int b, int c,
                          int delta) {
  if (s.dim() != 1)
    throw InputError("KS metric is univariate; use energy metric for d>1");
  if (delta < 1) throw InputError("ks_windowed: delta must be >= 1");
  const int xb = std::max(a, b - delta);
  const int ye = std::min(c, b + delta);
  if (xb >= b || b >= ye) throw InputError("ks_windowed: empty window");
  return ks_divergence(segment_view(s, xb, b), segment_view(s, b, ye));
}

// Segment goodness of fit g(a,b,c) = R(rows [a,b), rows [b,c)) under the
// configured metric, 0-based half-open indices.
inline double gof_eval(const GofMetric& metric, const TimeSeries& s, int a,
                       int b, int c) {
  if (!(0 <= a && a < b && b < c && c <= s.rows()))
    throw InputError("gof_eval: need 0 <= a < b < c <= T");
  switch (metric.kind) {
    case MetricKind::EnergyComplete:
      return energy_divergence(segment_view(s, a, b), segment_view(s, b, c),
                               metric.alpha);
    case MetricKind::EnergyIncomplete:
      return energy_incomplete(s, a, b - a, c - b, metric.alpha,
                               metric.delta.value_or(1));
    case MetricKind::Ks:
      return ks_divergence(segment_view(s, a, b), segment_view(s, b, c));
    case MetricKind::KsWindowed:
      return ks_windowed(s, a, b, c, metric.delta.value_or(1));
  }
  throw InputError("gof_eval: unknown metric kind");
}

}  // namespace cp3o
