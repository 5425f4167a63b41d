#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cp3o/config.hpp"
#include "cp3o/divergence.hpp"
#include "cp3o/errors.hpp"
#include "cp3o/result.hpp"
#include "cp3o/segmentation.hpp"
#include "cp3o/time_series.hpp"

namespace cp3o {

inline constexpr double kUndefined = -std::numeric_limits<double>::infinity();

// Scores the goodness of fit of splitting the prefix Z_1..Z_t (1-based,
// inclusive) at tau with the previous change at prev: the divergence between
// rows prev..tau-1 and tau..t.
using SegScorer = std::function<double(int prev, int tau, int t)>;

namespace detail {

// KS evaluator over contiguous windows using dense value ranks computed once
// per series. Produces bit-identical values to ks_stat: it visits the same
// pooled sample points with the same closed ECDF counts. Holds scratch
// buffers, so a single instance must not be shared across threads.
class KsRankContext {
 public:
  explicit KsRankContext(const TimeSeries& s) {
    const int T = s.rows();
    std::vector<int> order(T);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&s](int i, int j) {
      return s.value(i, 0) < s.value(j, 0);
    });
    rank_.resize(T);
    int r = -1;
    double prev = 0.0;
    for (int idx = 0; idx < T; ++idx) {
      const double v = s.value(order[idx], 0);
      if (r < 0 || v != prev) {
        ++r;
        prev = v;
      }
      rank_[order[idx]] = r;
    }
    n_ranks_ = r + 1;
    count_x_.assign(n_ranks_, 0);
    count_y_.assign(n_ranks_, 0);
  }

  // 2 * sup |F_X - F_Y| over rows [xb,xe) vs [yb,ye), 0-based half-open.
  double stat(int xb, int xe, int yb, int ye) {
    const int n = xe - xb, m = ye - yb;
    for (int i = xb; i < xe; ++i) ++count_x_[rank_[i]];
    for (int i = yb; i < ye; ++i) ++count_y_[rank_[i]];
    std::int64_t cx = 0, cy = 0;
    double d = 0.0;
    for (int r = 0; r < n_ranks_; ++r) {
      if (count_x_[r] == 0 && count_y_[r] == 0) continue;
      cx += count_x_[r];
      cy += count_y_[r];
      d = std::max(d, ecdf_gap(cx, n, cy, m));
      if (cx == n && cy == m) break;
    }
    for (int i = xb; i < xe; ++i) count_x_[rank_[i]] = 0;
    for (int i = yb; i < ye; ++i) count_y_[rank_[i]] = 0;
    return 2.0 * d;
  }

  double divergence(int xb, int xe, int yb, int ye) {
    return mn_scale(xe - xb, ye - yb) * stat(xb, xe, yb, ye);
  }

 private:
  std::vector<int> rank_;
  std::vector<int> count_x_, count_y_;
  int n_ranks_ = 0;
};

}  // namespace detail

// Builds the segment scorer for a run. The KS kind gets the rank-based
// evaluator; everything else dispatches to gof_eval. One scorer per run:
// the KS context carries scratch state.
inline SegScorer make_segment_scorer(const TimeSeries& seq,
                                     const GofMetric& metric) {
  if (metric.kind == MetricKind::Ks) {
    auto ctx = std::make_shared<detail::KsRankContext>(seq);
    return [ctx](int prev, int tau, int t) {
      return ctx->divergence(prev - 1, tau - 1, tau - 1, t);
    };
  }
  return [&seq, metric](int prev, int tau, int t) {
    return gof_eval(metric, seq, prev - 1, tau - 1, t);
  };
}

// Dynamic-program state. Tables are (T+1) x (K+1), 1-based in t; level 0 is
// the initialization row: G_t(0) = 0 and A_t(0) = 1 for all t.
struct DpState {
  int T = 0, K = 0, w = 0;
  bool pruning = true;
  std::vector<double> gof;            // G_t(k)
  std::vector<int> back;              // A_t(k), 0 when undefined
  std::vector<std::vector<int>> cand;       // S_t for the next level (k>=2)
  std::vector<std::vector<double>> cand_h;  // cached H values matching cand
  std::vector<std::vector<int>> space_size; // |S_t(k)| logged per iteration
  int levels_run = 0;

  DpState(int T_, int K_, int w_, bool pruning_)
      : T(T_), K(K_), w(w_), pruning(pruning_),
        gof(static_cast<std::size_t>(T_ + 1) * (K_ + 1), kUndefined),
        back(static_cast<std::size_t>(T_ + 1) * (K_ + 1), 0),
        cand(T_ + 1), cand_h(T_ + 1),
        space_size(K_, std::vector<int>(T_ + 1, 0)) {
    for (int t = 0; t <= T; ++t) {
      G(t, 0) = 0.0;
      A(t, 0) = 1;
    }
  }

  double& G(int t, int k) { return gof[static_cast<std::size_t>(t) * (K + 1) + k]; }
  double G(int t, int k) const { return gof[static_cast<std::size_t>(t) * (K + 1) + k]; }
  int& A(int t, int k) { return back[static_cast<std::size_t>(t) * (K + 1) + k]; }
  int A(int t, int k) const { return back[static_cast<std::size_t>(t) * (K + 1) + k]; }

  bool defined(int t, int k) const { return G(t, k) != kUndefined; }

  // Candidate range for the k-th change point of the prefix ending at t:
  // 1+k*w leaves room for k points spaced >= w, t-w+1 keeps the last
  // segment at least w long.
  int cand_lo(int k) const { return 1 + k * w; }
  int cand_hi(int t) const { return t - w + 1; }
};

// H_t(k, tau): goodness of the prefix Z_1..Z_t with its k-th change at tau,
// the earlier ones approximated by the stored backpointers. Undefined
// combinations yield -inf so callers can treat the candidate as excluded.
inline double h_value(const DpState& st, const SegScorer& score, int kappa,
                      int tau, int t) {
  if (tau < st.cand_lo(kappa) || tau > st.cand_hi(t)) return kUndefined;
  if (!st.defined(tau - 1, kappa - 1)) return kUndefined;
  return st.G(tau - 1, kappa - 1) +
         score(st.A(tau - 1, kappa - 1), tau, t);
}

namespace detail {

struct LevelArgmax {
  double best = kUndefined;
  int best_tau = 0;
};

}  // namespace detail

// One pruning update: shrinks S_t to the candidates whose level-(kappa+1)
// goodness beats the benchmark split at t-w+1, caching the H values so the
// next iteration's argmax can reuse them. Returns the new candidate set.
inline const std::vector<int>& prune_step(DpState& st, const SegScorer& score,
                                          int kappa, int t) {
  const int bench_tau = st.cand_hi(t);
  const double bench = h_value(st, score, kappa + 1, bench_tau, t);
  std::vector<int> kept;
  std::vector<double> kept_h;
  auto consider = [&](int tau) {
    const double h =
        (tau == bench_tau) ? bench : h_value(st, score, kappa + 1, tau, t);
    if (h >= bench) {
      kept.push_back(tau);
      kept_h.push_back(h);
    }
  };
  if (kappa == 1) {
    for (int tau = st.cand_lo(1); tau <= st.cand_hi(t); ++tau) consider(tau);
  } else {
    for (int tau : st.cand[t]) consider(tau);
  }
  st.cand[t] = std::move(kept);
  st.cand_h[t] = std::move(kept_h);
  return st.cand[t];
}

// The kappa-th sweep over t. For each prefix it finds the best location of
// the kappa-th change point over the (possibly pruned) candidate set,
// records the tables, then prunes the set for the next level. Ties take the
// smallest tau. Never throws: prefixes with no feasible candidate stay
// undefined.
inline void dp_iterate(DpState& st, const SegScorer& score, int kappa) {
  const int start = 2 * st.w;
  for (int t = start; t <= st.T; ++t) {
    detail::LevelArgmax am;
    int searched = 0;
    auto visit = [&](int tau, double h) {
      ++searched;
      if (h != kUndefined && h > am.best) {
        am.best = h;
        am.best_tau = tau;
      }
    };
    if (!st.pruning || kappa == 1) {
      for (int tau = st.cand_lo(1); tau <= st.cand_hi(t); ++tau)
        visit(tau, h_value(st, score, kappa, tau, t));
    } else {
      const auto& set = st.cand[t];
      const auto& hs = st.cand_h[t];
      for (std::size_t i = 0; i < set.size(); ++i) visit(set[i], hs[i]);
    }
    st.space_size[kappa - 1][t] = searched;
    if (am.best_tau != 0) {
      st.G(t, kappa) = am.best;
      st.A(t, kappa) = am.best_tau;
    }
    if (st.pruning && kappa < st.K) prune_step(st, score, kappa, t);
  }
  st.levels_run = kappa;
}

// Follows the backpointer chain to the kappa change points estimated for
// the prefix ending at t. kappa = 0 gives the empty set.
inline std::vector<int> reconstruct_cps(const DpState& st, int kappa, int t) {
  if (kappa == 0) return {};
  if (!st.defined(t, kappa))
    throw InputError("no valid " + std::to_string(kappa) +
                     "-segmentation for prefix " + std::to_string(t));
  std::vector<int> cps(kappa);
  int at = t;
  for (int k = kappa; k >= 1; --k) {
    const int tau = st.A(at, k);
    cps[k - 1] = tau;
    at = tau - 1;
  }
  return cps;
}

struct KneeResult {
  int k = 0;
  bool fallback = false;  // curve too short for a two-piece fit
};

namespace detail {

// Residual sum of squares of the least-squares line through points
// (xs[lo..hi], ys[lo..hi]).
inline double line_fit_sse(const std::vector<double>& ys, int lo, int hi) {
  const int n = hi - lo + 1;
  if (n <= 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = lo; i <= hi; ++i) {
    const double x = static_cast<double>(i + 1);  // kappa value
    const double y = ys[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double nn = static_cast<double>(n);
  const double vxx = sxx - sx * sx / nn;
  const double vxy = sxy - sx * sy / nn;
  const double vyy = syy - sy * sy / nn;
  const double sse = vyy - vxy * vxy / vxx;
  return std::max(sse, 0.0);
}

}  // namespace detail

// Picks the number of change points at the kink of the gof-versus-kappa
// curve: fits two least-squares lines sharing the knee point and keeps the
// knee with the smallest total squared error. curve[i] is the value at
// kappa = i+1. Ties resolve toward fewer change points.
inline KneeResult select_num_changes(const std::vector<double>& curve) {
  const int K = static_cast<int>(curve.size());
  if (K < 3) return {K, true};
  int best_c = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int c = 2; c <= K - 1; ++c) {
    const double sse = detail::line_fit_sse(curve, 0, c - 1) +
                       detail::line_fit_sse(curve, c - 1, K - 1);
    if (sse < best_sse) {
      best_sse = sse;
      best_c = c;
    }
  }
  return {best_c, false};
}

// The full detection procedure: K iterations of the pruned dynamic program,
// then knee selection over the resulting goodness-of-fit curve. K is capped
// to the largest count the series length allows.
inline DetectionResult run_cp3o(const TimeSeries& seq, const Cp3oConfig& raw) {
  const auto start_time = std::chrono::steady_clock::now();
  const Cp3oConfig cfg = validate_config(seq, raw);
  const int T = seq.rows();
  const int w = cfg.min_size;
  const int max_feasible = (T - w) / w;  // largest k with 1+k*w <= T-w+1
  const int K = std::min(cfg.max_changes, max_feasible);

  DetectionResult out;
  out.k_capped = K < cfg.max_changes;

  DpState st(T, K, w, cfg.pruning);
  const SegScorer score = make_segment_scorer(seq, cfg.metric);
  for (int kappa = 1; kappa <= K; ++kappa) dp_iterate(st, score, kappa);

  out.gof_curve.resize(K);
  out.segmentations.resize(K);
  for (int kappa = 1; kappa <= K; ++kappa) {
    out.gof_curve[kappa - 1] = st.G(T, kappa);
    out.segmentations[kappa - 1] = reconstruct_cps(st, kappa, T);
  }
  const KneeResult knee = select_num_changes(out.gof_curve);
  out.selected_k = knee.k;
  out.knee_fallback = knee.fallback;
  out.change_points =
      Segmentation{out.segmentations[out.selected_k - 1], T};
  out.degenerate = std::all_of(out.gof_curve.begin(), out.gof_curve.end(),
                               [](double v) { return v == 0.0; });
  out.prune_sizes = std::move(st.space_size);
  out.runtime_s = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start_time)
                      .count();
  return out;
}

// Exact maximization over every legal kappa-tuple, for oracle use on tiny
// instances. Guards keep it off real-sized inputs.
struct ExhaustiveGuard {
  int max_length = 60;
  int max_changes = 3;
};

inline std::pair<double, Segmentation> exhaustive_best_segmentation(
    const TimeSeries& seq, const GofMetric& metric, int kappa, int w,
    const ExhaustiveGuard& guard = {}) {
  const int T = seq.rows();
  if (T > guard.max_length || kappa > guard.max_changes)
    throw ConfigError("exhaustive search guard exceeded (T=" +
                      std::to_string(T) + ", kappa=" + std::to_string(kappa) +
                      ")");
  if (kappa < 1) throw ConfigError("exhaustive search needs kappa >= 1");

  double best = kUndefined;
  std::vector<int> best_tuple;
  std::vector<int> tuple(kappa);

  // Objective of a complete tuple with sentinels 1 and T+1, summed left to
  // right exactly as the dynamic program accumulates it.
  auto objective = [&](const std::vector<int>& cps) {
    double acc = 0.0;
    for (int j = 0; j < kappa; ++j) {
      const int a = (j == 0) ? 1 : cps[j - 1];
      const int b = cps[j];
      const int c = (j == kappa - 1) ? T + 1 : cps[j + 1];
      acc += gof_eval(metric, seq, a - 1, b - 1, c - 1);
    }
    return acc;
  };

  std::function<void(int, int)> enumerate = [&](int j, int lo) {
    if (j == kappa) {
      const double v = objective(tuple);
      if (v > best) {
        best = v;
        best_tuple = tuple;
      }
      return;
    }
    // remaining points after this one still need room: j-th point can sit
    // no later than T-w+1 - (kappa-1-j)*w
    const int hi = T - w + 1 - (kappa - 1 - j) * w;
    for (int tau = lo; tau <= hi; ++tau) {
      tuple[j] = tau;
      enumerate(j + 1, tau + w);
    }
  };
  enumerate(0, 1 + w);

  if (best_tuple.empty())
    throw ConfigError("no legal segmentation: T too short for kappa changes");
  return {best, Segmentation{best_tuple, T}};
}

}  // namespace cp3o
