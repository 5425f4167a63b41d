#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cp3o/config.hpp"
#include "cp3o/errors.hpp"
#include "cp3o/search.hpp"
#include "cp3o/segmentation.hpp"
#include "cp3o/time_series.hpp"

namespace cp3o {

namespace detail {

inline std::int64_t choose2(std::int64_t n) { return n * (n - 1) / 2; }

}  // namespace detail

// Adjusted Rand index between two segmentations viewed as labelings of the
// time indices: (sum_ij C(n_ij,2) - E) / (max - E) with
// E = sum_i C(a_i,2) * sum_j C(b_j,2) / C(T,2) and
// max = (sum_i C(a_i,2) + sum_j C(b_j,2)) / 2.
// 1 iff the segmentations are identical.
inline double adjusted_rand(const Segmentation& a, const Segmentation& b) {
  if (a.series_length != b.series_length)
    throw InputError("adjusted_rand: segmentations cover different lengths");
  const int T = a.series_length;
  if (T < 2) throw InputError("adjusted_rand: needs T >= 2");
  const auto la = a.labels();
  const auto lb = b.labels();
  const int ka = a.size() + 1, kb = b.size() + 1;
  std::vector<std::int64_t> table(static_cast<std::size_t>(ka) * kb, 0);
  std::vector<std::int64_t> ra(ka, 0), rb(kb, 0);
  for (int t = 0; t < T; ++t) {
    ++table[static_cast<std::size_t>(la[t]) * kb + lb[t]];
    ++ra[la[t]];
    ++rb[lb[t]];
  }
  std::int64_t sum_cells = 0, sum_a = 0, sum_b = 0;
  for (auto v : table) sum_cells += detail::choose2(v);
  for (auto v : ra) sum_a += detail::choose2(v);
  for (auto v : rb) sum_b += detail::choose2(v);
  const std::int64_t total = detail::choose2(T);
  const double expected = static_cast<double>(sum_a) *
                          static_cast<double>(sum_b) /
                          static_cast<double>(total);
  const double maximum = 0.5 * (static_cast<double>(sum_a) +
                                static_cast<double>(sum_b));
  if (maximum == expected) return 1.0;  // both partitions degenerate-equal
  return (static_cast<double>(sum_cells) - expected) / (maximum - expected);
}

// Mean over source points of the distance to the nearest target point.
// t2e: sources are the true points; e2t: sources are the estimates. An
// empty estimate set yields +inf for t2e and 0 for e2t (callers that care
// should check est.empty()).
inline double mean_nearest_distance(const std::vector<int>& sources,
                                    const std::vector<int>& targets) {
  if (sources.empty()) return 0.0;
  if (targets.empty()) return std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (int s : sources) {
    int best = std::numeric_limits<int>::max();
    for (int t : targets) best = std::min(best, std::abs(s - t));
    acc += static_cast<double>(best);
  }
  return acc / static_cast<double>(sources.size());
}

inline double t2e(const std::vector<int>& true_cps,
                  const std::vector<int>& est_cps) {
  if (true_cps.empty()) throw InputError("t2e: no true change points");
  return mean_nearest_distance(true_cps, est_cps);
}

inline double e2t(const std::vector<int>& true_cps,
                  const std::vector<int>& est_cps) {
  if (true_cps.empty()) throw InputError("e2t: no true change points");
  if (est_cps.empty()) return 0.0;
  return mean_nearest_distance(est_cps, true_cps);
}

enum class ScenarioKind {
  GaussianMeanVar,  // iid Gaussian segments, mean and variance both change
  DistMeanTail,     // exponential -> N(3,1) -> N(0,1) -> t(2.01)
  HeavyTail,        // t(0.1) -> t(1.9) -> Cauchy(-2,1) -> Cauchy(0,1)
};

inline std::string scenario_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::GaussianMeanVar: return "gaussian";
    case ScenarioKind::DistMeanTail: return "distmeantail";
    case ScenarioKind::HeavyTail: return "heavytail";
  }
  return "?";
}

inline ScenarioKind scenario_from_name(const std::string& name) {
  if (name == "gaussian") return ScenarioKind::GaussianMeanVar;
  if (name == "distmeantail") return ScenarioKind::DistMeanTail;
  if (name == "heavytail") return ScenarioKind::HeavyTail;
  throw ConfigError("unknown scenario '" + name +
                    "' (expected gaussian|distmeantail|heavytail)");
}

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::GaussianMeanVar;
  int length = 400;
  int changes = 3;  // evenly spaced
  std::uint64_t seed = 0;
};

// True change points at floor(i*T/(k+1)) + 1.
inline std::vector<int> scenario_true_cps(int T, int k) {
  std::vector<int> cps(k);
  for (int i = 1; i <= k; ++i)
    cps[i - 1] = static_cast<int>(static_cast<std::int64_t>(i) * T / (k + 1)) + 1;
  return cps;
}

// Generates one simulated series plus its ground-truth segmentation.
// Reproducible: the same spec always yields the same draws.
inline std::pair<TimeSeries, Segmentation> generate_scenario(
    const ScenarioSpec& spec) {
  const int T = spec.length;
  const int k = spec.changes;
  if (T < 2 || k < 1) throw ConfigError("scenario needs T >= 2 and k >= 1");
  if (T / (k + 1) < 2)
    throw ConfigError("scenario: segments would be shorter than 2");
  if (spec.kind != ScenarioKind::GaussianMeanVar && k != 3)
    throw ConfigError("scenario '" + scenario_name(spec.kind) +
                      "' defines exactly 3 changes");
  std::mt19937_64 rng(spec.seed);
  const auto cps = scenario_true_cps(T, k);
  auto bounds = Segmentation{cps, T}.boundaries();

  std::vector<double> data(T);
  auto fill = [&](int seg, auto&& draw) {
    for (int t = bounds[seg]; t < bounds[seg + 1]; ++t) data[t - 1] = draw();
  };

  switch (spec.kind) {
    case ScenarioKind::GaussianMeanVar: {
      std::uniform_real_distribution<double> mean_d(-10.0, 10.0);
      std::uniform_real_distribution<double> var_d(0.0, 5.0);
      double prev_mu = 0.0, prev_var = 0.0;
      for (int seg = 0; seg <= k; ++seg) {
        double mu = mean_d(rng);
        double var = std::max(var_d(rng), 1e-3);
        if (seg > 0) {
          // adjacent segments must actually differ
          while (std::fabs(mu - prev_mu) < 0.5 &&
                 std::fabs(var - prev_var) < 0.25) {
            mu = mean_d(rng);
            var = std::max(var_d(rng), 1e-3);
          }
        }
        std::normal_distribution<double> d(mu, std::sqrt(var));
        fill(seg, [&] { return d(rng); });
        prev_mu = mu;
        prev_var = var;
      }
      break;
    }
    case ScenarioKind::DistMeanTail: {
      std::exponential_distribution<double> e(1.0 / 3.0);  // mean 3
      std::normal_distribution<double> n31(3.0, 1.0);
      std::normal_distribution<double> n01(0.0, 1.0);
      std::student_t_distribution<double> t201(2.01);
      fill(0, [&] { return e(rng); });
      fill(1, [&] { return n31(rng); });
      fill(2, [&] { return n01(rng); });
      fill(3, [&] { return t201(rng); });
      break;
    }
    case ScenarioKind::HeavyTail: {
      std::student_t_distribution<double> t01(0.1);
      std::student_t_distribution<double> t19(1.9);
      std::cauchy_distribution<double> c_neg(-2.0, 1.0);
      std::cauchy_distribution<double> c_std(0.0, 1.0);
      fill(0, [&] { return t01(rng); });
      fill(1, [&] { return t19(rng); });
      fill(2, [&] { return c_neg(rng); });
      fill(3, [&] { return c_std(rng); });
      break;
    }
  }
  return {TimeSeries(std::move(data)), Segmentation{cps, T}};
}

struct TrialReport {
  double rand = 0.0;
  double t2e = 0.0;
  double e2t = 0.0;
  int est_k = 0;
  double runtime_s = 0.0;
};

struct BenchmarkResult {
  std::vector<TrialReport> trials;
  double mean_rand = 0.0;
  double mean_t2e = 0.0;
  double mean_e2t = 0.0;
  double mean_est_k = 0.0;
  double mean_runtime_s = 0.0;
  int empty_estimates = 0;  // trials whose estimate set came back empty
};

// Per-trial seed derived from the master seed (splitmix64 step).
inline std::uint64_t trial_seed(std::uint64_t master, int trial) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL *
                                 (static_cast<std::uint64_t>(trial) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Runs `trials` independent detections on freshly generated series and
// averages the quality metrics. Trials run on a small worker pool; the
// aggregation order is fixed by trial index, so results do not depend on
// scheduling.
inline BenchmarkResult run_benchmark(const ScenarioSpec& spec,
                                     const Cp3oConfig& cfg, int trials,
                                     int threads = 0) {
  if (trials < 1) throw ConfigError("benchmark needs at least one trial");
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, trials));

  BenchmarkResult out;
  out.trials.resize(trials);
  std::atomic<int> next{0};
  std::atomic<int> empties{0};
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= trials) return;
      ScenarioSpec s = spec;
      s.seed = trial_seed(spec.seed, i);
      const auto [series, truth] = generate_scenario(s);
      const DetectionResult det = run_cp3o(series, cfg);
      TrialReport r;
      r.rand = adjusted_rand(truth, det.change_points);
      r.t2e = t2e(truth.change_points, det.change_points.change_points);
      r.e2t = e2t(truth.change_points, det.change_points.change_points);
      r.est_k = det.selected_k;
      r.runtime_s = det.runtime_s;
      if (det.change_points.change_points.empty()) empties.fetch_add(1);
      out.trials[i] = r;
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < threads - 1; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (const auto& r : out.trials) {
    out.mean_rand += r.rand;
    out.mean_t2e += r.t2e;
    out.mean_e2t += r.e2t;
    out.mean_est_k += r.est_k;
    out.mean_runtime_s += r.runtime_s;
  }
  const double n = static_cast<double>(trials);
  out.mean_rand /= n;
  out.mean_t2e /= n;
  out.mean_e2t /= n;
  out.mean_est_k /= n;
  out.mean_runtime_s /= n;
  out.empty_estimates = empties.load();
  return out;
}

}  // namespace cp3o
