#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "cp3o/eval.hpp"
#include "oracles.hpp"

using namespace cp3o;

namespace {

Segmentation random_segmentation(std::mt19937_64& rng, int T) {
  std::uniform_int_distribution<int> kd(0, 5);
  const int k = std::min(kd(rng), T - 1);  // positions 2..T: cap what fits
  std::set<int> pts;
  std::uniform_int_distribution<int> pd(2, T);
  while (static_cast<int>(pts.size()) < k) pts.insert(pd(rng));
  return Segmentation{{pts.begin(), pts.end()}, T};
}

}  // namespace

TEST_CASE("adjusted Rand hand values") {
  Segmentation a{{3}, 4};
  CHECK(adjusted_rand(a, a) == 1.0);
  Segmentation b{{2}, 4};
  CHECK(adjusted_rand(a, b) == Approx(0.0).margin(1e-15));
  Segmentation whole{{}, 6};
  CHECK(adjusted_rand(whole, whole) == 1.0);
  CHECK_THROWS_AS(adjusted_rand(Segmentation{{}, 1}, Segmentation{{}, 1}),
                  InputError);
  CHECK_THROWS_AS(adjusted_rand(Segmentation{{}, 4}, Segmentation{{}, 5}),
                  InputError);
}

TEST_CASE("adjusted Rand equals the pair-counting oracle and is symmetric") {
  std::mt19937_64 rng(111);
  std::uniform_int_distribution<int> td(4, 200);
  for (int rep = 0; rep < 60; ++rep) {
    const int T = td(rng);
    const auto a = random_segmentation(rng, T);
    const auto b = random_segmentation(rng, T);
    const double v = adjusted_rand(a, b);
    CHECK(v == oracle::pair_counting_rand(a, b));
    CHECK(v == adjusted_rand(b, a));
    CHECK(v <= 1.0);
    // 1 exactly when identical, strictly below otherwise
    if (a.change_points == b.change_points)
      CHECK(v == 1.0);
    else
      CHECK(v < 1.0);
  }
}

TEST_CASE("t2e and e2t hand values") {
  CHECK(t2e({100, 200}, {105}) == Approx(50.0));
  CHECK(e2t({100, 200}, {105}) == Approx(5.0));
  CHECK(t2e({100}, {90, 110}) == Approx(10.0));
  CHECK(e2t({100}, {90, 110}) == Approx(10.0));
  CHECK(t2e({50, 150}, {50, 150}) == 0.0);
  CHECK(e2t({50, 150}, {50, 150}) == 0.0);
  CHECK(std::isinf(t2e({100}, {})));
  CHECK(e2t({100}, {}) == 0.0);
  CHECK_THROWS_AS(t2e({}, {5}), InputError);
}

TEST_CASE("t2e is zero iff every true point is matched") {
  std::mt19937_64 rng(222);
  for (int rep = 0; rep < 50; ++rep) {
    std::uniform_int_distribution<int> pd(1, 50);
    std::vector<int> truth{pd(rng), 60 + pd(rng)};
    std::vector<int> est = truth;
    if (rep % 2) est[rep % 2 ? 0 : 1] += 1;
    const double v = t2e(truth, est);
    bool all_matched = true;
    for (int t : truth)
      all_matched &= std::find(est.begin(), est.end(), t) != est.end();
    CHECK((v == 0.0) == all_matched);
  }
}

TEST_CASE("scenario generation is seeded and reproducible") {
  ScenarioSpec spec{ScenarioKind::GaussianMeanVar, 400, 3, 42};
  const auto [s1, t1] = generate_scenario(spec);
  const auto [s2, t2] = generate_scenario(spec);
  CHECK(s1.flat() == s2.flat());
  CHECK(t1.change_points == t2.change_points);
  CHECK(t1.change_points == std::vector<int>{101, 201, 301});

  spec.seed = 43;
  const auto [s3, t3] = generate_scenario(spec);
  CHECK(s1.flat() != s3.flat());
}

TEST_CASE("scenario boundaries and validation") {
  ScenarioSpec spec{ScenarioKind::GaussianMeanVar, 100, 4, 7};
  const auto [series, truth] = generate_scenario(spec);
  CHECK(series.rows() == 100);
  CHECK(truth.change_points == std::vector<int>{21, 41, 61, 81});

  CHECK_THROWS_AS(
      generate_scenario({ScenarioKind::DistMeanTail, 400, 2, 1}),
      ConfigError);
  CHECK_THROWS_AS(
      generate_scenario({ScenarioKind::GaussianMeanVar, 6, 3, 1}),
      ConfigError);
}

TEST_CASE("distribution change scenario has the expected segment means") {
  const auto [series, truth] =
      generate_scenario({ScenarioKind::DistMeanTail, 6000, 3, 99});
  const auto bounds = truth.boundaries();
  const double want_mean[4] = {3.0, 3.0, 0.0, 0.0};
  // 3 standard errors of the segment mean, per segment distribution
  const double sd[4] = {3.0, 1.0, 1.0, std::sqrt(2.01 / 0.01)};
  for (int seg = 0; seg < 4; ++seg) {
    double acc = 0.0;
    const int len = bounds[seg + 1] - bounds[seg];
    for (int t = bounds[seg]; t < bounds[seg + 1]; ++t)
      acc += series.value(t - 1, 0);
    const double mean = acc / len;
    CHECK(mean == Approx(want_mean[seg]).margin(3.0 * sd[seg] / std::sqrt(len)));
  }
}

TEST_CASE("heavy-tail scenario produces extreme outliers in segment 1") {
  const auto [series, truth] =
      generate_scenario({ScenarioKind::HeavyTail, 6000, 3, 5});
  double max_abs = 0.0;
  for (int t = 0; t < 1500; ++t)
    max_abs = std::max(max_abs, std::fabs(series.value(t, 0)));
  CHECK(max_abs > 100.0);
}

TEST_CASE("benchmark aggregates per-trial reports deterministically") {
  ScenarioSpec spec{ScenarioKind::GaussianMeanVar, 200, 3, 1234};
  Cp3oConfig cfg;
  cfg.max_changes = 5;
  cfg.min_size = 15;
  cfg.metric = {MetricKind::EnergyIncomplete, 1.0, std::nullopt};

  const auto single = run_benchmark(spec, cfg, 1, 1);
  REQUIRE(single.trials.size() == 1);
  CHECK(single.mean_rand == single.trials[0].rand);
  CHECK(single.mean_t2e == single.trials[0].t2e);
  CHECK(single.mean_e2t == single.trials[0].e2t);
  CHECK(single.mean_est_k == static_cast<double>(single.trials[0].est_k));

  const auto a = run_benchmark(spec, cfg, 6, 2);
  const auto b = run_benchmark(spec, cfg, 6, 1);
  CHECK(a.mean_rand == b.mean_rand);
  CHECK(a.mean_t2e == b.mean_t2e);
  CHECK(a.mean_e2t == b.mean_e2t);
  CHECK(a.mean_est_k == b.mean_est_k);
  CHECK(a.empty_estimates == 0);
  for (const auto& r : a.trials) {
    CHECK(r.rand <= 1.0);
    CHECK(r.t2e >= 0.0);
    CHECK(r.e2t >= 0.0);
    CHECK(r.est_k >= 1);
  }
}

TEST_CASE("trial seeds differ per index but not per run") {
  CHECK(trial_seed(1, 0) == trial_seed(1, 0));
  CHECK(trial_seed(1, 0) != trial_seed(1, 1));
  CHECK(trial_seed(1, 0) != trial_seed(2, 0));
}
