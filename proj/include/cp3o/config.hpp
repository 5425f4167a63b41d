#pragma once

#include <optional>
#include <string>

#include "cp3o/errors.hpp"
#include "cp3o/time_series.hpp"

namespace cp3o {

enum class MetricKind {
  EnergyComplete,    // full pairwise energy statistic
  EnergyIncomplete,  // windowed incomplete U-statistic form
  Ks,                // two-sample Kolmogorov-Smirnov, univariate
  KsWindowed,        // KS restricted to a window around the split
};

// Divergence configuration. alpha applies to the energy kinds only; alpha=2
// detects mean changes only, smaller alpha trades moment assumptions for
// sensitivity to general distributional change. delta is the locality window
// of the incomplete/windowed statistics.
struct GofMetric {
  MetricKind kind = MetricKind::EnergyIncomplete;
  double alpha = 1.0;
  std::optional<int> delta;
};

inline bool metric_uses_alpha(MetricKind k) {
  return k == MetricKind::EnergyComplete || k == MetricKind::EnergyIncomplete;
}

inline bool metric_uses_delta(MetricKind k) {
  return k == MetricKind::EnergyIncomplete || k == MetricKind::KsWindowed;
}

inline bool metric_is_ks(MetricKind k) {
  return k == MetricKind::Ks || k == MetricKind::KsWindowed;
}

inline std::string metric_kind_name(MetricKind k) {
  switch (k) {
    case MetricKind::EnergyComplete: return "energy-complete";
    case MetricKind::EnergyIncomplete: return "energy";
    case MetricKind::Ks: return "ks";
    case MetricKind::KsWindowed: return "ks-windowed";
  }
  return "?";
}

inline MetricKind metric_kind_from_name(const std::string& name) {
  if (name == "energy") return MetricKind::EnergyIncomplete;
  if (name == "energy-complete") return MetricKind::EnergyComplete;
  if (name == "ks") return MetricKind::Ks;
  if (name == "ks-windowed") return MetricKind::KsWindowed;
  throw ConfigError("unknown metric '" + name +
                    "' (expected energy|energy-complete|ks|ks-windowed)");
}

struct Cp3oConfig {
  int max_changes = 5;    // K, upper bound on the number of change points
  int min_size = 30;      // w, minimum distance between change points
  GofMetric metric;
  bool pruning = true;
};

// Returns a normalized copy (delta filled with w-1 when unset) or throws
// ConfigError. Invalid values are rejected, never clamped.
inline Cp3oConfig validate_config(const TimeSeries& ts, const Cp3oConfig& in) {
  Cp3oConfig cfg = in;
  if (cfg.max_changes < 1) throw ConfigError("K must be a positive integer");
  if (cfg.min_size < 1) throw ConfigError("w must be a positive integer");
  if (ts.rows() < 2 * cfg.min_size)
    throw ConfigError("series too short for one change: T=" +
                      std::to_string(ts.rows()) + " < 2w=" +
                      std::to_string(2 * cfg.min_size));
  if (metric_uses_alpha(cfg.metric.kind)) {
    if (!(cfg.metric.alpha > 0.0 && cfg.metric.alpha <= 2.0))
      throw ConfigError("alpha must be in (0, 2]");
  }
  if (metric_is_ks(cfg.metric.kind) && ts.dim() > 1)
    throw ConfigError("KS metric is univariate; use energy metric for d>1");
  if (cfg.min_size < 2 && (cfg.metric.kind == MetricKind::EnergyComplete ||
                           cfg.metric.kind == MetricKind::Ks))
    throw ConfigError("w must be >= 2: within-segment terms need two points");
  if (metric_uses_delta(cfg.metric.kind)) {
    if (!cfg.metric.delta) cfg.metric.delta = cfg.min_size - 1;
    if (*cfg.metric.delta < 1) throw ConfigError("delta must be >= 1");
    if (*cfg.metric.delta >= cfg.min_size)
      throw ConfigError("delta must be < w (got delta=" +
                        std::to_string(*cfg.metric.delta) +
                        ", w=" + std::to_string(cfg.min_size) + ")");
  }
  return cfg;
}

}  // namespace cp3o
