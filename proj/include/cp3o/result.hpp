#pragma once

#include <vector>

#include "cp3o/segmentation.hpp"

namespace cp3o {

// Everything a detection run produces. gof_curve[k-1] is the optimized
// goodness of fit with k change points, for k = 1..K (K possibly capped to
// what the series length allows). segmentations[k-1] holds the k points of
// the best-found k-segmentation; change_points repeats the selected one.
struct DetectionResult {
  int selected_k = 0;
  Segmentation change_points;
  std::vector<double> gof_curve;
  std::vector<std::vector<int>> segmentations;
  // prune_sizes[k-1][t] = |S_t(k)|, the candidate count searched at time t
  // during iteration k (0 for t < 2w).
  std::vector<std::vector<int>> prune_sizes;
  bool degenerate = false;      // all gof values exactly zero
  bool k_capped = false;        // K exceeded what T/w permits
  bool knee_fallback = false;   // K < 3, knee fit not possible
  double runtime_s = 0.0;

  bool same_detection(const DetectionResult& other) const {
    return selected_k == other.selected_k &&
           change_points == other.change_points &&
           gof_curve == other.gof_curve &&
           segmentations == other.segmentations &&
           degenerate == other.degenerate && k_capped == other.k_capped &&
           knee_fallback == other.knee_fallback;
  }
};

}  // namespace cp3o
