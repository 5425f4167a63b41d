#pragma once

#include <string>
#include <vector>

#include "cp3o/errors.hpp"

namespace cp3o {

// An ordered set of change points over a length-T series. Points are 1-based:
// tau means "the first index of a new segment", with implicit sentinels at 1
// and T+1, so the segments are [1, tau_1), [tau_1, tau_2), ..., [tau_k, T+1).
struct Segmentation {
  std::vector<int> change_points;
  int series_length = 0;

  int size() const { return static_cast<int>(change_points.size()); }

  // Segment start sentinels including both ends: {1, tau_1, ..., tau_k, T+1}.
  std::vector<int> boundaries() const {
    std::vector<int> b;
    b.reserve(change_points.size() + 2);
    b.push_back(1);
    b.insert(b.end(), change_points.begin(), change_points.end());
    b.push_back(series_length + 1);
    return b;
  }

  // Per-index segment label, 0-based array of length T.
  std::vector<int> labels() const {
    std::vector<int> lab(series_length, 0);
    int seg = 0;
    std::size_t next = 0;
    for (int t = 1; t <= series_length; ++t) {
      if (next < change_points.size() && t == change_points[next]) {
        ++seg;
        ++next;
      }
      lab[t - 1] = seg;
    }
    return lab;
  }

  bool operator==(const Segmentation& other) const {
    return series_length == other.series_length &&
           change_points == other.change_points;
  }
};

// Checks the bound and gap constraints for points produced under minimum
// segment length w. Throws on violation.
inline void check_segmentation(const Segmentation& seg, int min_size) {
  const int T = seg.series_length;
  int prev = 1 - min_size;  // lets the first point sit anywhere >= 1+w
  for (std::size_t i = 0; i < seg.change_points.size(); ++i) {
    const int tau = seg.change_points[i];
    if (tau < 1 + min_size || tau > T - min_size + 1)
      throw InputError("change point " + std::to_string(tau) +
                       " outside [1+w, T-w+1]");
    if (tau - prev < min_size)
      throw InputError("change points " + std::to_string(prev) + "," +
                       std::to_string(tau) + " closer than w");
    prev = tau;
  }
}

inline bool segmentation_is_valid(const Segmentation& seg, int min_size) {
  try {
    check_segmentation(seg, min_size);
  } catch (const InputError&) {
    return false;
  }
  return true;
}

}  // namespace cp3o
