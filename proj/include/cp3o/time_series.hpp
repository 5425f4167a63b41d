#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "cp3o/errors.hpp"

namespace cp3o {

// A length-T sequence of d-dimensional observations, stored row-major.
// Storage is 0-based; reported change point indices are 1-based (the first
// index of a new segment), matching the convention used everywhere in the
// public output.
class TimeSeries {
 public:
  TimeSeries(std::vector<double> flat, int rows, int dim)
      : data_(std::move(flat)), rows_(rows), dim_(dim) {
    if (rows_ < 1 || dim_ < 1)
      throw InputError("time series needs at least one row and one column");
    if (static_cast<std::size_t>(rows_) * static_cast<std::size_t>(dim_) !=
        data_.size())
      throw InputError("time series storage size does not match T x d");
    for (std::size_t i = 0; i < data_.size(); ++i) {
      if (!std::isfinite(data_[i]))
        throw InputError("non-finite value at flat offset " +
                         std::to_string(i));
    }
  }

  explicit TimeSeries(std::vector<double> univariate)
      : TimeSeries(take_with_rows_(std::move(univariate))) {}

  int rows() const { return rows_; }
  int dim() const { return dim_; }

  double value(int t, int j) const { return data_[index_(t, j)]; }
  const double* row(int t) const { return data_.data() + index_(t, 0); }
  const std::vector<double>& flat() const { return data_; }

 private:
  explicit TimeSeries(std::pair<std::vector<double>, int> flat_rows)
      : TimeSeries(std::move(flat_rows.first), flat_rows.second, 1) {}
  static std::pair<std::vector<double>, int> take_with_rows_(
      std::vector<double> v) {
    const int rows = static_cast<int>(v.size());
    return {std::move(v), rows};
  }
  std::size_t index_(int t, int j) const {
    return static_cast<std::size_t>(t) * dim_ + j;
  }

  std::vector<double> data_;
  int rows_ = 0;
  int dim_ = 0;
};

// Non-owning view of n consecutive d-dimensional points.
struct SampleView {
  const double* data = nullptr;
  int n = 0;
  int d = 1;

  const double* point(int i) const { return data + static_cast<std::size_t>(i) * d; }
};

// View of rows [begin, end) of a series.
inline SampleView segment_view(const TimeSeries& s, int begin, int end) {
  return SampleView{s.row(begin), end - begin, s.dim()};
}

inline SampleView view_of(const std::vector<double>& univariate) {
  return SampleView{univariate.data(), static_cast<int>(univariate.size()), 1};
}

}  // namespace cp3o
