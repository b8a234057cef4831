#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace siginv {

/// A d-dimensional time series treated as the piecewise-linear interpolant of
/// its samples. Values are stored row-major, one row of `dim()` entries per
/// time stamp.
class SampledPath {
 public:
  SampledPath() = default;

  /// Throws InputError unless times are strictly increasing, there are at
  /// least two samples and `values.size() == times.size() * dim`.
  SampledPath(std::vector<double> times, std::vector<double> values, int dim);

  /// Univariate convenience constructor.
  static SampledPath univariate(std::vector<double> times, std::vector<double> values);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return times_.size(); }
  double time(std::size_t i) const { return times_[i]; }
  double value(std::size_t i, int channel) const {
    return values_[i * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(channel)];
  }
  std::span<const double> point(std::size_t i) const {
    return {values_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Values of one channel as a univariate path on the same grid.
  SampledPath channel(int c) const;
  std::vector<double> channel_values(int c) const;

  /// Linear interpolation of every channel at time t (clamped to the ends).
  std::vector<double> interpolate(double t) const;

  /// The piecewise-linear path restricted to [lo, hi], with interpolated
  /// samples inserted at the cut points.
  SampledPath restrict_to(double lo, double hi) const;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
  int dim_ = 0;
};

}  // namespace siginv
