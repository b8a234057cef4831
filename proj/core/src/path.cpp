#include "siginv/path.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "siginv/errors.hpp"

namespace siginv {

SampledPath::SampledPath(std::vector<double> times, std::vector<double> values, int dim)
    : times_(std::move(times)), values_(std::move(values)), dim_(dim) {
  if (dim_ < 1) throw InputError("path dimension must be >= 1");
  if (times_.size() < 2) throw InputError("path needs at least 2 samples, got " + std::to_string(times_.size()));
  if (values_.size() != times_.size() * static_cast<std::size_t>(dim_)) {
    throw InputError("path has " + std::to_string(values_.size()) + " values for " +
                     std::to_string(times_.size()) + " samples of dimension " + std::to_string(dim_));
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) throw InputError("non-finite time at sample " + std::to_string(i));
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw InputError("times must be strictly increasing (sample " + std::to_string(i) + ")");
    }
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InputError("non-finite value at sample " + std::to_string(i / dim_) + ", channel " +
                       std::to_string(i % dim_));
    }
  }
}

SampledPath SampledPath::univariate(std::vector<double> times, std::vector<double> values) {
  return SampledPath(std::move(times), std::move(values), 1);
}

std::vector<double> SampledPath::channel_values(int c) const {
  if (c < 0 || c >= dim_) throw InputError("channel " + std::to_string(c) + " out of range");
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = value(i, c);
  return out;
}

SampledPath SampledPath::channel(int c) const { return univariate(times_, channel_values(c)); }

std::vector<double> SampledPath::interpolate(double t) const {
  std::vector<double> out(static_cast<std::size_t>(dim_));
  if (t <= times_.front()) {
    auto p = point(0);
    return {p.begin(), p.end()};
  }
  if (t >= times_.back()) {
    auto p = point(size() - 1);
    return {p.begin(), p.end()};
  }
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  for (int c = 0; c < dim_; ++c) out[c] = (1.0 - w) * value(lo, c) + w * value(hi, c);
  return out;
}

SampledPath SampledPath::restrict_to(double lo, double hi) const {
  lo = std::max(lo, times_.front());
  hi = std::min(hi, times_.back());
  if (!(hi > lo)) throw InputError("empty restriction window");
  std::vector<double> t;
  std::vector<double> v;
  auto push = [&](double time, std::span<const double> p) {
    t.push_back(time);
    v.insert(v.end(), p.begin(), p.end());
  };
  const auto first_inside = interpolate(lo);
  push(lo, first_inside);
  for (std::size_t i = 0; i < size(); ++i) {
    if (times_[i] > lo && times_[i] < hi) push(times_[i], point(i));
  }
  const auto last_inside = interpolate(hi);
  push(hi, last_inside);
  return SampledPath(std::move(t), std::move(v), dim_);
}

}  // namespace siginv
