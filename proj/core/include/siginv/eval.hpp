#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "siginv/ortho.hpp"
#include "siginv/path.hpp"

namespace siginv {

/// Asymptotic two-sided KS coefficient at the 5% level.
inline constexpr double kKsCoefficient05 = 1.358;

struct KsResult {
  double statistic = 0.0;
  double critical = 0.0;
  bool reject = false;
};

/// sup |F_a - F_b| and rejection against c(0.05) sqrt((m + n) / (m n)).
/// Throws InputError if either sample is empty.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct KsCell {
  std::size_t timepoint = 0;
  int channel = 0;
  double mean_ks = 0.0;
  double type1_rate = 0.0;
};

struct KsReport {
  double mean_ks = 0.0;
  double type1_rate = 0.0;
  int repeats = 0;
  int batch = 0;
  std::vector<KsCell> cells;

  std::string to_json() const;
  std::string to_csv() const;
};

struct KsProtocolConfig {
  std::vector<std::size_t> timepoints;
  int repeats = 1000;
  int batch = 64;
  std::uint64_t seed = 0;
};

/// For each (timepoint, channel): `repeats` times draw `batch` paths with
/// replacement from each side, run ks_two_sample on the marginal values,
/// and average statistic and rejection indicator.
KsReport ks_marginal_protocol(const std::vector<SampledPath>& real, const std::vector<SampledPath>& generated,
                              const KsProtocolConfig& config);

/// sqrt of the trapezoid-weighted mean of |x - y|^2 (summed over channels).
/// Throws InputError if the grids or dimensions differ.
double l2_error(const SampledPath& x, const SampledPath& y);

struct SweepBasis {
  enum class Kind { fourier, ortho } kind = Kind::fourier;
  bool mirror = false;
  OrthoFamily family{};
  std::string label;
};

SweepBasis fourier_basis(bool mirror);
SweepBasis ortho_basis(const OrthoFamily& family);

struct SweepRow {
  std::string basis;
  int order = 0;
  double mean_l2 = 0.0;
};

/// Mean reconstruction L2 error per (basis, order) over univariate paths.
std::vector<SweepRow> approximation_sweep(const std::vector<SampledPath>& paths, const std::vector<SweepBasis>& bases,
                                          const std::vector<int>& orders);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace siginv
