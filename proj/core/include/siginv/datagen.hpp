#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "siginv/path.hpp"

namespace siginv {

struct SinesConfig {
  int count = 256;
  int length = 100;
  int channels = 1;
  /// Frequency in cycles over the unit window, drawn uniformly from
  /// [freq_min, freq_max] * freq_scale.
  double freq_min = 0.0;
  double freq_max = 1.0;
  double freq_scale = 1.0;
  std::uint64_t seed = 0;
};

/// value = sin(2 pi f u + phi) on a uniform grid u in [0, 1], per channel.
std::vector<SampledPath> gen_sines(const SinesConfig& config);

struct NoisySinesConfig {
  int count = 15;
  int length = 200;
  int terms = 3;
  double freq_min = 0.5;
  double freq_max = 2.0;
  double noise = 0.05;
  std::uint64_t seed = 0;
};

/// Univariate sums of random sines with additive Gaussian noise on [0, 1].
std::vector<SampledPath> gen_noisy_sines(const NoisySinesConfig& config);

struct PredatorPreyConfig {
  int count = 256;
  int length = 1000;
  double t_end = 10.0;
  /// Initial conditions uniform in [ic_min, ic_max]^2.
  double ic_min = 0.5;
  double ic_max = 1.5;
  /// RK4 steps per output interval.
  int substeps = 10;
  std::uint64_t seed = 0;
};

/// Right-hand side of x' = 2/3 x - 2/3 x y, y' = x y - y.
void predator_prey_rhs(double x, double y, double& dx, double& dy);

/// Conserved quantity x - ln x + 2/3 (y - ln y).
double predator_prey_invariant(double x, double y);

/// One trajectory from (x0, y0) on a `length`-point grid over [0, t_end].
SampledPath predator_prey_trajectory(double x0, double y0, int length, double t_end, int substeps);

std::vector<SampledPath> gen_predator_prey(const PredatorPreyConfig& config);

struct FbmConfig {
  int count = 15;
  int length = 200;
  double hurst = 0.5;
  std::uint64_t seed = 0;
};

/// Exact fBM on t_i = i / (length - 1) via Cholesky of
/// 1/2 (s^{2H} + t^{2H} - |t - s|^{2H}); retries with growing diagonal
/// jitter before giving up with NumericalError.
std::vector<SampledPath> gen_fbm(const FbmConfig& config);

struct CsvLayout {
  bool has_header = true;
  int time_column = -1;  // -1: use row index as time
  std::vector<int> channels{0};
  int window = 1000;
  int stride = 200;
  char delimiter = ',';
};

struct IngestResult {
  std::vector<SampledPath> paths;
  std::size_t rows = 0;
  std::size_t window_count = 0;
  std::vector<std::string> warnings;
};

/// Slices a numeric CSV (one row per timestamp) into windows of
/// `layout.window` rows every `layout.stride` rows. Throws ParseError with
/// the 1-based file row on ragged rows or non-numeric cells.
IngestResult ingest_csv(std::istream& in, const CsvLayout& layout);
IngestResult ingest_csv_file(const std::string& file, const CsvLayout& layout);

/// Path sets as long-format CSV: header "series,time,c0,...,c{d-1}", one
/// row per (series, timestamp).
void write_paths_csv(std::ostream& out, const std::vector<SampledPath>& paths);
std::vector<SampledPath> read_paths_csv(std::istream& in);

}  // namespace siginv
