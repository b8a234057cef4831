#include "siginv/datagen.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "siginv/errors.hpp"
#include "siginv/rng.hpp"

namespace siginv {

namespace {

std::vector<double> unit_grid(int length) {
  if (length < 2) throw InputError("paths need at least two samples");
  std::vector<double> u(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) u[static_cast<std::size_t>(i)] = static_cast<double>(i) / (length - 1);
  return u;
}

void require_count(int count) {
  if (count < 0) throw ConfigError("path count must be >= 0");
}

}  // namespace

std::vector<SampledPath> gen_sines(const SinesConfig& config) {
  require_count(config.count);
  if (config.channels < 1) throw ConfigError("sines need at least one channel");
  if (!(config.freq_max >= config.freq_min)) throw ConfigError("sines frequency range is empty");
  const auto grid = unit_grid(config.length);
  Rng rng = SeedTree(config.seed).stream("sines");
  std::uniform_real_distribution<double> freq(config.freq_min * config.freq_scale,
                                              config.freq_max * config.freq_scale);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<SampledPath> out;
  out.reserve(static_cast<std::size_t>(config.count));
  const auto d = static_cast<std::size_t>(config.channels);
  for (int n = 0; n < config.count; ++n) {
    std::vector<double> v(grid.size() * d);
    for (std::size_t c = 0; c < d; ++c) {
      const double f = freq(rng);
      const double p = phase(rng);
      for (std::size_t i = 0; i < grid.size(); ++i) v[i * d + c] = std::sin(2.0 * std::numbers::pi * f * grid[i] + p);
    }
    out.emplace_back(grid, std::move(v), config.channels);
  }
  return out;
}

std::vector<SampledPath> gen_noisy_sines(const NoisySinesConfig& config) {
  require_count(config.count);
  if (config.terms < 1) throw ConfigError("noisy sines need at least one term");
  const auto grid = unit_grid(config.length);
  Rng rng = SeedTree(config.seed).stream("noisy-sines");
  std::uniform_real_distribution<double> freq(config.freq_min, config.freq_max);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> amp(0.5, 1.0);
  std::normal_distribution<double> noise(0.0, config.noise);
  std::vector<SampledPath> out;
  for (int n = 0; n < config.count; ++n) {
    std::vector<double> v(grid.size(), 0.0);
    for (int k = 0; k < config.terms; ++k) {
      const double a = amp(rng), f = freq(rng), p = phase(rng);
      for (std::size_t i = 0; i < grid.size(); ++i) v[i] += a * std::sin(2.0 * std::numbers::pi * f * grid[i] + p);
    }
    if (config.noise > 0.0) {
      for (double& x : v) x += noise(rng);
    }
    out.push_back(SampledPath::univariate(grid, std::move(v)));
  }
  return out;
}

// ---- predator-prey ----------------------------------------------------------

void predator_prey_rhs(double x, double y, double& dx, double& dy) {
  dx = (2.0 / 3.0) * x - (2.0 / 3.0) * x * y;
  dy = x * y - y;
}

double predator_prey_invariant(double x, double y) {
  return x - std::log(x) + (2.0 / 3.0) * (y - std::log(y));
}

SampledPath predator_prey_trajectory(double x0, double y0, int length, double t_end, int substeps) {
  if (!(x0 > 0.0) || !(y0 > 0.0)) throw DomainError("predator-prey initial state must be positive");
  if (substeps < 1 || !(t_end > 0.0)) throw ConfigError("predator-prey needs substeps >= 1 and t_end > 0");
  auto grid = unit_grid(length);
  for (double& t : grid) t *= t_end;
  const double h = t_end / ((length - 1) * static_cast<double>(substeps));
  std::vector<double> v;
  v.reserve(grid.size() * 2);
  double x = x0, y = y0;
  v.push_back(x);
  v.push_back(y);
  for (int i = 1; i < length; ++i) {
    for (int s = 0; s < substeps; ++s) {
      double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y;
      predator_prey_rhs(x, y, k1x, k1y);
      predator_prey_rhs(x + 0.5 * h * k1x, y + 0.5 * h * k1y, k2x, k2y);
      predator_prey_rhs(x + 0.5 * h * k2x, y + 0.5 * h * k2y, k3x, k3y);
      predator_prey_rhs(x + h * k3x, y + h * k3y, k4x, k4y);
      x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    }
    if (!std::isfinite(x) || !std::isfinite(y)) throw NumericalError("predator-prey integration diverged");
    v.push_back(x);
    v.push_back(y);
  }
  return SampledPath(std::move(grid), std::move(v), 2);
}

std::vector<SampledPath> gen_predator_prey(const PredatorPreyConfig& config) {
  require_count(config.count);
  if (!(config.ic_min > 0.0) || !(config.ic_max >= config.ic_min)) {
    throw ConfigError("predator-prey initial box must be positive and nonempty");
  }
  Rng rng = SeedTree(config.seed).stream("predator-prey");
  std::uniform_real_distribution<double> ic(config.ic_min, config.ic_max);
  std::vector<SampledPath> out;
  for (int n = 0; n < config.count; ++n) {
    const double x0 = ic(rng);
    const double y0 = ic(rng);
    out.push_back(predator_prey_trajectory(x0, y0, config.length, config.t_end, config.substeps));
  }
  return out;
}

// ---- fractional Brownian motion -------------------------------------------

std::vector<SampledPath> gen_fbm(const FbmConfig& config) {
  require_count(config.count);
  if (!(config.hurst > 0.0 && config.hurst < 1.0)) throw DomainError("Hurst index must lie in (0, 1)");
  const auto grid = unit_grid(config.length);
  // B_0 = 0 is deterministic, so factor the covariance of the remaining times.
  const Eigen::Index n = config.length - 1;
  const double h2 = 2.0 * config.hurst;
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double s = grid[static_cast<std::size_t>(i + 1)];
      const double t = grid[static_cast<std::size_t>(j + 1)];
      cov(i, j) = 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  double jitter = 1e-12 * cov.trace() / static_cast<double>(n);
  for (int attempt = 0; llt.info() != Eigen::Success; ++attempt) {
    if (attempt == 8) throw NumericalError("fBM covariance is not positive definite even with jitter");
    Eigen::MatrixXd c = cov;
    c.diagonal().array() += jitter;
    llt.compute(c);
    jitter *= 10.0;
  }
  const Eigen::MatrixXd L = llt.matrixL();

  Rng rng = SeedTree(config.seed).stream("fbm");
  std::normal_distribution<double> n01;
  std::vector<SampledPath> out;
  Eigen::VectorXd z(n);
  for (int k = 0; k < config.count; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) z(i) = n01(rng);
    const Eigen::VectorXd b = L * z;
    std::vector<double> v(grid.size(), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i + 1)] = b(i);
    out.push_back(SampledPath::univariate(grid, std::move(v)));
  }
  return out;
}

// ---- CSV ----------------------------------------------------------------------

namespace {

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, delim)) out.push_back(cell);
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

double parse_cell(std::string cell, long row, std::size_t col) {
  const auto first = cell.find_first_not_of(" \t\r");
  const auto last = cell.find_last_not_of(" \t\r");
  cell = first == std::string::npos ? std::string() : cell.substr(first, last - first + 1);
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v)) {
    throw ParseError("non-numeric cell '" + cell + "' in column " + std::to_string(col), row);
  }
  return v;
}

}  // namespace

IngestResult ingest_csv(std::istream& in, const CsvLayout& layout) {
  if (layout.window < 2) throw ConfigError("window must be >= 2");
  if (layout.stride < 1) throw ConfigError("stride must be >= 1");
  if (layout.channels.empty()) throw ConfigError("select at least one channel");

  std::vector<std::vector<double>> table;
  std::string line;
  long row = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (row == 1 && layout.has_header) continue;
    const auto cells = split(line, layout.delimiter);
    if (columns == 0) {
      columns = cells.size();
      for (int c : layout.channels) {
        if (c < 0 || static_cast<std::size_t>(c) >= columns) {
          throw ParseError("channel column " + std::to_string(c) + " not present", row);
        }
      }
      if (layout.time_column >= 0 && static_cast<std::size_t>(layout.time_column) >= columns) {
        throw ParseError("time column not present", row);
      }
    } else if (cells.size() != columns) {
      throw ParseError("ragged row: expected " + std::to_string(columns) + " cells, got " + std::to_string(cells.size()),
                       row);
    }
    std::vector<double> vals(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) vals[c] = parse_cell(cells[c], row, c);
    table.push_back(std::move(vals));
  }

  IngestResult res;
  res.rows = table.size();
  const auto window = static_cast<std::size_t>(layout.window);
  const auto stride = static_cast<std::size_t>(layout.stride);
  res.window_count = res.rows >= window ? (res.rows - window) / stride + 1 : 0;
  if (res.window_count == 0) {
    res.warnings.push_back("file has " + std::to_string(res.rows) + " data rows, fewer than the window of " +
                           std::to_string(window) + "; no windows produced");
  }
  const auto d = layout.channels.size();
  for (std::size_t w = 0; w < res.window_count; ++w) {
    const std::size_t start = w * stride;
    std::vector<double> t(window), v(window * d);
    for (std::size_t i = 0; i < window; ++i) {
      const auto& r = table[start + i];
      t[i] = layout.time_column >= 0 ? r[static_cast<std::size_t>(layout.time_column)] : static_cast<double>(start + i);
      for (std::size_t c = 0; c < d; ++c) v[i * d + c] = r[static_cast<std::size_t>(layout.channels[c])];
    }
    res.paths.emplace_back(std::move(t), std::move(v), static_cast<int>(d));
  }
  return res;
}

IngestResult ingest_csv_file(const std::string& file, const CsvLayout& layout) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open " + file);
  return ingest_csv(in, layout);
}

void write_paths_csv(std::ostream& out, const std::vector<SampledPath>& paths) {
  const int d = paths.empty() ? 1 : paths.front().dim();
  out << "series,time";
  for (int c = 0; c < d; ++c) out << ",c" << c;
  out << '\n';
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t s = 0; s < paths.size(); ++s) {
    const auto& p = paths[s];
    if (p.dim() != d) throw ShapeError("path set mixes dimensions");
    for (std::size_t i = 0; i < p.size(); ++i) {
      out << s << ',' << p.time(i);
      for (int c = 0; c < d; ++c) out << ',' << p.value(i, c);
      out << '\n';
    }
  }
  out.precision(old);
}

std::vector<SampledPath> read_paths_csv(std::istream& in) {
  std::string line;
  long row = 1;
  if (!std::getline(in, line)) throw ParseError("empty path file", row);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, ',');
  if (header.size() < 3 || header[0] != "series" || header[1] != "time") {
    throw ParseError("path file header must start with series,time", row);
  }
  const std::size_t d = header.size() - 2;
  std::vector<SampledPath> out;
  std::vector<double> t, v;
  long current = -1;
  auto flush = [&] {
    if (current >= 0) out.emplace_back(std::move(t), std::move(v), static_cast<int>(d));
    t.clear();
    v.clear();
  };
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != d + 2) throw ParseError("ragged row in path file", row);
    const auto id = static_cast<long>(parse_cell(cells[0], row, 0));
    if (id != current) {
      if (id < current) throw ParseError("series ids must be nondecreasing", row);
      flush();
      current = id;
    }
    t.push_back(parse_cell(cells[1], row, 1));
    for (std::size_t c = 0; c < d; ++c) v.push_back(parse_cell(cells[c + 2], row, c + 2));
  }
  flush();
  return out;
}

}  // namespace siginv
