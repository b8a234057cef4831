#include "siginv/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "siginv/errors.hpp"
#include "siginv/inversion.hpp"
#include "siginv/rng.hpp"

namespace siginv {

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InputError("KS test needs two nonempty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double m = static_cast<double>(x.size());
  const double n = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n));
  }
  KsResult r;
  r.statistic = d;
  r.critical = kKsCoefficient05 * std::sqrt((m + n) / (m * n));
  r.reject = d > r.critical;
  return r;
}

KsReport ks_marginal_protocol(const std::vector<SampledPath>& real, const std::vector<SampledPath>& generated,
                              const KsProtocolConfig& config) {
  if (real.empty() || generated.empty()) throw InputError("KS protocol needs nonempty path sets");
  if (config.repeats < 1 || config.batch < 1) throw ConfigError("KS protocol needs repeats, batch >= 1");
  const int dim = real.front().dim();
  std::size_t min_len = real.front().size();
  for (const auto* set : {&real, &generated}) {
    for (const auto& p : *set) {
      if (p.dim() != dim) throw InputError("KS protocol: path dimensions differ");
      min_len = std::min(min_len, p.size());
    }
  }
  for (std::size_t tp : config.timepoints) {
    if (tp >= min_len) {
      throw InputError("KS timepoint " + std::to_string(tp) + " beyond path length " + std::to_string(min_len));
    }
  }

  Rng rng = SeedTree(config.seed).stream("ks-protocol");
  std::uniform_int_distribution<std::size_t> pick_real(0, real.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_gen(0, generated.size() - 1);
  const auto batch = static_cast<std::size_t>(config.batch);
  std::vector<double> ra(batch), ga(batch);

  KsReport rep;
  rep.repeats = config.repeats;
  rep.batch = config.batch;
  for (std::size_t tp : config.timepoints) {
    for (int c = 0; c < dim; ++c) {
      KsCell cell{tp, c, 0.0, 0.0};
      for (int r = 0; r < config.repeats; ++r) {
        for (std::size_t k = 0; k < batch; ++k) {
          ra[k] = real[pick_real(rng)].value(tp, c);
          ga[k] = generated[pick_gen(rng)].value(tp, c);
        }
        const KsResult res = ks_two_sample(ra, ga);
        cell.mean_ks += res.statistic;
        cell.type1_rate += res.reject ? 1.0 : 0.0;
      }
      cell.mean_ks /= config.repeats;
      cell.type1_rate /= config.repeats;
      rep.cells.push_back(cell);
    }
  }
  for (const auto& cell : rep.cells) {
    rep.mean_ks += cell.mean_ks;
    rep.type1_rate += cell.type1_rate;
  }
  if (!rep.cells.empty()) {
    rep.mean_ks /= static_cast<double>(rep.cells.size());
    rep.type1_rate /= static_cast<double>(rep.cells.size());
  }
  return rep;
}

std::string KsReport::to_json() const {
  nlohmann::json j;
  j["mean_ks"] = mean_ks;
  j["type1_rate"] = type1_rate;
  j["repeats"] = repeats;
  j["batch"] = batch;
  j["cells"] = nlohmann::json::array();
  for (const auto& c : cells) {
    j["cells"].push_back(
        {{"timepoint", c.timepoint}, {"channel", c.channel}, {"mean_ks", c.mean_ks}, {"type1_rate", c.type1_rate}});
  }
  return j.dump(2);
}

std::string KsReport::to_csv() const {
  std::ostringstream out;
  out.precision(10);
  out << "timepoint,channel,mean_ks,type1_rate\n";
  for (const auto& c : cells) out << c.timepoint << ',' << c.channel << ',' << c.mean_ks << ',' << c.type1_rate << '\n';
  out << "all,all," << mean_ks << ',' << type1_rate << '\n';
  return out.str();
}

double l2_error(const SampledPath& x, const SampledPath& y) {
  if (x.size() != y.size() || x.dim() != y.dim()) throw InputError("l2_error: paths differ in length or dimension");
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double tol = 1e-12 * (1.0 + std::abs(x.time(i)));
    if (std::abs(x.time(i) - y.time(i)) > tol) throw InputError("l2_error: paths live on different grids");
  }
  auto sq = [&](std::size_t i) {
    double s = 0.0;
    for (int c = 0; c < x.dim(); ++c) {
      const double d = x.value(i, c) - y.value(i, c);
      s += d * d;
    }
    return s;
  };
  double acc = 0.0;
  double prev = sq(0);
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double cur = sq(i);
    acc += 0.5 * (x.time(i) - x.time(i - 1)) * (prev + cur);
    prev = cur;
  }
  return std::sqrt(acc / (x.times().back() - x.times().front()));
}

SweepBasis fourier_basis(bool mirror) {
  SweepBasis b;
  b.kind = SweepBasis::Kind::fourier;
  b.mirror = mirror;
  b.label = mirror ? "fourier-mirror" : "fourier";
  return b;
}

SweepBasis ortho_basis(const OrthoFamily& family) {
  SweepBasis b;
  b.kind = SweepBasis::Kind::ortho;
  b.family = family;
  b.label = family.name();
  return b;
}

std::vector<SweepRow> approximation_sweep(const std::vector<SampledPath>& paths, const std::vector<SweepBasis>& bases,
                                          const std::vector<int>& orders) {
  if (paths.empty() || bases.empty() || orders.empty()) throw InputError("approximation sweep needs paths, bases and orders");
  std::vector<SweepRow> rows;
  for (const auto& basis : bases) {
    for (int order : orders) {
      double total = 0.0;
      for (const auto& x : paths) {
        SampledPath rec;
        if (basis.kind == SweepBasis::Kind::fourier) {
          rec = reconstruct(invert_fourier(x, order, basis.mirror), x.times());
        } else {
          rec = reconstruct(invert_ortho(x, basis.family, order), x.times());
        }
        total += l2_error(x, rec);
      }
      rows.push_back({basis.label, order, total / static_cast<double>(paths.size())});
    }
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "basis,order,mean_l2\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.10g", r.mean_l2);
    out << r.basis << ',' << r.order << ',' << buf << '\n';
  }
  return out.str();
}

}  // namespace siginv
