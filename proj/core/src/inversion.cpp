#include "siginv/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "siginv/errors.hpp"

namespace siginv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_univariate(const SampledPath& x) {
  if (x.size() < 2) throw InputError("inversion needs a path with at least two samples");
  if (x.dim() != 1) throw InputError("inversion expects a univariate path, got dim " + std::to_string(x.dim()));
}

void require_order(int order) {
  if (order < 0) throw DomainError("basis order must be >= 0");
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// cos(r pi / 2) and sin(r pi / 2) for integer r >= 0, without rounding noise.
double cos_quarter(int r) {
  static constexpr double v[4] = {1.0, 0.0, -1.0, 0.0};
  return v[r % 4];
}
double sin_quarter(int r) {
  static constexpr double v[4] = {0.0, 1.0, 0.0, -1.0};
  return v[r % 4];
}

WordPoly letter(int alphabet, int l) { return WordPoly(alphabet, Word({l})); }

// Times of x concatenated with its reversal after a gap of one mean step.
void mirrored(const SampledPath& x, std::vector<double>& times, std::vector<double>& values) {
  const std::size_t L = x.size();
  const double t0 = x.time(0);
  const double t1 = x.time(L - 1);
  const double gap = (t1 - t0) / static_cast<double>(L - 1);
  times.assign(x.times().begin(), x.times().end());
  values = x.channel_values(0);
  for (std::size_t j = 0; j < L; ++j) {
    times.push_back(t1 + gap + (t1 - x.time(L - 1 - j)));
    values.push_back(x.value(L - 1 - j, 0));
  }
}

// Prepends the zero sample. The parameter time of the augmented path is the
// sample index; the basis time lives in channel 0.
SampledPath with_zero_start(const std::vector<double>& basis_times, const std::vector<std::vector<double>>& extra,
                            const std::vector<double>& last) {
  const std::size_t n = basis_times.size();
  const int dim = static_cast<int>(extra.size()) + 2;
  std::vector<double> param(n + 1);
  std::vector<double> vals;
  vals.reserve((n + 1) * static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i <= n; ++i) {
    param[i] = static_cast<double>(i);
    const std::size_t src = i == 0 ? 0 : i - 1;
    vals.push_back(basis_times[src]);
    for (const auto& ch : extra) vals.push_back(ch[src]);
    vals.push_back(i == 0 ? 0.0 : last[src]);
  }
  return SampledPath(std::move(param), std::move(vals), dim);
}

template <class Builder>
const FunctionalSet& cached(std::map<std::string, FunctionalSet>& cache, std::mutex& mu, const std::string& key,
                            Builder build) {
  std::lock_guard lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build()).first;
  return it->second;
}

std::string family_key(const OrthoFamily& f) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g", static_cast<int>(f.kind()),
                f.params().alpha, f.params().beta, f.params().t0, f.params().eps, f.a(), f.b());
  return buf;
}

// l_n = A_n N_{n-1}/N_n e1 > l_{n-1} + (A_n a + B_n) N_{n-1}/N_n l_{n-1} + C_n N_{n-2}/N_n l_{n-2}
void extend_recurrence(const OrthoFamily& family, int order, std::vector<WordPoly>& ell) {
  const double a = family.a();
  const WordPoly e1 = letter(2, 1);
  for (int n = static_cast<int>(ell.size()); n <= order; ++n) {
    const double nn = family.norm_sq(n);
    const double r1 = family.norm_sq(n - 1) / nn;
    WordPoly next = half_shuffle_right(e1, ell[static_cast<std::size_t>(n - 1)]) * (family.A(n) * r1);
    next += ell[static_cast<std::size_t>(n - 1)] * ((family.A(n) * a + family.B(n)) * r1);
    const double c = family.C(n);
    if (n >= 2 && c != 0.0) next += ell[static_cast<std::size_t>(n - 2)] * (c * family.norm_sq(n - 2) / nn);
    ell.push_back(std::move(next));
  }
}

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericalError(std::string("non-finite ") + what);
  }
}

}  // namespace

// ---- Fourier -------------------------------------------------------------

TimeMap fourier_time_map(const std::vector<double>& times, bool mirror) {
  if (times.size() < 2) throw InputError("inversion needs a path with at least two samples");
  const double t0 = times.front();
  const double t1 = times.back();
  double span = t1 - t0;
  if (mirror) span = 2.0 * span + span / static_cast<double>(times.size() - 1);
  TimeMap m;
  m.origin = t0;
  m.scale = kTwoPi / span;
  m.basis_start = 0.0;
  m.mirror = mirror;
  m.t_first = t0;
  m.t_last = t1;
  return m;
}

SampledPath augment_fourier(const SampledPath& x, bool mirror, TimeMap* map_out) {
  require_univariate(x);
  const TimeMap map = fourier_time_map(x.times(), mirror);
  std::vector<double> times;
  std::vector<double> values;
  if (mirror) {
    mirrored(x, times, values);
  } else {
    times = x.times();
    values = x.channel_values(0);
  }
  std::vector<double> tau(times.size()), s(times.size()), c(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    tau[i] = map.to_basis(times[i]);
    s[i] = std::sin(tau[i]);
    c[i] = std::cos(tau[i]) - 1.0;
  }
  // The last sample lands on 2 pi up to rounding; pin it so sin/cos close exactly.
  tau.back() = kTwoPi;
  s.back() = 0.0;
  c.back() = 0.0;
  if (map_out) *map_out = map;
  return with_zero_start(tau, {s, c}, values);
}

FunctionalSet fourier_functionals(int order) {
  require_order(order);
  static std::map<std::string, FunctionalSet> cache;
  static std::mutex mu;
  return cached(cache, mu, std::to_string(order), [order] {
    FunctionalSet set;
    set.kind = BasisKind::fourier;
    set.order = order;
    set.required_depth = order + 2;
    const WordPoly e1 = letter(4, 1);
    const WordPoly e2 = letter(4, 2);
    const WordPoly e3 = letter(4, 3);
    const WordPoly e4 = letter(4, 4);
    set.functionals.push_back(half_shuffle_right(e4, e1) * (1.0 / kTwoPi));

    std::vector<WordPoly> sin_pow{WordPoly(4, Word{})};
    std::vector<WordPoly> cos_pow{WordPoly(4, Word{})};
    for (int p = 1; p <= order; ++p) {
      sin_pow.push_back(shuffle(sin_pow.back(), e2));
      cos_pow.push_back(shuffle(cos_pow.back(), e3));
    }
    // Integrand cos(m t) x = Re((1 + c + i s)^m) x expanded in s = sin t, c = cos t - 1.
    for (int m = 1; m <= order; ++m) {
      WordPoly am(4), bm(4);
      for (int k = 0; k <= m; ++k) {
        const double ca = cos_quarter(m - k);
        const double sb = sin_quarter(m - k);
        if (ca == 0.0 && sb == 0.0) continue;
        const WordPoly base = shuffle(e4, sin_pow[static_cast<std::size_t>(m - k)]);
        for (int q = 0; q <= k; ++q) {
          const double w = binomial(m, k) * binomial(k, q) / std::numbers::pi;
          const WordPoly term = half_shuffle_right(shuffle(base, cos_pow[static_cast<std::size_t>(q)]), e1);
          if (ca != 0.0) am += term * (w * ca);
          if (sb != 0.0) bm += term * (w * sb);
        }
      }
      set.functionals.push_back(std::move(am));
      set.functionals.push_back(std::move(bm));
    }
    return set;
  });
}

std::vector<double> evaluate_functionals(const std::vector<WordPoly>& functionals, const SampledPath& path) {
  std::map<Word, std::size_t, CanonicalLess> index;
  std::vector<Word> words;
  for (const auto& f : functionals) {
    for (const auto& [w, c] : f.terms()) {
      if (index.emplace(w, words.size()).second) words.push_back(w);
    }
  }
  const std::vector<double> coeffs = word_coefficients(path, words);
  std::vector<double> out;
  out.reserve(functionals.size());
  for (const auto& f : functionals) {
    double s = 0.0;
    for (const auto& [w, c] : f.terms()) s += c * coeffs[index.at(w)];
    out.push_back(s);
  }
  return out;
}

namespace {

FourierCoeffs fourier_from_values(const std::vector<double>& v, int order, const TimeMap& map) {
  check_finite(v, "Fourier coefficient");
  FourierCoeffs out;
  out.a0 = v[0];
  for (int m = 1; m <= order; ++m) {
    out.a.push_back(v[static_cast<std::size_t>(2 * m - 1)]);
    out.b.push_back(v[static_cast<std::size_t>(2 * m)]);
  }
  out.map = map;
  return out;
}

}  // namespace

FourierCoeffs fourier_from_signature(const TruncatedTensor& sig, int order, const TimeMap& map) {
  const FunctionalSet& set = fourier_functionals(order);
  if (sig.dim() != 4) throw ShapeError("Fourier functionals need the 4-channel augmentation");
  std::vector<double> v;
  for (const auto& f : set.functionals) v.push_back(pair(f, sig));
  return fourier_from_values(v, order, map);
}

FourierCoeffs invert_fourier(const SampledPath& x, int order, bool mirror) {
  require_order(order);
  TimeMap map;
  const SampledPath aug = augment_fourier(x, mirror, &map);
  const FunctionalSet& set = fourier_functionals(order);
  return fourier_from_values(evaluate_functionals(set.functionals, aug), order, map);
}

// ---- orthogonal polynomials ---------------------------------------------

int PolyCoeffs::order() const noexcept {
  if (!alpha.empty()) return static_cast<int>(alpha.size()) - 1;
  if (!local.empty()) return static_cast<int>(local.front().alpha.size()) - 1;
  return -1;
}

FunctionalSet ortho_functionals(const OrthoFamily& family, int order) {
  require_order(order);
  static std::map<std::string, FunctionalSet> cache;
  static std::mutex mu;
  return cached(cache, mu, family_key(family) + "#" + std::to_string(order), [&] {
    FunctionalSet set;
    set.kind = BasisKind::ortho;
    set.order = order;
    set.required_depth = order + 2;
    const Word w21({2, 1});
    set.functionals.push_back(WordPoly(2, w21, family.A(0) / family.norm_sq(0)));
    if (order >= 1) {
      const double n1 = family.norm_sq(1);
      WordPoly l1(2, Word({1, 2, 1}), family.A(1) / n1);
      l1.add_term(Word({2, 1, 1}), family.A(1) / n1);
      l1.add_term(w21, (family.A(1) * family.a() + family.B(1)) / n1);
      set.functionals.push_back(std::move(l1));
    }
    extend_recurrence(family, order, set.functionals);
    return set;
  });
}

FunctionalSet taylor_weight_functionals(const OrthoFamily& family, int order, int taylor_order) {
  require_order(order);
  if (taylor_order < 0) throw DomainError("Taylor order must be >= 0");
  const std::vector<double> w = family.weight_taylor(taylor_order);
  FunctionalSet set;
  set.kind = BasisKind::ortho_taylor;
  set.order = order;
  set.required_depth = order + taylor_order + 2;

  // c_i = (e2 sh e1^{sh i}) > e1 pairs to the integral of x(t) (t - a)^i.
  const WordPoly e1 = letter(2, 1);
  std::vector<WordPoly> c;
  const WordPoly e2 = letter(2, 2);
  for (int i = 0; i <= taylor_order + 1; ++i) {
    c.push_back(half_shuffle_right(shuffle(e2, shuffle_power(e1, i)), e1));
  }

  WordPoly l0(2);
  for (int i = 0; i <= taylor_order; ++i) {
    if (w[static_cast<std::size_t>(i)] != 0.0) l0 += c[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
  }
  set.functionals.push_back(l0 * (family.A(0) / family.norm_sq(0)));
  if (order >= 1) {
    const double n1 = family.norm_sq(1);
    const double shift = family.A(1) * family.a() + family.B(1);
    WordPoly l1(2);
    for (int i = 0; i <= taylor_order; ++i) {
      const double wi = w[static_cast<std::size_t>(i)];
      if (wi == 0.0) continue;
      l1 += c[static_cast<std::size_t>(i + 1)] * (wi * family.A(1) / n1);
      l1 += c[static_cast<std::size_t>(i)] * (wi * shift / n1);
    }
    set.functionals.push_back(std::move(l1));
  }
  extend_recurrence(family, order, set.functionals);
  return set;
}

TimeMap ortho_time_map(const std::vector<double>& times, const OrthoFamily& family) {
  if (times.size() < 2) throw InputError("inversion needs a path with at least two samples");
  double lo = family.a(), hi = family.b();
  if (family.kind() == OrthoKind::hermite_shift_scale) {
    lo = kHermiteTimeStart;
    hi = kHermiteTimeEnd;
  }
  TimeMap m;
  m.origin = times.front();
  m.scale = (hi - lo) / (times.back() - times.front());
  m.basis_start = lo;
  m.t_first = times.front();
  m.t_last = times.back();
  return m;
}

namespace {

SampledPath augment_weighted(const std::vector<double>& tau, const std::vector<double>& x,
                             const OrthoFamily& family) {
  std::vector<double> wx(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const double w = family.weight(tau[i]);
    if (!std::isfinite(w)) {
      throw DomainError(family.name() + " weight is not finite at basis time " + std::to_string(tau[i]));
    }
    wx[i] = w * x[i];
  }
  return with_zero_start(tau, {}, wx);
}

std::vector<double> basis_times(const SampledPath& x, const TimeMap& map, double lo, double hi) {
  std::vector<double> tau(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) tau[i] = map.to_basis(x.time(i));
  tau.front() = lo;
  tau.back() = hi;
  return tau;
}

}  // namespace

SampledPath augment_ortho(const SampledPath& x, const OrthoFamily& family, TimeMap* map_out) {
  require_univariate(x);
  const TimeMap map = ortho_time_map(x.times(), family);
  const double hi = map.basis_start + (map.t_last - map.t_first) * map.scale;
  const auto tau = basis_times(x, map, map.basis_start, hi);
  if (map_out) *map_out = map;
  return augment_weighted(tau, x.channel_values(0), family);
}

PolyCoeffs ortho_from_signature(const TruncatedTensor& sig, const OrthoFamily& family, int order,
                                const TimeMap& map) {
  if (sig.dim() != 2) throw ShapeError("polynomial functionals need the 2-channel augmentation");
  const FunctionalSet set = ortho_functionals(family, order);
  PolyCoeffs out{family, {}, {}, map};
  for (const auto& f : set.functionals) out.alpha.push_back(pair(f, sig));
  check_finite(out.alpha, "polynomial coefficient");
  return out;
}

PolyCoeffs invert_hermite_pointwise(const SampledPath& x, double eps, int order, const std::vector<double>& centers) {
  require_univariate(x);
  require_order(order);
  const OrthoFamily probe = make_family(OrthoKind::hermite_shift_scale, {.eps = eps});
  const TimeMap map = ortho_time_map(x.times(), probe);
  const auto tau = basis_times(x, map, kHermiteTimeStart, kHermiteTimeEnd);
  const SampledPath basis_path = SampledPath::univariate(tau, x.channel_values(0));

  PolyCoeffs out{probe, {}, {}, map};
  for (double c : centers) {
    if (c < map.t_first - 1e-12 * (1.0 + std::abs(c)) || c > map.t_last + 1e-12 * (1.0 + std::abs(c))) {
      throw DomainError("Hermite centre outside the data interval");
    }
    const double center = std::clamp(map.to_basis(c), kHermiteTimeStart, kHermiteTimeEnd);
    const double lo = std::max(kHermiteTimeStart, center - kHermiteTruncation * eps);
    const double hi = std::min(kHermiteTimeEnd, center + kHermiteTruncation * eps);
    const OrthoFamily fam = make_family(OrthoKind::hermite_shift_scale, {.t0 = center, .eps = eps}).restricted(lo, hi);
    const SampledPath window = basis_path.restrict_to(lo, hi);
    const SampledPath aug = augment_weighted(window.times(), window.values(), fam);
    const FunctionalSet set = ortho_functionals(fam, order);
    LocalCoeffs lc{center, lo, hi, evaluate_functionals(set.functionals, aug)};
    check_finite(lc.alpha, "Hermite coefficient");
    out.local.push_back(std::move(lc));
  }
  return out;
}

PolyCoeffs invert_ortho(const SampledPath& x, const OrthoFamily& family, int order) {
  require_univariate(x);
  require_order(order);
  if (family.kind() == OrthoKind::hermite_shift_scale) {
    return invert_hermite_pointwise(x, family.params().eps, order, x.times());
  }
  TimeMap map;
  const SampledPath aug = augment_ortho(x, family, &map);
  const FunctionalSet& set = ortho_functionals(family, order);
  PolyCoeffs out{family, evaluate_functionals(set.functionals, aug), {}, map};
  check_finite(out.alpha, "polynomial coefficient");
  return out;
}

PolyCoeffs invert_ortho_taylor(const SampledPath& x, const OrthoFamily& family, int order, int taylor_order) {
  require_univariate(x);
  if (family.kind() == OrthoKind::hermite_shift_scale) {
    throw DomainError("the Taylor-weight variant needs a family on a fixed interval");
  }
  const TimeMap map = ortho_time_map(x.times(), family);
  const auto tau = basis_times(x, map, family.a(), family.b());
  const SampledPath aug = with_zero_start(tau, {}, x.channel_values(0));
  const FunctionalSet set = taylor_weight_functionals(family, order, taylor_order);
  PolyCoeffs out{family, evaluate_functionals(set.functionals, aug), {}, map};
  check_finite(out.alpha, "polynomial coefficient");
  return out;
}

// ---- reconstruction -----------------------------------------------------

namespace {

void check_grid(const TimeMap& map, const std::vector<double>& grid) {
  const double slack = 1e-9 * (std::abs(map.t_last - map.t_first) + 1.0);
  for (double t : grid) {
    if (t < map.t_first - slack || t > map.t_last + slack) {
      throw DomainError("reconstruction time " + std::to_string(t) + " outside the data interval");
    }
  }
}

}  // namespace

SampledPath reconstruct(const FourierCoeffs& coeffs, const std::vector<double>& grid) {
  check_grid(coeffs.map, grid);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double tau = coeffs.map.to_basis(grid[i]);
    double s = coeffs.a0;
    for (int m = 1; m <= coeffs.order(); ++m) {
      s += coeffs.a[static_cast<std::size_t>(m - 1)] * std::cos(m * tau) +
           coeffs.b[static_cast<std::size_t>(m - 1)] * std::sin(m * tau);
    }
    v[i] = s;
  }
  return SampledPath::univariate(grid, std::move(v));
}

SampledPath reconstruct(const PolyCoeffs& coeffs, const std::vector<double>& grid) {
  check_grid(coeffs.map, grid);
  std::vector<double> v(grid.size());
  if (coeffs.local.empty()) {
    const int order = coeffs.order();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double tau = std::clamp(coeffs.map.to_basis(grid[i]), coeffs.family.a(), coeffs.family.b());
      const auto p = coeffs.family.eval_all(order, tau);
      double s = 0.0;
      for (int n = 0; n <= order; ++n) s += coeffs.alpha[static_cast<std::size_t>(n)] * p[static_cast<std::size_t>(n)];
      v[i] = s;
    }
    return SampledPath::univariate(grid, std::move(v));
  }
  // Centres are produced in increasing order by invert_hermite_pointwise.
  std::vector<double> centers;
  for (const auto& lc : coeffs.local) centers.push_back(lc.center);
  const double eps = coeffs.family.params().eps;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double tau = coeffs.map.to_basis(grid[i]);
    std::size_t best = 0;
    for (std::size_t j = 1; j < centers.size(); ++j) {
      if (std::abs(centers[j] - tau) < std::abs(centers[best] - tau)) best = j;
    }
    const LocalCoeffs& lc = coeffs.local[best];
    const OrthoFamily fam = make_family(OrthoKind::hermite_shift_scale, {.t0 = lc.center, .eps = eps});
    const int order = static_cast<int>(lc.alpha.size()) - 1;
    const auto p = fam.eval_all(order, tau);
    double s = 0.0;
    for (int n = 0; n <= order; ++n) s += lc.alpha[static_cast<std::size_t>(n)] * p[static_cast<std::size_t>(n)];
    v[i] = s;
  }
  return SampledPath::univariate(grid, std::move(v));
}

}  // namespace siginv
