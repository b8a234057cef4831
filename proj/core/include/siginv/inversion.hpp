#pragma once

#include <string>
#include <vector>

#include "siginv/ortho.hpp"
#include "siginv/path.hpp"
#include "siginv/tensor_algebra.hpp"
#include "siginv/word_algebra.hpp"

namespace siginv {

/// Affine map between original timestamps and basis time,
/// tau = basis_start + (t - origin) * scale, plus the mirror bookkeeping
/// needed to evaluate a reconstruction back on the original grid.
struct TimeMap {
  double origin = 0.0;
  double scale = 1.0;
  double basis_start = 0.0;
  bool mirror = false;
  double t_first = 0.0;  // original interval covered by the data
  double t_last = 0.0;

  double to_basis(double t) const { return basis_start + (t - origin) * scale; }
  double to_original(double tau) const { return origin + (tau - basis_start) / scale; }
};

// ---- Fourier -------------------------------------------------------------

struct FourierCoeffs {
  double a0 = 0.0;
  std::vector<double> a;  // a_1..a_N
  std::vector<double> b;  // b_1..b_N
  TimeMap map;

  int order() const noexcept { return static_cast<int>(a.size()); }
};

/// Augmentation (t, sin t, cos t - 1, x(t)) on [0, 2 pi]. With `mirror` the
/// series is first concatenated with its reversal. A sample with value 0 is
/// prepended at basis time 0 so the value channel starts at 0; the
/// subsequent jump to x(t_0) is vertical and contributes nothing to the
/// integrals the functionals measure. Throws InputError for a non-univariate
/// path.
SampledPath augment_fourier(const SampledPath& x, bool mirror, TimeMap* map_out = nullptr);

/// Time map augment_fourier would use for this grid.
TimeMap fourier_time_map(const std::vector<double>& times, bool mirror);

enum class BasisKind { fourier, ortho, ortho_taylor };

/// Linear functionals on the signature that return basis coefficients.
struct FunctionalSet {
  BasisKind kind = BasisKind::fourier;
  int order = 0;
  /// Fourier: [a0, a1, b1, ..., aN, bN]; polynomial: [l_0 .. l_N].
  std::vector<WordPoly> functionals;
  int required_depth = 0;
};

FunctionalSet fourier_functionals(int order);

/// Values of each functional on the signature of `path`, computed word by
/// word so no dense tensor is materialised.
std::vector<double> evaluate_functionals(const std::vector<WordPoly>& functionals, const SampledPath& path);

/// Coefficients from an already computed signature of the augmented path
/// (dense, depth >= order + 2).
FourierCoeffs fourier_from_signature(const TruncatedTensor& sig, int order, const TimeMap& map);

FourierCoeffs invert_fourier(const SampledPath& x, int order, bool mirror);

// ---- orthogonal polynomials ---------------------------------------------

/// Expansion around one centre, used by the pointwise Hermite inversion.
struct LocalCoeffs {
  double center = 0.0;  // basis time
  double lo = 0.0;      // truncated window
  double hi = 0.0;
  std::vector<double> alpha;
};

struct PolyCoeffs {
  OrthoFamily family;
  std::vector<double> alpha;       // global expansion (empty for Hermite)
  std::vector<LocalCoeffs> local;  // pointwise Hermite expansions
  TimeMap map;

  int order() const noexcept;
};

/// Functionals l_0..l_N of the recurrence, for the augmentation
/// (t, w(t) x(t)) on [a, b] with a = family.a().
FunctionalSet ortho_functionals(const OrthoFamily& family, int order);

/// Functionals for the plain augmentation (t, x(t)): the weight enters
/// through its order-M Taylor polynomial about a. Required depth N + M + 2.
FunctionalSet taylor_weight_functionals(const OrthoFamily& family, int order, int taylor_order);

/// The 2-d augmented path (t, w(t) x(t)) with time mapped affinely onto
/// [family.a(), family.b()] and a zero sample prepended at t = a. Throws
/// DomainError when the weight is not finite at some sample.
SampledPath augment_ortho(const SampledPath& x, const OrthoFamily& family, TimeMap* map_out = nullptr);

/// Basis interval used when a family has no natural finite interval of its
/// own (Hermite windows live inside [0, 1]).
inline constexpr double kHermiteTimeStart = 0.0;
inline constexpr double kHermiteTimeEnd = 1.0;
/// Hermite windows are cut at centre +- this many eps.
inline constexpr double kHermiteTruncation = 6.0;

/// Polynomial coefficients alpha_0..alpha_N. For shift-and-scale Hermite the
/// inversion runs pointwise: one centred family (and functional set) per
/// sample time of x, windowed to the truncated support.
PolyCoeffs invert_ortho(const SampledPath& x, const OrthoFamily& family, int order);

/// Hermite pointwise inversion at explicit centres (original time units).
PolyCoeffs invert_hermite_pointwise(const SampledPath& x, double eps, int order,
                                    const std::vector<double>& centers);

/// Coefficients through the Taylor-weight functionals on (t, x(t)).
PolyCoeffs invert_ortho_taylor(const SampledPath& x, const OrthoFamily& family, int order, int taylor_order);

/// Coefficients from a dense signature of the (t, w x) augmentation.
PolyCoeffs ortho_from_signature(const TruncatedTensor& sig, const OrthoFamily& family, int order,
                                const TimeMap& map);

TimeMap ortho_time_map(const std::vector<double>& times, const OrthoFamily& family);

// ---- reconstruction -----------------------------------------------------

/// Truncated Fourier series on `grid` (original time units). Throws
/// DomainError if a grid point lies outside the data interval.
SampledPath reconstruct(const FourierCoeffs& coeffs, const std::vector<double>& grid);

/// Truncated polynomial series on `grid`. Pointwise Hermite expansions are
/// evaluated with the expansion whose centre is nearest each grid point.
SampledPath reconstruct(const PolyCoeffs& coeffs, const std::vector<double>& grid);

}  // namespace siginv
