#pragma once

#include <string>
#include <vector>

namespace siginv {

enum class OrthoKind { legendre, jacobi, chebyshev, hermite_shift_scale };

struct OrthoParams {
  double alpha = 0.0;  // jacobi
  double beta = 0.0;   // jacobi
  double t0 = 0.0;     // hermite centre
  double eps = 0.05;   // hermite scale
};

/// Orthogonal polynomial system on [a, b] described by its three-term
/// recurrence p_n = (A_n t + B_n) p_{n-1} + C_n p_{n-2}, p_0 = 1,
/// p_1 = A_1 t + B_1, together with its weight and the norms (p_n, p_n).
class OrthoFamily {
 public:
  OrthoKind kind() const noexcept { return kind_; }
  const OrthoParams& params() const noexcept { return params_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

  /// A_0 is the (constant) leading coefficient of p_0, i.e. 1.
  double A(int n) const;
  double B(int n) const;
  double C(int n) const;
  double norm_sq(int n) const;
  double weight(double t) const;

  /// p_0(t) .. p_order(t) via the recurrence.
  std::vector<double> eval_all(int order, double t) const;
  double eval(int n, double t) const;

  /// Coefficients w_i of the weight's Taylor polynomial about t = a, so that
  /// w(t) ~ sum_i w_i (t - a)^i. Throws DomainError when the weight is not
  /// analytic at a (non-integer Jacobi beta, Chebyshev).
  std::vector<double> weight_taylor(int order) const;

  /// Same family on a sub-interval; used for truncated Hermite windows.
  OrthoFamily restricted(double lo, double hi) const;

  /// "legendre", "jacobi(0.5,0)", "chebyshev", "hermite(eps=0.05)".
  std::string name() const;

 private:
  friend OrthoFamily make_family(OrthoKind kind, const OrthoParams& params);
  OrthoKind kind_ = OrthoKind::legendre;
  OrthoParams params_{};
  double a_ = -1.0;
  double b_ = 1.0;
};

/// Validates parameters (Jacobi alpha, beta > -1; Hermite eps > 0) and
/// returns the family on its natural interval: [-1, 1] for Jacobi-type
/// families, [t0 - 6 eps, t0 + 6 eps] for shift-and-scale Hermite.
OrthoFamily make_family(OrthoKind kind, const OrthoParams& params = {});

/// Parses "legendre", "chebyshev", "jacobi:ALPHA:BETA", "hermite:EPS".
OrthoFamily parse_family(const std::string& text);

}  // namespace siginv
