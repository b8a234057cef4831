#include "siginv/ortho.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "siginv/errors.hpp"

namespace siginv {

double OrthoFamily::A(int n) const {
  if (n < 0) throw DomainError("recurrence index must be >= 0");
  if (n == 0) return 1.0;
  const double al = params_.alpha, be = params_.beta;
  switch (kind_) {
    case OrthoKind::legendre:
      return n == 1 ? 1.0 : (2.0 * n - 1.0) / n;
    case OrthoKind::chebyshev:
      return n == 1 ? 1.0 : 2.0;
    case OrthoKind::hermite_shift_scale:
      return 1.0 / params_.eps;
    case OrthoKind::jacobi: {
      if (n == 1) return 0.5 * (al + be + 2.0);
      const double s = 2.0 * n + al + be;
      return (s - 1.0) * s / (2.0 * n * (n + al + be));
    }
  }
  return 0.0;
}

double OrthoFamily::B(int n) const {
  if (n < 1) throw DomainError("B_n is defined for n >= 1");
  const double al = params_.alpha, be = params_.beta;
  switch (kind_) {
    case OrthoKind::legendre:
    case OrthoKind::chebyshev:
      return 0.0;
    case OrthoKind::hermite_shift_scale:
      return -params_.t0 / params_.eps;
    case OrthoKind::jacobi: {
      if (n == 1) return 0.5 * (al - be);
      const double s = 2.0 * n + al + be;
      return (s - 1.0) * (al * al - be * be) / (2.0 * n * (n + al + be) * (s - 2.0));
    }
  }
  return 0.0;
}

double OrthoFamily::C(int n) const {
  if (n < 2) return 0.0;
  const double al = params_.alpha, be = params_.beta;
  switch (kind_) {
    case OrthoKind::legendre:
      return -(n - 1.0) / n;
    case OrthoKind::chebyshev:
      return -1.0;
    case OrthoKind::hermite_shift_scale:
      return -(n - 1.0);
    case OrthoKind::jacobi: {
      const double s = 2.0 * n + al + be;
      return -(n + al - 1.0) * (n + be - 1.0) * s / (n * (n + al + be) * (s - 2.0));
    }
  }
  return 0.0;
}

double OrthoFamily::norm_sq(int n) const {
  if (n < 0) throw DomainError("norm index must be >= 0");
  const double al = params_.alpha, be = params_.beta;
  switch (kind_) {
    case OrthoKind::legendre:
      return 2.0 / (2.0 * n + 1.0);
    case OrthoKind::chebyshev:
      return n == 0 ? std::numbers::pi : 0.5 * std::numbers::pi;
    case OrthoKind::hermite_shift_scale:
      return params_.eps * std::sqrt(2.0 * std::numbers::pi) * std::exp(std::lgamma(n + 1.0));
    case OrthoKind::jacobi: {
      const double log2 = std::log(2.0) * (al + be + 1.0);
      if (n == 0) {
        // (a+b+1) Gamma(a+b+1) folded into Gamma(a+b+2) so a+b = -1 is fine.
        return std::exp(log2 + std::lgamma(al + 1.0) + std::lgamma(be + 1.0) - std::lgamma(al + be + 2.0));
      }
      const double lg = log2 + std::lgamma(n + al + 1.0) + std::lgamma(n + be + 1.0) -
                        std::lgamma(n + al + be + 1.0) - std::lgamma(n + 1.0);
      return std::exp(lg) / (2.0 * n + al + be + 1.0);
    }
  }
  return 0.0;
}

double OrthoFamily::weight(double t) const {
  switch (kind_) {
    case OrthoKind::legendre:
      return 1.0;
    case OrthoKind::chebyshev: {
      const double q = std::max(0.0, (1.0 - t) * (1.0 + t));
      return 1.0 / std::sqrt(q);
    }
    case OrthoKind::jacobi: {
      const double left = std::max(0.0, 1.0 - t);
      const double right = std::max(0.0, 1.0 + t);
      return std::pow(left, params_.alpha) * std::pow(right, params_.beta);
    }
    case OrthoKind::hermite_shift_scale: {
      const double s = (t - params_.t0) / params_.eps;
      return std::exp(-0.5 * s * s);
    }
  }
  return 0.0;
}

std::vector<double> OrthoFamily::eval_all(int order, double t) const {
  std::vector<double> p(static_cast<std::size_t>(std::max(order, 0)) + 1, 0.0);
  p[0] = 1.0;
  if (order >= 1) p[1] = A(1) * t + B(1);
  for (int n = 2; n <= order; ++n) p[n] = (A(n) * t + B(n)) * p[n - 1] + C(n) * p[n - 2];
  return p;
}

double OrthoFamily::eval(int n, double t) const { return eval_all(n, t)[static_cast<std::size_t>(n)]; }

std::vector<double> OrthoFamily::weight_taylor(int order) const {
  if (order < 0) throw DomainError("Taylor order must be >= 0");
  std::vector<double> w(static_cast<std::size_t>(order) + 1, 0.0);
  switch (kind_) {
    case OrthoKind::legendre:
      w[0] = 1.0;
      return w;
    case OrthoKind::chebyshev:
      throw DomainError("chebyshev weight is singular at the left end point");
    case OrthoKind::jacobi: {
      const double al = params_.alpha, be = params_.beta;
      if (a_ != -1.0) throw DomainError("Jacobi weight Taylor expansion is only provided about t = -1");
      if (be < 0.0 || be != std::floor(be)) {
        throw DomainError("Jacobi weight is not analytic at t = -1 for non-integer beta");
      }
      // (1-t)^a (1+t)^b = 2^a u^b (1 - u/2)^a with u = 1 + t.
      const int shift = static_cast<int>(be);
      double binom = 1.0;  // generalised binomial C(alpha, j)
      const double base = std::pow(2.0, al);
      for (int j = 0; shift + j <= order; ++j) {
        if (j > 0) binom *= (al - (j - 1)) / j;
        w[static_cast<std::size_t>(shift + j)] = base * binom * std::pow(-0.5, j);
      }
      return w;
    }
    case OrthoKind::hermite_shift_scale: {
      // d^i/dt^i exp(-s^2/2) = (-1/eps)^i He_i(s) exp(-s^2/2), s = (t - t0)/eps.
      const double eps = params_.eps;
      const double s = (a_ - params_.t0) / eps;
      const double w0 = weight(a_);
      double he_prev = 0.0, he = 1.0;
      double scale = 1.0;  // (-1/eps)^i / i!
      for (int i = 0; i <= order; ++i) {
        if (i > 0) {
          const double next = s * he - (i - 1) * he_prev;
          he_prev = he;
          he = next;
          scale *= -1.0 / (eps * i);
        }
        w[static_cast<std::size_t>(i)] = scale * he * w0;
      }
      return w;
    }
  }
  return w;
}

OrthoFamily OrthoFamily::restricted(double lo, double hi) const {
  if (!(hi > lo)) throw DomainError("restricted interval must have positive length");
  OrthoFamily f = *this;
  f.a_ = lo;
  f.b_ = hi;
  return f;
}

std::string OrthoFamily::name() const {
  char buf[96];
  switch (kind_) {
    case OrthoKind::legendre:
      return "legendre";
    case OrthoKind::chebyshev:
      return "chebyshev";
    case OrthoKind::jacobi:
      std::snprintf(buf, sizeof buf, "jacobi(%g,%g)", params_.alpha, params_.beta);
      return buf;
    case OrthoKind::hermite_shift_scale:
      std::snprintf(buf, sizeof buf, "hermite(eps=%g)", params_.eps);
      return buf;
  }
  return "unknown";
}

OrthoFamily make_family(OrthoKind kind, const OrthoParams& params) {
  OrthoFamily f;
  f.kind_ = kind;
  f.params_ = params;
  switch (kind) {
    case OrthoKind::legendre:
      f.params_.alpha = f.params_.beta = 0.0;
      break;
    case OrthoKind::chebyshev:
      f.params_.alpha = f.params_.beta = -0.5;
      break;
    case OrthoKind::jacobi:
      if (!(params.alpha > -1.0) || !(params.beta > -1.0)) {
        throw DomainError("Jacobi parameters must satisfy alpha, beta > -1");
      }
      break;
    case OrthoKind::hermite_shift_scale:
      if (!(params.eps > 0.0) || !std::isfinite(params.eps)) throw DomainError("Hermite eps must be > 0");
      f.a_ = params.t0 - 6.0 * params.eps;
      f.b_ = params.t0 + 6.0 * params.eps;
      return f;
  }
  f.a_ = -1.0;
  f.b_ = 1.0;
  return f;
}

OrthoFamily parse_family(const std::string& text) {
  auto fields = [&] {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
      const auto c = text.find(':', pos);
      out.push_back(text.substr(pos, c == std::string::npos ? std::string::npos : c - pos));
      if (c == std::string::npos) break;
      pos = c + 1;
    }
    return out;
  }();
  auto num = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw ConfigError("bad number '" + s + "' in family '" + text + "'");
      return v;
    } catch (const std::logic_error&) {
      throw ConfigError("bad number '" + s + "' in family '" + text + "'");
    }
  };
  const std::string& head = fields[0];
  if (head == "legendre" && fields.size() == 1) return make_family(OrthoKind::legendre);
  if (head == "chebyshev" && fields.size() == 1) return make_family(OrthoKind::chebyshev);
  if (head == "jacobi" && fields.size() == 3) {
    return make_family(OrthoKind::jacobi, {.alpha = num(fields[1]), .beta = num(fields[2])});
  }
  if (head == "hermite" && fields.size() <= 2) {
    OrthoParams p;
    if (fields.size() == 2) p.eps = num(fields[1]);
    return make_family(OrthoKind::hermite_shift_scale, p);
  }
  throw ConfigError("unknown basis family '" + text + "'");
}

}  // namespace siginv
