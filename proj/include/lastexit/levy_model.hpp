#pragma once

// Parametric spectrally negative Levy processes: Laplace exponent psi, its
// right inverse Phi, and the divided differences of psi that every transform
// in this library is assembled from.
//
// Each family has an exponent of the form
//
//   psi(l) = c1 * l + (sigma^2 / 2) * l^2 - a * l / (rho + l) + [l^alpha]
//
// where the linear coefficient c1 is -mu for BrownianDrift / StableDrift and
// +mu for the Cramer-Lundberg families.

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

#include "lastexit/divided_difference.hpp"
#include "lastexit/errors.hpp"

namespace lastexit {

enum class Family { BrownianDrift, CramerLundberg, PerturbedCramerLundberg, StableDrift };

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::BrownianDrift: return "BrownianDrift";
    case Family::CramerLundberg: return "CramerLundberg";
    case Family::PerturbedCramerLundberg: return "PerturbedCramerLundberg";
    case Family::StableDrift: return "StableDrift";
  }
  return "?";
}

inline Family family_from_string(std::string_view name) {
  if (name == "BrownianDrift") return Family::BrownianDrift;
  if (name == "CramerLundberg") return Family::CramerLundberg;
  if (name == "PerturbedCramerLundberg") return Family::PerturbedCramerLundberg;
  if (name == "StableDrift") return Family::StableDrift;
  throw ModelError("unknown model family '" + std::string(name) + "'");
}

/// Largest argument accepted by psi for the stable family.
inline constexpr double kStableLambdaMax = 1e8;

struct LevyModel {
  Family family = Family::BrownianDrift;
  double drift = 0.0;          ///< mu, see the sign convention above
  double sigma = 0.0;          ///< Gaussian coefficient
  double jump_rate = 0.0;      ///< a, claim arrival rate
  double jump_mean_inv = 0.0;  ///< rho, rate of the exponential claim size
  double alpha = 0.0;          ///< stable index in (1, 2)

  static LevyModel brownian_drift(double mu, double sigma = 1.0) {
    return {Family::BrownianDrift, mu, sigma, 0.0, 0.0, 0.0};
  }
  static LevyModel cramer_lundberg(double mu, double a, double rho) {
    return {Family::CramerLundberg, mu, 0.0, a, rho, 0.0};
  }
  static LevyModel perturbed_cramer_lundberg(double mu, double sigma, double a, double rho) {
    return {Family::PerturbedCramerLundberg, mu, sigma, a, rho, 0.0};
  }
  static LevyModel stable_drift(double mu, double alpha) {
    return {Family::StableDrift, mu, 0.0, 0.0, 0.0, alpha};
  }

  /// Coefficient of the linear term of psi.
  double linear_coefficient() const {
    return (family == Family::BrownianDrift || family == Family::StableDrift) ? -drift : drift;
  }
  double half_variance() const { return 0.5 * sigma * sigma; }
  bool has_jumps() const {
    return family == Family::CramerLundberg || family == Family::PerturbedCramerLundberg;
  }
  bool is_stable() const { return family == Family::StableDrift; }
  /// Only the pure Cramer-Lundberg family has paths of bounded variation.
  bool bounded_variation() const { return family == Family::CramerLundberg; }

  friend bool operator==(const LevyModel&, const LevyModel&) = default;
};

inline std::string describe(const LevyModel& m) {
  std::ostringstream os;
  os << to_string(m.family) << "(drift=" << m.drift;
  if (m.sigma != 0.0) os << ", sigma=" << m.sigma;
  if (m.has_jumps()) os << ", jump_rate=" << m.jump_rate << ", jump_mean_inv=" << m.jump_mean_inv;
  if (m.is_stable()) os << ", alpha=" << m.alpha;
  os << ")";
  return os.str();
}

/// psi'(0+), the mean of X_1.
inline double psi_prime_at_zero(const LevyModel& m) {
  double v = m.linear_coefficient();
  if (m.has_jumps()) v -= m.jump_rate / m.jump_mean_inv;
  return v;
}

/// Throws ModelError unless the parameters satisfy the family's invariants.
inline void validate(const LevyModel& m) {
  auto fail = [&](const std::string& why) { throw ModelError(describe(m) + ": " + why); };
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(m.drift) || !finite(m.sigma) || !finite(m.jump_rate) || !finite(m.jump_mean_inv) ||
      !finite(m.alpha))
    fail("parameters must be finite");
  if (m.sigma < 0.0) fail("sigma must be >= 0");
  switch (m.family) {
    case Family::BrownianDrift:
      if (!(m.sigma > 0.0)) fail("BrownianDrift requires sigma > 0");
      if (m.jump_rate != 0.0) fail("BrownianDrift requires jump_rate = 0");
      if (!(m.drift > 0.0)) fail("BrownianDrift requires drift > 0");
      break;
    case Family::CramerLundberg:
      if (m.sigma != 0.0) fail("CramerLundberg requires sigma = 0");
      if (!(m.jump_rate > 0.0)) fail("CramerLundberg requires jump_rate > 0");
      if (!(m.jump_mean_inv > 0.0)) fail("CramerLundberg requires jump_mean_inv > 0");
      if (!(m.drift > 0.0)) fail("CramerLundberg requires drift > 0");
      break;
    case Family::PerturbedCramerLundberg:
      if (!(m.sigma > 0.0)) fail("PerturbedCramerLundberg requires sigma > 0");
      if (!(m.jump_rate > 0.0)) fail("PerturbedCramerLundberg requires jump_rate > 0");
      if (!(m.jump_mean_inv > 0.0)) fail("PerturbedCramerLundberg requires jump_mean_inv > 0");
      break;
    case Family::StableDrift:
      if (m.sigma != 0.0 || m.jump_rate != 0.0) fail("StableDrift requires sigma = 0 and jump_rate = 0");
      if (!(m.alpha > 1.0 && m.alpha < 2.0)) fail("StableDrift requires alpha in (1,2)");
      if (!(m.drift > 0.0)) fail("StableDrift requires drift > 0");
      break;
  }
  if (psi_prime_at_zero(m) == 0.0) fail("psi'(0+) = 0 is not supported");
}

namespace detail {

// Unchecked evaluations; T is double, long double or a std::complex of them.
// Valid on the whole domain of analyticity (the Cramer-Lundberg part has a
// pole at -rho, the stable part a branch cut on the negative axis).

template <class T>
T psi(const LevyModel& m, T l) {
  using R = dd::real_t<T>;
  T v = T(R(m.linear_coefficient())) * l + T(R(m.half_variance())) * l * l;
  if (m.has_jumps()) v -= T(R(m.jump_rate)) * l / (T(R(m.jump_mean_inv)) + l);
  if (m.is_stable()) v += std::pow(l, R(m.alpha));
  return v;
}

template <class T>
T psi_prime(const LevyModel& m, T l) {
  using R = dd::real_t<T>;
  T v = T(R(m.linear_coefficient())) + T(R(2.0 * m.half_variance())) * l;
  if (m.has_jumps()) {
    const T d = T(R(m.jump_mean_inv)) + l;
    v -= T(R(m.jump_rate * m.jump_mean_inv)) / (d * d);
  }
  if (m.is_stable()) {
    if (l == T(0)) return v;
    v += T(R(m.alpha)) * std::pow(l, R(m.alpha - 1.0));
  }
  return v;
}

/// psi[x, y] = (psi(x) - psi(y)) / (x - y); psi'(x) when x == y.
template <class T>
T psi_dd1(const LevyModel& m, T x, T y) {
  using R = dd::real_t<T>;
  T v = T(R(m.linear_coefficient())) + T(R(m.half_variance())) * (x + y);
  if (m.has_jumps()) {
    const T rho = T(R(m.jump_mean_inv));
    v -= T(R(m.jump_rate * m.jump_mean_inv)) / ((rho + x) * (rho + y));
  }
  if (m.is_stable()) v += dd::pow_dd1(x, y, m.alpha);
  return v;
}

/// psi[x, y, z], the second divided difference.
template <class T>
T psi_dd2(const LevyModel& m, T x, T y, T z) {
  using R = dd::real_t<T>;
  T v = T(R(m.half_variance()));
  if (m.has_jumps()) {
    const T rho = T(R(m.jump_mean_inv));
    v += T(R(m.jump_rate * m.jump_mean_inv)) / ((rho + x) * (rho + y) * (rho + z));
  }
  if (m.is_stable()) v += dd::pow_dd2(x, y, z, m.alpha);
  return v;
}

inline void check_lambda(const LevyModel& m, double lambda, const char* what) {
  if (!(lambda >= 0.0)) throw DomainError(std::string(what) + " requires lambda >= 0");
  if (m.is_stable() && lambda > kStableLambdaMax)
    throw DomainError(std::string(what) + ": stable exponent evaluated beyond lambda = 1e8");
}

}  // namespace detail

/// Laplace exponent psi(lambda) = log E exp(lambda X_1), lambda >= 0.
inline double psi(const LevyModel& m, double lambda) {
  detail::check_lambda(m, lambda, "psi");
  if (lambda == 0.0) return 0.0;
  return detail::psi(m, lambda);
}

/// psi'(lambda); at lambda = 0 this is psi'(0+).
inline double psi_prime(const LevyModel& m, double lambda) {
  detail::check_lambda(m, lambda, "psi_prime");
  return detail::psi_prime(m, lambda);
}

/// psi[x, y] for x, y >= 0.
inline double psi_dd1(const LevyModel& m, double x, double y) {
  detail::check_lambda(m, x, "psi_dd1");
  detail::check_lambda(m, y, "psi_dd1");
  return detail::psi_dd1(m, x, y);
}

/// psi[x, y, z] for x, y, z >= 0.
inline double psi_dd2(const LevyModel& m, double x, double y, double z) {
  detail::check_lambda(m, x, "psi_dd2");
  detail::check_lambda(m, y, "psi_dd2");
  detail::check_lambda(m, z, "psi_dd2");
  return detail::psi_dd2(m, x, y, z);
}

/// Point where psi attains its minimum on [0, inf); 0 when psi'(0+) >= 0.
inline double psi_argmin(const LevyModel& m) {
  if (psi_prime_at_zero(m) >= 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (detail::psi_prime(m, hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200) throw ConvergenceError("psi_argmin: no sign change of psi'");
  }
  for (int i = 0; i < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (detail::psi_prime(m, mid) > 0.0 ? hi : lo) = mid;
  }
  return hi;
}

/// Right inverse of psi: the largest root of psi(lambda) = u, for u >= 0.
///
/// Bracketing on the increasing branch of psi, bisection to a width of 1e-8
/// and a Newton polish started from the right end of the bracket (monotone
/// convergence by convexity).
inline double phi(const LevyModel& m, double u) {
  if (!(u >= 0.0)) throw DomainError("phi requires u >= 0");
  const double lo0 = psi_argmin(m);
  if (u == 0.0 && lo0 == 0.0) return 0.0;

  double lo = lo0;
  double hi = std::max(1.0, 2.0 * lo0);
  int guard = 0;
  while (detail::psi(m, hi) <= u) {
    lo = hi;
    hi *= 2.0;
    if ((m.is_stable() && hi > kStableLambdaMax) || ++guard > 200)
      throw ConvergenceError("phi: could not bracket the root of psi(l) = u for u = " +
                             std::to_string(u));
  }
  for (int i = 0; i < 200 && hi - lo > 1e-8 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (detail::psi(m, mid) > u ? hi : lo) = mid;
  }
  // Newton from the right of the root
  double x = hi;
  constexpr int kNewtonCap = 100;
  for (int i = 0; i < kNewtonCap; ++i) {
    const double f = detail::psi(m, x) - u;
    const double df = detail::psi_prime(m, x);
    if (!(df > 0.0)) throw ConvergenceError("phi: psi' not positive during Newton polish");
    const double step = f / df;
    const double next = x - step;
    if (!(next >= lo0)) break;
    x = next;
    if (std::abs(step) <= 4 * std::numeric_limits<double>::epsilon() * std::max(x, 1e-300)) return x;
  }
  const double residual = std::abs(detail::psi(m, x) - u);
  if (residual <= 1e-12 * std::max(1.0, u)) return x;
  throw ConvergenceError("phi: Newton polish did not converge for u = " + std::to_string(u));
}

/// Phi'(u) = 1 / psi'(Phi(u)).
inline double phi_prime(const LevyModel& m, double u) {
  const double d = detail::psi_prime(m, phi(m, u));
  if (!(d > 0.0)) throw DomainError("phi_prime: psi'(Phi(u)) = 0");
  return 1.0 / d;
}

}  // namespace lastexit
