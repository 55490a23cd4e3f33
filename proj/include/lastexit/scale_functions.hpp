#pragma once

// q-scale functions W^(q), Z^(q), Z^(q)(., theta) and the auxiliary integrals
// built from them.
//
// Every quantity handled here is the inverse Laplace transform of
// N(s) / (psi(s) - q) for some numerator N analytic at the roots of psi = q:
//
//   W(x)               N = 1
//   Z(x, th)           N = psi[s, th]
//   Z[th1, th2](x)     N = psi[s, th1, th2]    (divided difference in th)
//   conv(x, th)        N = 1 / (s + th)        (= int_0^x e^{-th y} W(x - y) dy)
//
// For families whose psi is rational (Brownian, Cramer-Lundberg, perturbed
// Cramer-Lundberg) the inverse is a finite sum of residues at the roots of
// psi(s) = q. Otherwise the residue at Phi(q) is taken analytically and the
// bounded remainder is inverted numerically.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lastexit/divided_difference.hpp"
#include "lastexit/errors.hpp"
#include "lastexit/laplace_inversion.hpp"
#include "lastexit/levy_model.hpp"

namespace lastexit {

enum class ScaleMethod { ClosedForm, SeriesExpansion, BromwichInversion };

inline std::string_view to_string(ScaleMethod m) {
  switch (m) {
    case ScaleMethod::ClosedForm: return "ClosedForm";
    case ScaleMethod::SeriesExpansion: return "SeriesExpansion";
    case ScaleMethod::BromwichInversion: return "BromwichInversion";
  }
  return "?";
}

/// Below this argument the numerically inverted functions switch to their
/// small-x expansions.
inline constexpr double kSmallX = 1e-6;
inline constexpr int kDefaultInversionNodes = 48;

namespace detail {

/// Solves c2 l^2 + c1 l + c0 = 0 (real roots assumed), larger root first.
inline std::array<double, 2> real_quadratic_roots(double c2, double c1, double c0) {
  const double disc = std::max(0.0, c1 * c1 - 4.0 * c2 * c0);
  const double h = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
  double r1 = h / c2;
  double r2 = (h != 0.0) ? c0 / h : 0.0;
  if (r1 < r2) std::swap(r1, r2);
  return {r1, r2};
}

inline double polish_polynomial_root(const std::vector<double>& coef, double x) {
  // coef in decreasing degree
  for (int it = 0; it < 8; ++it) {
    double p = 0.0, dp = 0.0;
    for (double c : coef) {
      dp = dp * x + p;
      p = p * x + c;
    }
    if (dp == 0.0) break;
    const double step = p / dp;
    x -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

/// Sum over the roots beta_i of psi(l) = u of c_i e^{beta_i x}, c_i = 1/psi'(beta_i).
struct ExpSum {
  std::vector<double> beta;
  std::vector<double> coef;
  double w0 = 0.0;  ///< W(0+)
};

inline ExpSum rational_roots(const LevyModel& m, double u) {
  ExpSum e;
  const double qd = m.half_variance();
  const double d = m.linear_coefficient();
  switch (m.family) {
    case Family::BrownianDrift: {
      auto r = real_quadratic_roots(qd, d, -u);
      e.beta = {r[0], r[1]};
      break;
    }
    case Family::CramerLundberg: {
      const double rho = m.jump_mean_inv;
      auto r = real_quadratic_roots(d, d * rho - m.jump_rate - u, -u * rho);
      e.beta = {r[0], r[1]};
      e.w0 = 1.0 / d;
      break;
    }
    case Family::PerturbedCramerLundberg: {
      const double rho = m.jump_mean_inv;
      const std::vector<double> cubic{qd, qd * rho + d, d * rho - m.jump_rate - u, -u * rho};
      const double top = (u == 0.0 && psi_prime_at_zero(m) >= 0.0)
                             ? 0.0
                             : polish_polynomial_root(cubic, phi(m, u));
      // deflate: cubic = (l - top)(qd l^2 + b1 l + b0)
      const double b1 = cubic[1] + qd * top;
      const double b0 = cubic[2] + b1 * top;
      auto r = real_quadratic_roots(qd, b1, b0);
      e.beta = {top, polish_polynomial_root(cubic, r[0]), polish_polynomial_root(cubic, r[1])};
      break;
    }
    case Family::StableDrift:
      throw ModelError("StableDrift has no finite exponential representation of W");
  }
  for (double b : e.beta) e.coef.push_back(1.0 / lastexit::detail::psi_prime(m, b));
  return e;
}

/// Leading terms of the expansion 1/(psi(s) - u) ~ sum_j a_j s^{-(b_j + 1)}
/// as s -> infinity, so that W(x) ~ sum_j a_j x^{b_j} / Gamma(b_j + 1).
struct PowerTerm {
  double a;
  double b;
};

inline std::vector<PowerTerm> small_x_terms(const LevyModel& m, double u) {
  const double d = m.linear_coefficient();
  const double qd = m.half_variance();
  const double c = m.jump_rate + u;
  if (m.is_stable()) {
    const double al = m.alpha, mu = m.drift;
    return {{1.0, al - 1.0}, {mu, 2 * al - 2}, {u, 2 * al - 1}, {mu * mu, 3 * al - 3}};
  }
  if (qd > 0.0) {
    return {{1.0 / qd, 1.0}, {-d / (qd * qd), 2.0}, {(d * d / qd + c) / (qd * qd), 3.0}};
  }
  const double e = m.jump_rate * m.jump_mean_inv;
  return {{1.0 / d, 0.0}, {c / (d * d), 1.0}, {(c * c / (d * d) - e / d) / d, 2.0}};
}

/// x^{b+1} sum_k (th x)^k / Gamma(b + k + 2), the convolution of
/// y^b / Gamma(b + 1) with e^{th y} over [0, x].
inline double power_exp_conv(double b, double x, double th) {
  double term = std::pow(x, b + 1.0) / std::tgamma(b + 2.0);
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= th * x / (b + 1.0 + k);
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

/// Divided difference in th of power_exp_conv at (th1, th2).
inline double power_exp_conv_dd(double b, double x, double th1, double th2) {
  // sum_{k>=1} x^{b+1+k} h_{k-1}(th1, th2) / Gamma(b + k + 2)
  double scale = std::pow(x, b + 2.0) / std::tgamma(b + 3.0);
  double h = 1.0, p1 = 1.0, sum = scale;
  for (int k = 2; k < 200; ++k) {
    p1 *= th1;
    h = p1 + th2 * h;
    scale *= x / (b + 1.0 + k);
    const double term = scale * h;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace detail

/// Prepared evaluator of the q-scale functions of one model at fixed q.
class ScaleEvaluator {
 public:
  explicit ScaleEvaluator(const LevyModel& model, double q,
                          std::optional<ScaleMethod> method = std::nullopt,
                          int inversion_nodes = kDefaultInversionNodes)
      : model_(model), q_(q), nodes_(inversion_nodes) {
    validate(model_);
    if (!(q >= 0.0) || !std::isfinite(q)) throw DomainError("scale functions require q >= 0");
    if (nodes_ < 6) throw DomainError("inversion_nodes must be at least 6");
    const ScaleMethod natural = model_.family == Family::StableDrift ? ScaleMethod::BromwichInversion
                                : model_.family == Family::PerturbedCramerLundberg
                                    ? ScaleMethod::SeriesExpansion
                                    : ScaleMethod::ClosedForm;
    method_ = method.value_or(natural);
    if (method_ == ScaleMethod::ClosedForm && natural != ScaleMethod::ClosedForm)
      throw ModelError(std::string(to_string(model_.family)) + " has no closed-form scale function");
    if (method_ == ScaleMethod::SeriesExpansion && model_.is_stable())
      throw ModelError("StableDrift has no exponential series for its scale function");
    phi_ = lastexit::phi(model_, q_);
    if (method_ == ScaleMethod::BromwichInversion) {
      psi_prime_phi_ = lastexit::detail::psi_prime(model_, phi_);
      small_ = detail::small_x_terms(model_, q_);
    } else {
      sum_ = detail::rational_roots(model_, q_);
    }
  }

  const LevyModel& model() const { return model_; }
  double q() const { return q_; }
  ScaleMethod method() const { return method_; }
  int inversion_nodes() const { return nodes_; }
  double phi() const { return phi_; }

  /// W^(q)(x).
  double w(double x) const {
    check_x(x);
    if (x < 0.0) return 0.0;
    if (!sum_.beta.empty()) {
      double v = sum_.w0;
      for (std::size_t i = 0; i < sum_.beta.size(); ++i) v += sum_.coef[i] * std::expm1(sum_.beta[i] * x);
      return v;
    }
    if (x < kSmallX) {
      double v = 0.0;
      for (const auto& t : small_) v += t.a * std::pow(x, t.b) / std::tgamma(t.b + 1.0);
      return v;
    }
    return invert([](const inversion::complex&) { return inversion::complex(1); }, 1.0, x);
  }

  /// e^{-lambda x} W^(q)(x), without forming the (possibly overflowing) product.
  double w_discounted(double x, double lambda) const {
    check_x(x);
    if (x < 0.0) return 0.0;
    if (!sum_.beta.empty()) {
      double v = 0.0;
      for (std::size_t i = 0; i < sum_.beta.size(); ++i)
        v += sum_.coef[i] * std::exp((sum_.beta[i] - lambda) * x);
      return v;
    }
    if (x < kSmallX) return std::exp(-lambda * x) * w(x);
    const auto [dom, rem] = split([](const inversion::complex&) { return inversion::complex(1); }, 1.0, x);
    return dom * std::exp((phi_ - lambda) * x) + rem * std::exp(-lambda * x);
  }

  /// Z^(q)(x) = 1 + q int_0^x W^(q).
  double z(double x) const { return z(x, 0.0); }

  /// Z^(q)(x, theta) = e^{theta x} (1 + (q - psi(theta)) int_0^x e^{-theta y} W^(q)(y) dy).
  double z(double x, double theta) const {
    check_x(x);
    check_theta(theta);
    if (x <= 0.0) return std::exp(theta * x);
    if (!sum_.beta.empty()) {
      double v = 1.0;
      for (std::size_t i = 0; i < sum_.beta.size(); ++i)
        v += sum_.coef[i] * lastexit::detail::psi_dd1(model_, theta, sum_.beta[i]) *
             std::expm1(sum_.beta[i] * x);
      return v;
    }
    if (x < kSmallX) {
      // e^{th x} + (q - psi(th)) int_0^x e^{th (x - y)} W(y) dy
      const double gap = q_ - lastexit::detail::psi(model_, theta);
      double v = 0.0;
      for (const auto& t : small_) v += t.a * detail::power_exp_conv(t.b, x, theta);
      return std::exp(theta * x) + gap * v;
    }
    const auto th = inversion::real(theta);
    return invert(
        [&](const inversion::complex& s) {
          return lastexit::detail::psi_dd1(model_, s, inversion::complex(th));
        },
        lastexit::detail::psi_dd1(model_, phi_, theta), x);
  }

  /// Divided difference (Z(x, th1) - Z(x, th2)) / (th1 - th2), exact when th1 == th2.
  double z_dd(double x, double th1, double th2) const {
    check_x(x);
    check_theta(th1);
    check_theta(th2);
    if (x <= 0.0) return dd::exp_dd(th1, th2, x);
    if (!sum_.beta.empty()) {
      double v = 0.0;
      for (std::size_t i = 0; i < sum_.beta.size(); ++i)
        v += sum_.coef[i] * lastexit::detail::psi_dd2(model_, th1, th2, sum_.beta[i]) *
             std::expm1(sum_.beta[i] * x);
      return v;
    }
    if (x < kSmallX) {
      // [e^{th x}] + [(q - psi(th)) K(th)] with K(th) = int_0^x e^{th(x-y)} W(y) dy
      double k1 = 0.0, kdd = 0.0;
      for (const auto& t : small_) {
        k1 += t.a * detail::power_exp_conv(t.b, x, th1);
        kdd += t.a * detail::power_exp_conv_dd(t.b, x, th1, th2);
      }
      const double gap2 = q_ - lastexit::detail::psi(model_, th2);
      return dd::exp_dd(th1, th2, x) - lastexit::detail::psi_dd1(model_, th1, th2) * k1 + gap2 * kdd;
    }
    const auto t1 = inversion::real(th1), t2 = inversion::real(th2);
    return invert(
        [&](const inversion::complex& s) {
          return lastexit::detail::psi_dd2(model_, s, inversion::complex(t1), inversion::complex(t2));
        },
        lastexit::detail::psi_dd2(model_, phi_, th1, th2), x);
  }

  /// int_0^x e^{-theta y} W^(q)(x - y) dy.
  double conv(double x, double theta) const {
    check_x(x);
    check_theta(theta);
    if (x <= 0.0) return 0.0;
    if (!sum_.beta.empty()) {
      double v = 0.0;
      for (std::size_t i = 0; i < sum_.beta.size(); ++i)
        v += sum_.coef[i] * dd::exp_dd(sum_.beta[i], -theta, x);
      return v;
    }
    if (x < kSmallX) {
      double v = 0.0;
      for (const auto& t : small_) v += t.a * detail::power_exp_conv(t.b, x, -theta);
      return v;
    }
    const auto th = inversion::real(theta);
    return invert([&](const inversion::complex& s) { return inversion::real(1) / (s + th); },
                  1.0 / (phi_ + theta), x);
  }

  /// int_0^x W^(q)(y) dy.
  double integral_w(double x) const { return conv(x, 0.0); }

 private:
  void check_x(double x) const {
    if (std::isnan(x)) throw DomainError("scale function argument is NaN");
  }
  void check_theta(double theta) const {
    if (!(theta >= 0.0)) throw DomainError("scale functions require theta >= 0");
  }

  struct Parts {
    double dominant;   // coefficient of e^{Phi x}
    double remainder;  // everything else
  };

  // Inverse of N(s)/(psi(s) - q) split into the residue at Phi(q) and the
  // rest. n_at_phi is N(Phi(q)).
  template <class N>
  Parts split(const N& numerator, double n_at_phi, double x) const {
    using inversion::complex;
    using inversion::real;
    const real ph = phi_;
    const real res = real(n_at_phi) / real(psi_prime_phi_);
    const auto remainder = [&](const complex& s) {
      const complex f = numerator(s) / (lastexit::detail::psi(model_, s) - real(q_));
      return f - res / (s - ph);
    };
    // Shift keeps the real-axis node well clear of the peeled pole.
    const real base = real(2) * nodes_ / (real(5) * x);
    real shift = 0.5L;
    const real gap = std::max(real(0.1), real(0.1) * ph);
    if (std::abs(base + shift - ph) < gap) shift = ph + gap - base;
    const real a = inversion::talbot(remainder, real(x), nodes_, shift);
    const real b = inversion::talbot(remainder, real(x), std::max(6, 2 * nodes_ / 3), shift);
    const real scale = std::abs(res) * std::exp(ph * real(x)) + std::abs(a);
    real rem = a;
    if (std::abs(a - b) > real(1e-9) * std::max(scale, real(1e-5))) {
      rem = inversion::euler(remainder, real(x), real(0.5), std::max(scale, real(1e-5)));
    }
    return {double(res), double(rem)};
  }

  template <class N>
  double invert(const N& numerator, double n_at_phi, double x) const {
    const auto p = split(numerator, n_at_phi, x);
    return p.dominant * std::exp(phi_ * x) + p.remainder;
  }

  LevyModel model_;
  double q_;
  int nodes_;
  ScaleMethod method_ = ScaleMethod::ClosedForm;
  double phi_ = 0.0;
  double psi_prime_phi_ = 0.0;
  detail::ExpSum sum_;
  std::vector<detail::PowerTerm> small_;
};

inline double big_w(const ScaleEvaluator& ev, double x) { return ev.w(x); }
inline double big_z(const ScaleEvaluator& ev, double x) { return ev.z(x); }
inline double big_z2(const ScaleEvaluator& ev, double x, double theta) { return ev.z(x, theta); }

/// Numerical int_0^inf e^{-lambda x} W^(q)(x) dx, to compare with 1/(psi(lambda) - q).
inline double laplace_transform_check(const ScaleEvaluator& ev, double lambda) {
  constexpr double kMargin = 0.1;
  const double ph = ev.phi();
  if (!(lambda >= ph + kMargin))
    throw PreconditionError("laplace_transform_check requires lambda >= Phi(q) + 0.1");
  const double decay = lambda - ph;
  const double T = 40.0 / decay;
  auto f = [&](double x) { return ev.w_discounted(x, lambda); };
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0;
  // W may have a kink-free but steep start; split off [0, 1/decay] for the panel count.
  const double split = std::min(T, 1.0 / decay);
  const double head = gauss_kronrod<double, 61>::integrate(f, 0.0, split, 12, 1e-10, &err);
  const double body = gauss_kronrod<double, 61>::integrate(f, split, T, 12, 1e-10, &err);
  const double tail = ev.w_discounted(T, lambda) / decay;
  return head + body + tail;
}

}  // namespace lastexit
