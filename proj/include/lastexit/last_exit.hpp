#pragma once

// Joint Laplace transforms of last exit times from the half-lines, occupation
// times up to those times and the position there, for a process killed at an
// independent exponential time e_r.
//
//   T+(r) = sup{0 < t <= e_r : X_t < 0},   T-(r) = sup{0 < t <= e_r : X_t > 0}
//
// All formulas are evaluated through divided differences of psi and of the
// scale functions, so ratios such as (u - psi(v)) / (Phi(u) - v) and
// (Phi(p+q+r) - Phi(p+r)) / q never cancel and are continuous at their
// removable singularities.  Zero values of p, q and theta are accepted and
// mean the continuous extension.

#include <cmath>
#include <string>

#include "lastexit/errors.hpp"
#include "lastexit/levy_model.hpp"
#include "lastexit/scale_functions.hpp"

namespace lastexit {

struct TransformQuery {
  double p = 0.0;      ///< discount rate on the last exit time
  double q = 0.0;      ///< discount rate on the occupation time
  double r = 0.0;      ///< rate of the exponential horizon
  double theta = 0.0;  ///< exponent on the position
  double x = 0.0;      ///< starting point
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

inline void check_query(const TransformQuery& qr, bool allow_r_zero) {
  require(std::isfinite(qr.x), "requires finite x");
  require(qr.p >= 0.0 && std::isfinite(qr.p), "requires p>=0");
  require(qr.q >= 0.0 && std::isfinite(qr.q), "requires q>=0");
  require(qr.theta >= 0.0 && std::isfinite(qr.theta), "requires theta>=0");
  if (allow_r_zero)
    require(qr.r >= 0.0 && std::isfinite(qr.r), "requires r>=0");
  else
    require(qr.r > 0.0 && std::isfinite(qr.r), "requires r>0");
}

inline void require_negative_mean(const LevyModel& m) {
  if (!(psi_prime_at_zero(m) < 0.0)) throw ModelError("requires ψ'(0+)<0");
}
inline void require_positive_mean(const LevyModel& m) {
  if (!(psi_prime_at_zero(m) > 0.0)) throw ModelError("requires ψ'(0+)>0");
}

/// r / Phi(r), with its limit psi'(0+) when Phi(r) = 0.
inline double r_over_phi(const LevyModel& m, double phi_r) {
  return detail::psi_dd1(m, phi_r, 0.0);
}

/// Common pieces of the T- transforms: Phi(r), Phi(p+r), Phi(p+q+r) and
/// (Phi(p+q+r) - Phi(p+r)) / q.
struct MinusParts {
  double phi_r, phi_u, phi_w, slope;
};

inline MinusParts minus_parts(const LevyModel& m, const TransformQuery& qr) {
  MinusParts s{};
  s.phi_r = phi(m, qr.r);
  s.phi_u = phi(m, qr.p + qr.r);
  s.phi_w = phi(m, qr.p + qr.q + qr.r);
  s.slope = 1.0 / detail::psi_dd1(m, s.phi_u, s.phi_w);
  return s;
}

inline void check_r_zero(const LevyModel& m, const TransformQuery& qr) {
  if (qr.r == 0.0) {
    if (!(psi_prime_at_zero(m) < 0.0))
      throw PreconditionError("r=0 requires ψ'(0+)<0");
  }
}

}  // namespace detail

/// E_x[exp(-p T+(r) - q int_0^{T+(r)} 1{X_s <= 0} ds); T+(r) < e_r].
inline double omega_plus_1(const LevyModel& m, const TransformQuery& qr) {
  validate(m);
  detail::check_query(qr, false);
  const double u = qr.p + qr.r, w = u + qr.q;
  const double phi_r = phi(m, qr.r);
  const ScaleEvaluator ev_r(m, qr.r), ev_u(m, u);
  const double phi_w = phi(m, w);
  const double slope = 1.0 / detail::psi_dd1(m, ev_u.phi(), phi_w);
  const double k = detail::r_over_phi(m, phi_r);
  return k * (ev_r.w(qr.x) - ev_u.w(qr.x)) + k * slope * ev_u.z(qr.x, phi_w) -
         qr.r * ev_r.integral_w(qr.x);
}

/// E_x[exp(-p T+(r) - q int_0^{T+(r)} 1{X_s <= 0} ds + theta X(T+(r))); T+(r) = e_r].
///
/// The factor multiplying Z^(p+r)(x, Phi(p+q+r)) carries the denominator
/// Phi(p+r) - theta, the form that is consistent with the x < 0 reduction.
inline double omega_plus_2(const LevyModel& m, const TransformQuery& qr) {
  validate(m);
  detail::check_query(qr, false);
  const double u = qr.p + qr.r, w = u + qr.q, th = qr.theta;
  const ScaleEvaluator ev_u(m, u);
  const double phi_u = ev_u.phi();
  const double phi_w = phi(m, w);
  const double slope = 1.0 / detail::psi_dd1(m, phi_u, phi_w);
  // r / (w - psi(th)) [Z(x,th) - psi[phi_u, th] slope Z(x, phi_w)], both
  // factors divided by (phi_w - th)
  const double bracket = detail::psi_dd2(m, phi_u, phi_w, th) * slope * ev_u.z(qr.x, phi_w) -
                         ev_u.z_dd(qr.x, th, phi_w);
  return qr.r / detail::psi_dd1(m, phi_w, th) * bracket;
}

/// E_x[exp(-p T-(r) + theta X(T-(r)) - q int_0^{T-(r)} 1{X_s >= 0} ds); T-(r) < e_r].
/// r = 0 is the infinite-horizon last exit time and needs psi'(0+) < 0.
inline double omega_minus_1(const LevyModel& m, const TransformQuery& qr) {
  validate(m);
  detail::check_query(qr, true);
  detail::check_r_zero(m, qr);
  const auto s = detail::minus_parts(m, qr);
  const ScaleEvaluator ev_w(m, qr.p + qr.q + qr.r);
  const double th = qr.theta;
  return s.phi_r * (s.slope * ev_w.z(qr.x, s.phi_u) * detail::psi_dd2(m, s.phi_w, th, th + s.phi_r) -
                    ev_w.z_dd(qr.x, th, th + s.phi_r));
}

/// E_x[exp(-p T-(r) - q int_0^{T-(r)} 1{X_s >= 0} ds - theta X(T-(r))); T-(r) = e_r].
inline double omega_minus_2(const LevyModel& m, const TransformQuery& qr) {
  validate(m);
  detail::check_query(qr, false);
  const auto s = detail::minus_parts(m, qr);
  const ScaleEvaluator ev_w(m, qr.p + qr.q + qr.r);
  return qr.r * s.slope / (qr.theta + s.phi_w) * ev_w.z(qr.x, s.phi_u) -
         qr.r * ev_w.conv(qr.x, qr.theta);
}

/// E_x[exp(-p T-(r) - q int_0^{T-(r)} 1{X_s >= 0} ds); T-(r) < e_r, X(T-(r)) = 0].
inline double creeping_transform(const LevyModel& m, double p, double q, double r, double x) {
  validate(m);
  const TransformQuery qr{p, q, r, 0.0, x};
  detail::check_query(qr, true);
  detail::check_r_zero(m, qr);
  if (m.sigma == 0.0) return 0.0;
  const auto s = detail::minus_parts(m, qr);
  const ScaleEvaluator ev_w(m, p + q + r);
  return m.half_variance() * s.phi_r * (s.slope * ev_w.z(x, s.phi_u) - ev_w.w(x));
}

/// E_x exp(-p T+(r)).
inline double laplace_T_plus(const LevyModel& m, double p, double r, double x) {
  validate(m);
  detail::check_query({p, 0.0, r, 0.0, x}, false);
  const double u = p + r;
  const double phi_r = phi(m, r);
  const double phi_u = phi(m, u);
  const double tail = r * std::exp(phi_u * x) * phi_prime(m, u) * (phi_u - phi_r) / (phi_r * phi_u);
  if (x < 0.0) return r / u + tail;
  const ScaleEvaluator ev_r(m, r), ev_u(m, u);
  return r * (ev_r.w(x) - ev_u.w(x)) / phi_r + tail + (1.0 - ev_r.z(x)) + r / u * ev_u.z(x);
}

/// E_x exp(-p T+), T+ the last time below 0 (finite when psi'(0+) > 0).
inline double laplace_T_plus_infinite_horizon(const LevyModel& m, double p, double x) {
  validate(m);
  detail::require_positive_mean(m);
  detail::require(p >= 0.0 && std::isfinite(p), "requires p>=0");
  detail::require(std::isfinite(x), "requires finite x");
  const double mean = psi_prime_at_zero(m);
  const ScaleEvaluator ev0(m, 0.0), ev_p(m, p);
  return mean * (ev0.w(x) - ev_p.w(x)) + std::exp(ev_p.phi() * x) * mean * phi_prime(m, p);
}

/// E_x exp(-q int_0^inf 1{X_s < 0} ds), psi'(0+) > 0.
inline double occupation_transform_negative(const LevyModel& m, double q, double x) {
  validate(m);
  detail::require_positive_mean(m);
  detail::require(q >= 0.0 && std::isfinite(q), "requires q>=0");
  detail::require(std::isfinite(x), "requires finite x");
  const double phi_q = phi(m, q);
  const ScaleEvaluator ev0(m, 0.0);
  // q / Phi(q) = psi[Phi(q), 0]
  return psi_prime_at_zero(m) / detail::psi_dd1(m, phi_q, 0.0) * ev0.z(x, phi_q);
}

/// E_x[exp(-p T- - q int_0^{T-} 1{X_s >= 0} ds + theta X(T-))], psi'(0+) < 0.
inline double joint_T_minus_infinite_horizon(const LevyModel& m, double p, double q, double theta,
                                             double x) {
  validate(m);
  detail::require_negative_mean(m);
  return omega_minus_1(m, {p, q, 0.0, theta, x});
}

/// E_x exp(theta X(T-)), psi'(0+) < 0.
inline double value_at_last_exit_transform(const LevyModel& m, double theta, double x) {
  validate(m);
  detail::require_negative_mean(m);
  detail::require(theta >= 0.0 && std::isfinite(theta), "requires theta>=0");
  detail::require(std::isfinite(x), "requires finite x");
  const ScaleEvaluator ev0(m, 0.0);
  const double phi0 = ev0.phi();
  // psi(theta + Phi(0)) / theta = psi[theta + Phi(0), Phi(0)],
  // psi(theta) / (Phi(0) - theta) = -psi[theta, Phi(0)]
  const double head = detail::psi_dd1(m, theta + phi0, phi0) - detail::psi_dd1(m, theta, phi0);
  const double z_diff = -phi0 * ev0.z_dd(x, theta, theta + phi0);
  return std::exp(phi0 * x) * phi_prime(m, 0.0) * head + z_diff;
}

/// E_x exp(-q int_0^inf 1{X_s > 0} ds), psi'(0+) < 0.
inline double occupation_transform_positive(const LevyModel& m, double q, double x) {
  validate(m);
  detail::require_negative_mean(m);
  detail::require(q >= 0.0 && std::isfinite(q), "requires q>=0");
  detail::require(std::isfinite(x), "requires finite x");
  const double phi0 = phi(m, 0.0);
  const ScaleEvaluator ev_q(m, q);
  return ev_q.z(x, phi0) * (phi0 / ev_q.phi() - 1.0) + ev_q.z(x);
}

/// Density of X(T-) on (-inf, 0) for the Cramer-Lundberg model with
/// premium rate mu, claim rate a and Exp(rho) claims, when mu < a / rho.
inline double last_exit_density_compound_poisson(double a, double rho, double mu, double x) {
  detail::require(a > 0.0 && rho > 0.0 && mu > 0.0, "requires a>0, rho>0, mu>0");
  if (!(mu * rho < a)) throw ModelError("requires μ<a/ρ (ψ'(0+)<0)");
  detail::require(x < 0.0, "requires x<0");
  return a * rho / (a - mu * rho) * (std::exp(rho * x) - std::exp(a * x / mu));
}

}  // namespace lastexit
