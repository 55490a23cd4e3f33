#pragma once

// Reference values computed without the library's scale-function code:
// textbook closed forms and plain composite quadrature.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// psi(l) = sigma^2 l^2 / 2 - mu l for Brownian motion with drift.
inline double bm_phi(double mu, double sigma, double q) {
  const double s2 = sigma * sigma;
  return (mu + std::sqrt(mu * mu + 2.0 * s2 * q)) / s2;
}

inline double bm_w(double mu, double sigma, double q, double x) {
  if (x < 0.0) return 0.0;
  const double s2 = sigma * sigma;
  const double root = std::sqrt(mu * mu + 2.0 * s2 * q);
  const double b1 = (mu + root) / s2, b2 = (mu - root) / s2;
  return (std::expm1(b1 * x) - std::expm1(b2 * x)) / root;
}

// Cramer-Lundberg psi(l) = mu l - a l / (rho + l); psi(l) = q is the quadratic
// mu l^2 + (mu rho - a - q) l - q rho = 0.
struct ClRoots {
  double big, small;
};

inline ClRoots cl_roots(double mu, double a, double rho, double q) {
  const double b = mu * rho - a - q, c = -q * rho;
  const double d = std::sqrt(b * b - 4.0 * mu * c);
  return {(-b + d) / (2.0 * mu), (-b - d) / (2.0 * mu)};
}

inline double cl_psi_prime(double mu, double a, double rho, double l) {
  return mu - a * rho / ((rho + l) * (rho + l));
}

inline double cl_w(double mu, double a, double rho, double q, double x) {
  if (x < 0.0) return 0.0;
  const auto r = cl_roots(mu, a, rho, q);
  // W(0) = 1 / mu, the rest through expm1 to keep small x accurate
  return 1.0 / mu + std::expm1(r.big * x) / cl_psi_prime(mu, a, rho, r.big) +
         std::expm1(r.small * x) / cl_psi_prime(mu, a, rho, r.small);
}

/// Density of the position at the last exit for Cramer-Lundberg, from the explicit example.
inline double cl_last_exit_density(double a, double rho, double mu, double x) {
  return a * rho / (a - mu * rho) * (std::exp(rho * x) - std::exp(a * x / mu));
}

/// Its Laplace transform E exp(theta X).
inline double cl_last_exit_density_lt(double a, double rho, double mu, double theta) {
  return a * rho / (a - mu * rho) * (1.0 / (rho + theta) - 1.0 / (a / mu + theta));
}

/// Composite Simpson on [lo, hi] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double s = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Hand-rolled generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
