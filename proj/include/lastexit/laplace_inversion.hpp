#pragma once

// Numerical inversion of Laplace transforms along deformed Bromwich contours.
// Both routines run in long double: the fixed-Talbot sum adds terms of size
// exp(2M/5) and loses that many digits to cancellation.

#include <cmath>
#include <complex>
#include <string>

#include "lastexit/errors.hpp"

namespace lastexit::inversion {

using real = long double;
using complex = std::complex<real>;

/// Fixed-Talbot approximation of f(t) = L^{-1}[F](t), t > 0, with M nodes.
/// The contour is shifted right by `shift`; every singularity of F must lie
/// left of it in the sense that F(s + shift) is analytic in Re s >= 0.
template <class F>
real talbot(const F& transform, real t, int nodes, real shift = 0) {
  const real pi = std::acos(real(-1));
  const real M = real(nodes);
  const real r = real(2) * M / (real(5) * t);
  real sum = real(0.5) * std::real(std::exp(complex(r + shift) * t) * transform(complex(r + shift)));
  for (int k = 1; k < nodes; ++k) {
    const real th = real(k) * pi / M;
    const real cot = std::cos(th) / std::sin(th);
    const complex s(r * th * cot + shift, r * th);
    const real sigma = th + (th * cot - real(1)) * cot;
    sum += std::real(std::exp(s * t) * transform(s) * complex(1, sigma));
  }
  return r / M * sum;
}

struct EulerSettings {
  real damping = 28;  ///< A: discretisation error ~ exp(-A)
  int terms = 40;     ///< n: plain partial-sum length
  int euler = 16;     ///< m: binomial averaging depth
};

namespace detail {

template <class F>
real euler_sum(const F& transform, real t, real shift, const EulerSettings& cfg, int terms) {
  const real pi = std::acos(real(-1));
  const real a = cfg.damping / (real(2) * t);
  auto term = [&](int k) {
    const complex s(a + shift, real(k) * pi / t);
    const real v = std::real(transform(s));
    return (k % 2 == 0) ? v : -v;
  };
  // partial sums s_j, j = terms .. terms + euler
  real partial = real(0.5) * term(0);
  for (int k = 1; k <= terms; ++k) partial += term(k);
  real binom = 1, weighted = 0, total = 0;
  for (int j = 0; j <= cfg.euler; ++j) {
    if (j > 0) {
      partial += term(terms + j);
      binom *= real(cfg.euler - j + 1) / real(j);
    }
    weighted += binom * partial;
    total += binom;
  }
  return std::exp(cfg.damping / 2 + shift * t) / t * (weighted / total);
}

}  // namespace detail

/// Abate-Whitt Fourier series with Euler summation. Throws ConvergenceError
/// when two successive partial-sum lengths disagree beyond `tol` (absolute,
/// relative to `scale`).
template <class F>
real euler(const F& transform, real t, real shift, real scale, real tol = 1e-8,
           EulerSettings cfg = {}) {
  const real a = detail::euler_sum(transform, t, shift, cfg, cfg.terms);
  const real b = detail::euler_sum(transform, t, shift, cfg, cfg.terms + 12);
  if (!(std::abs(a - b) <= tol * std::max(scale, std::abs(b)))) {
    throw ConvergenceError("Euler-accelerated inversion did not converge at t = " +
                           std::to_string(double(t)) + " with " +
                           std::to_string(cfg.terms + 12 + cfg.euler) + " nodes");
  }
  return b;
}

}  // namespace lastexit::inversion
