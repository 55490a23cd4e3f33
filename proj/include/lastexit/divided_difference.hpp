#pragma once

// Numerically stable divided differences of the elementary pieces that make up
// Laplace exponents: x -> x^alpha and x -> exp(x * t).
//
// All transforms in this library are written in terms of divided differences
// f[a,b] = (f(a) - f(b)) / (a - b) and f[a,b,c]. Evaluating them through the
// routines below keeps every removable singularity (a == b) exact.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <type_traits>

namespace lastexit::dd {

namespace detail {

template <class T>
struct real_of {
  using type = T;
};
template <class T>
struct real_of<std::complex<T>> {
  using type = T;
};

}  // namespace detail

template <class T>
using real_t = typename detail::real_of<T>::type;

/// Points closer than this fraction of their magnitude use series expansions.
inline constexpr double kClusterFraction = 0.1;
inline constexpr int kSeriesTerms = 24;

/// expm1(z) / z, equal to 1 at z = 0.
inline double exprel(double z) {
  if (std::abs(z) < 1e-5) return 1.0 + z * (0.5 + z / 6.0);
  return std::expm1(z) / z;
}

/// (exp(a t) - exp(b t)) / (a - b), without cancellation or overflow of the
/// intermediate exponentials.
inline double exp_dd(double a, double b, double t) {
  if (t == 0.0) return 0.0;
  // factor out the larger of the two exponentials
  if (a * t < b * t) std::swap(a, b);
  const double delta = (b - a) * t;  // <= 0
  return std::exp(a * t) * t * exprel(delta);
}

/// Second divided difference of lambda -> exp(lambda t) at (a, b, c).
inline double exp_dd2(double a, double b, double c, double t) {
  if (t == 0.0) return 0.0;
  // use the widest pair as the outer denominator
  double lo = std::min({a, b, c});
  double hi = std::max({a, b, c});
  double mid = a + b + c - lo - hi;
  const double spread = hi - lo;
  if (spread * std::abs(t) > 1e-3) {
    return (exp_dd(hi, mid, t) - exp_dd(mid, lo, t)) / (hi - lo);
  }
  // Taylor expansion around the mean: f''(m)/2 + f''''(m) * sum(d^2) / 48
  const double m = (a + b + c) / 3.0;
  const double s2 = (a - m) * (a - m) + (b - m) * (b - m) + (c - m) * (c - m);
  const double h3 = (a - m) * (b - m) * (c - m);
  const double em = std::exp(m * t);
  const double t2 = t * t;
  // complete homogeneous polynomials of the offsets: h2 = s2 / 2, h3 = e3
  return em * t2 * (0.5 + t2 * s2 / 48.0 + t2 * t * h3 / 120.0);
}

/// Generalised binomial coefficients C(alpha, k) for k = 0..n-1.
template <std::size_t N>
inline std::array<double, N> binomials(double alpha) {
  std::array<double, N> c{};
  c[0] = 1.0;
  for (std::size_t k = 1; k < N; ++k) c[k] = c[k - 1] * (alpha - double(k - 1)) / double(k);
  return c;
}

/// First divided difference of x -> x^alpha (principal branch).
template <class T>
T pow_dd1(T x, T y, double alpha) {
  using R = real_t<T>;
  const R scale = std::max(std::abs(x), std::abs(y));
  const R gap = std::abs(x - y);
  if (gap == R(0)) {
    if (scale == R(0)) return T(alpha == 1.0 ? 1.0 : 0.0);
    return T(R(alpha)) * std::pow(y, R(alpha - 1.0));
  }
  if (gap > R(kClusterFraction) * scale) {
    return (std::pow(x, R(alpha)) - std::pow(y, R(alpha))) / (x - y);
  }
  // y^(alpha-1) * sum_{k>=1} C(alpha,k) z^(k-1), z = (x - y) / y
  const auto coef = binomials<kSeriesTerms>(alpha);
  const T z = (x - y) / y;
  T sum(0);
  for (int k = kSeriesTerms - 1; k >= 1; --k) sum = sum * z + T(R(coef[k]));
  return std::pow(y, R(alpha - 1.0)) * sum;
}

/// Second divided difference of x -> x^alpha (principal branch).
template <class T>
T pow_dd2(T a, T b, T c, double alpha) {
  using R = real_t<T>;
  // order so that (p0, p2) is the most distant pair
  T p0 = a, p1 = b, p2 = c;
  const R dab = std::abs(a - b), dac = std::abs(a - c), dbc = std::abs(b - c);
  if (dab >= dac && dab >= dbc) {
    p0 = a; p1 = c; p2 = b;
  } else if (dbc >= dac && dbc >= dab) {
    p0 = b; p1 = a; p2 = c;
  }
  const R scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  const R spread = std::abs(p0 - p2);
  if (spread > R(kClusterFraction) * scale) {
    return (pow_dd1(p0, p1, alpha) - pow_dd1(p1, p2, alpha)) / (p0 - p2);
  }
  // Expansion around p1: sum_{k>=2} C(alpha,k) p1^(alpha-k) H_{k-2}(h0, h2),
  // H_j(u, v) = sum_{i=0..j} u^i v^(j-i).
  const auto coef = binomials<kSeriesTerms>(alpha);
  const T h0 = (p0 - p1) / p1;
  const T h2 = (p2 - p1) / p1;
  T hj(1), h0_pow(1), sum(0);
  for (int k = 2; k < kSeriesTerms; ++k) {
    sum += T(R(coef[k])) * hj;
    h0_pow *= h0;
    hj = h0_pow + h2 * hj;
  }
  return std::pow(p1, R(alpha - 2.0)) * sum;
}

}  // namespace lastexit::dd
