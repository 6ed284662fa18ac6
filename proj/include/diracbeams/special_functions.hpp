#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "diracbeams/core.hpp"

namespace diracbeams {

namespace detail {

inline double bessel_j_series(int order, double x) {
  const double half = 0.5 * x;
  double lead = 1.0;
  for (int i = 1; i <= order; ++i) lead *= half / i;
  if (lead == 0.0) return 0.0;
  const double q = -half * half;
  double term = lead, sum = lead;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + order));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Miller's algorithm: downward recurrence from an index well above
// max(order, x), normalized with J_0 + 2 sum J_2k = 1. Returns J_0..J_top.
inline std::vector<double> bessel_j_miller(int top, double x) {
  const double span = std::max<double>(top, x);
  int start = static_cast<int>(span + std::sqrt(160.0 * span) + 20.0);
  start += start % 2;
  std::vector<double> out(static_cast<std::size_t>(top) + 1, 0.0);
  const double two_over_x = 2.0 / x;
  double next = 0.0, cur = 1e-300, norm = 0.0;
  for (int k = start; k >= 1; --k) {
    const double prev = k * two_over_x * cur - next;
    next = cur;
    cur = prev;  // J_{k-1}
    if (k - 1 <= top) out[static_cast<std::size_t>(k - 1)] = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      for (auto& v : out) v *= 1e-250;
    }
  }
  norm += cur;  // J_0
  for (auto& v : out) v /= norm;
  return out;
}

inline void check_bessel_args(int order, double x) {
  if (!std::isfinite(x)) throw DomainError("bessel_j: non-finite argument");
  if (x < 0.0) throw DomainError("bessel_j: negative argument");
  if (order < 0 || order > 10000) throw DomainError("bessel_j: order outside [0, 10000]");
}

}  // namespace detail

/// Cylindrical Bessel function of the first kind J_order(x) for integer
/// order >= 0 and x >= 0.
inline double bessel_j(int order, double x) {
  detail::check_bessel_args(order, x);
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  if (x < 1.0) return detail::bessel_j_series(order, x);
  return detail::bessel_j_miller(order, x)[static_cast<std::size_t>(order)];
}

/// J_n(x) for signed integer n, using J_{-n} = (-1)^n J_n.
inline double bessel_j_signed(int order, double x) {
  const double v = bessel_j(std::abs(order), x);
  return (order < 0 && (-order) % 2 == 1) ? -v : v;
}

/// {J_{n-1}(x), J_n(x), J_{n+1}(x)} for signed n in one pass.
inline std::array<double, 3> bessel_j_triplet(int order, double x) {
  if (x == 0.0 || x < 1.0)
    return {bessel_j_signed(order - 1, x), bessel_j_signed(order, x),
            bessel_j_signed(order + 1, x)};
  const int top = std::abs(order) + 1;
  detail::check_bessel_args(top, x);
  const auto table = detail::bessel_j_miller(top, x);
  auto pick = [&](int k) {
    const double v = table[static_cast<std::size_t>(std::abs(k))];
    return (k < 0 && (-k) % 2 == 1) ? -v : v;
  };
  return {pick(order - 1), pick(order), pick(order + 1)};
}

/// Associated Laguerre polynomial L_n^alpha(x), three-term recurrence.
inline cplx laguerre(int n, int alpha, cplx x) {
  if (n < 0 || n > 100) throw DomainError("laguerre: n outside [0, 100]");
  if (alpha < 0) throw DomainError("laguerre: negative alpha");
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
    throw DomainError("laguerre: non-finite argument");
  cplx prev(1.0, 0.0);
  if (n == 0) return prev;
  cplx cur = 1.0 + static_cast<double>(alpha) - x;
  for (int k = 1; k < n; ++k) {
    const cplx next = ((2.0 * k + 1.0 + alpha - x) * cur - (static_cast<double>(k) + alpha) * prev) /
                      static_cast<double>(k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// d/dx L_n^alpha(x) = -L_{n-1}^{alpha+1}(x).
inline cplx laguerre_derivative(int n, int alpha, cplx x) {
  if (n == 0) return 0.0;
  return -laguerre(n - 1, alpha + 1, x);
}

/// Square root with Re >= 0, and Im >= 0 when Re == 0.
inline cplx principal_sqrt(cplx z) {
  cplx r = std::sqrt(z);
  if (r.real() == 0.0 && r.imag() < 0.0) r = -r;
  return r;
}

}  // namespace diracbeams
