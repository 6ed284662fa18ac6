#pragma once

// Bessel-superposition representation of the exponential packet.
//
//   f_Exp = int_{E_par}^inf dE e^{-i(Et - p_z z)/hbar} e^{i l phi} g(E)
//                              J_l(sqrt(E^2 - E_par^2) rho / (hbar c))
//   g(E)  = b e^{-b E/E_par} / E_par ((E - E_par)/(E + E_par))^{|l|/2}

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <vector>

#include "diracbeams/core.hpp"
#include "diracbeams/special_functions.hpp"

namespace diracbeams {

/// Relative weight decay e^{-b(E_cut - E_par)/E_par} = 1e-18 defines E_cut.
inline constexpr double kSpectralDecayDigits = 18.0;

inline double spectral_cutoff(const BeamParams& params, const PhysicalConstants& k) {
  const double e_par = derived_quantities(params, k).e_parallel;
  return e_par * (1.0 + kSpectralDecayDigits * std::numbers::ln10 / params.b);
}

inline double spectral_g(double energy, const BeamParams& params, const PhysicalConstants& k) {
  if (!(params.b > 0.0)) throw DomainError("spectral_g: b must be > 0");
  const double e_par = derived_quantities(params, k).e_parallel;
  if (energy < e_par) throw DomainError("spectral_g: E < E_parallel");
  const double x = energy / e_par;
  const double ratio = (x - 1.0) / (x + 1.0);
  const int abs_l = std::abs(params.l);
  double power = 1.0;
  if (abs_l > 0) power = (abs_l % 2 == 0) ? std::pow(ratio, abs_l / 2) : std::pow(ratio, 0.5 * abs_l);
  return params.b * std::exp(-params.b * x) / e_par * power;
}

/// Location of the maximum of g: E_par sqrt(1 + |l|/b).
inline double spectral_peak(const BeamParams& params, const PhysicalConstants& k) {
  if (!(params.b > 0.0)) throw DomainError("spectral_peak: b must be > 0");
  const double e_par = derived_quantities(params, k).e_parallel;
  return e_par * std::sqrt(1.0 + std::abs(params.l) / params.b);
}

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_floor = 1e-15;  // relative to the integral of |integrand|
  int max_intervals = 4000;
  int initial_intervals = 16;
};

struct QuadratureResult {
  cplx value;
  double error_estimate = 0.0;
  bool converged = false;
  int intervals = 0;
  int evaluations = 0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod nodes on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  cplx value;
  double error;
  double l1;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment kronrod15(F&& f, double a, double b) {
  const double center = 0.5 * (a + b), half = 0.5 * (b - a);
  const cplx fc = f(center);
  cplx kron = kKronrodWeights[7] * fc;
  cplx gauss = kGaussWeights[3] * fc;
  double l1 = kKronrodWeights[7] * std::abs(fc);
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const cplx f1 = f(center - dx), f2 = f(center + dx);
    kron += kKronrodWeights[j] * (f1 + f2);
    l1 += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  return {a, b, kron * half, std::abs((kron - gauss) * half), l1 * std::abs(half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G7/K15) quadrature of a complex integrand.
template <class F>
QuadratureResult integrate_gk(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  std::priority_queue<detail::Segment> heap;
  QuadratureResult res;
  const int n0 = std::max(1, opt.initial_intervals);
  cplx total(0.0);
  double err = 0.0, l1 = 0.0;
  for (int i = 0; i < n0; ++i) {
    const double lo = a + (b - a) * i / n0, hi = a + (b - a) * (i + 1) / n0;
    auto seg = detail::kronrod15(f, lo, hi);
    total += seg.value;
    err += seg.error;
    l1 += seg.l1;
    heap.push(seg);
  }
  res.evaluations = 15 * n0;
  auto target = [&] { return std::max(opt.rel_tol * std::abs(total), opt.abs_floor * l1); };
  while (err > target() && static_cast<int>(heap.size()) < opt.max_intervals) {
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::kronrod15(f, worst.a, mid);
    auto right = detail::kronrod15(f, mid, worst.b);
    res.evaluations += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to drop the drift of the incremental updates.
  total = 0.0;
  err = 0.0;
  for (; !heap.empty(); heap.pop()) {
    total += heap.top().value;
    err += heap.top().error;
    ++res.intervals;
  }
  res.value = total;
  res.error_estimate = err;
  res.converged = err <= target();
  return res;
}

/// Numerical Bessel superposition of the exponential packet at x.
inline QuadratureResult superpose_bessel(const BeamParams& params, const PhysicalConstants& k,
                                         const SpacetimePoint& x, QuadratureOptions opt = {}) {
  if (opt.rel_tol < 1e-12) throw std::invalid_argument("superpose_bessel: tolerance below 1e-12");
  const double e_par = derived_quantities(params, k).e_parallel;
  const double e_cut = spectral_cutoff(params, k);
  const double hbar = k.hbar(), hbar_c = k.hbar() * k.c();
  const cplx azimuth = std::polar(1.0, params.l * x.phi);
  auto integrand = [&](double energy) -> cplx {
    const double kperp = std::sqrt(std::max(0.0, energy * energy - e_par * e_par)) / hbar_c;
    const double j = bessel_j_signed(params.l, kperp * x.rho);
    return spectral_g(energy, params, k) * j * std::polar(1.0, -(energy * x.t - params.p_z * x.z) / hbar) * azimuth;
  };
  return integrate_gk(integrand, e_par, e_cut, opt);
}

/// Samples of g (or g_N when normalized) on an energy grid.
struct SpectralProfile {
  std::vector<double> energies;
  std::vector<double> weights;
  bool normalized = false;
};

inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

/// Uniform energy grid on [E_par, E_cut] with `count` points.
inline std::vector<double> spectral_energy_grid(double e_lo, double e_hi, int count) {
  if (count < 2 || !(e_hi > e_lo)) throw std::invalid_argument("spectral_energy_grid: invalid range");
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = e_lo + (e_hi - e_lo) * i / (count - 1);
  return grid;
}

/// g_N = g / int g, with the integral taken by the trapezoid rule on the grid.
inline SpectralProfile normalized_profile(const BeamParams& params, const PhysicalConstants& k,
                                          std::vector<double> energies) {
  if (energies.size() < 2) throw std::invalid_argument("normalized_profile: grid needs >= 2 energies");
  if (!std::is_sorted(energies.begin(), energies.end()))
    throw std::invalid_argument("normalized_profile: grid must be ascending");
  SpectralProfile prof;
  prof.energies = std::move(energies);
  prof.weights.reserve(prof.energies.size());
  // g up to its constant prefactor; the prefactor cancels in g_N and may underflow for large b.
  const double e_par = derived_quantities(params, k).e_parallel;
  for (double e : prof.energies) {
    if (e < e_par) throw DomainError("normalized_profile: grid starts below E_parallel");
    const double x = e / e_par;
    const double ratio = (x - 1.0) / (x + 1.0);
    prof.weights.push_back(std::exp(-params.b * (x - 1.0)) * std::pow(ratio, 0.5 * std::abs(params.l)));
  }
  const double area = trapezoid(prof.energies, prof.weights);
  if (!(area > 0.0)) throw std::runtime_error("normalized_profile: zero integral on the grid");
  for (auto& w : prof.weights) w /= area;
  prof.normalized = true;
  return prof;
}

inline std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::distance(v.begin(), std::max_element(v.begin(), v.end())));
}

/// Full width at half maximum of sampled (x, y), with linear interpolation
/// of the two half-maximum crossings. Returns 0 if the peak is not bracketed.
inline double fwhm(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t peak = argmax(y);
  const double half = 0.5 * y[peak];
  std::size_t lo = peak, hi = peak;
  while (lo > 0 && y[lo] > half) --lo;
  while (hi + 1 < y.size() && y[hi] > half) ++hi;
  auto cross = [&](std::size_t i, std::size_t j) {
    if (y[j] == y[i]) return x[i];
    return x[i] + (half - y[i]) * (x[j] - x[i]) / (y[j] - y[i]);
  };
  const double left = y[lo] <= half ? cross(lo, lo + 1) : x[lo];
  const double right = y[hi] <= half ? cross(hi - 1, hi) : x[hi];
  return right - left;
}

/// True when the discrete derivative changes sign exactly once (+ to -), or
/// the samples are monotone.
inline bool is_unimodal(const std::vector<double>& y) {
  int changes = 0;
  int last = 0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    const double d = y[i] - y[i - 1];
    const int s = d > 0 ? 1 : (d < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) {
      ++changes;
      if (last < 0) return false;  // a minimum after a maximum
    }
    last = s;
  }
  return changes <= 1;
}

}  // namespace diracbeams
