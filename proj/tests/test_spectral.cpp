#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "diracbeams/scalar_solutions.hpp"
#include "diracbeams/spectral.hpp"

using namespace diracbeams;

namespace {

const PhysicalConstants kUnit;

BeamParams packet(int l, double b, double pz) {
  BeamParams p;
  p.l = l;
  p.b = b;
  p.p_z = pz;
  return p;
}

}  // namespace

TEST(SpectralG, Examples) {
  EXPECT_NEAR(spectral_g(1.0, packet(0, 40.0, 0.0), kUnit) / (40.0 * std::exp(-40.0)), 1.0, 1e-14);
  EXPECT_EQ(spectral_g(1.0, packet(10, 40.0, 0.0), kUnit), 0.0);
  EXPECT_THROW(spectral_g(0.99, packet(1, 40.0, 0.0), kUnit), DomainError);
  EXPECT_GE(spectral_g(3.0, packet(3, 40.0, 0.5), kUnit), 0.0);
}

TEST(SpectralG, ArgmaxOnGrid) {
  const auto p = packet(10, 40.0, 0.0);
  const double step = 1e-4;
  double best = 0.0, arg = 0.0;
  for (double e = 1.0; e < 2.0; e += step) {
    const double g = spectral_g(e, p, kUnit);
    if (g > best) best = g, arg = e;
  }
  EXPECT_NEAR(arg, std::sqrt(1.25), step);
  EXPECT_NEAR(spectral_peak(p, kUnit), 1.118033988749895, 1e-15);
}

TEST(SpectralPeak, Limits) {
  EXPECT_DOUBLE_EQ(spectral_peak(packet(0, 40.0, 0.75), kUnit), 1.25);
  EXPECT_LT(spectral_peak(packet(10, 1e6, 0.0), kUnit) - 1.0, 1e-5);
  EXPECT_THROW(spectral_peak(packet(1, 0.0, 0.0), kUnit), DomainError);
}

TEST(SpectralPeak, RandomDrawsMatchGridArgmax) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> ul(0, 20);
  std::uniform_real_distribution<double> ub(10.0, 200.0), upz(0.0, 2.0);
  for (int i = 0; i < 10; ++i) {
    const auto p = packet(ul(rng), ub(rng), upz(rng));
    const double e_par = derived_quantities(p, kUnit).e_parallel, peak = spectral_peak(p, kUnit);
    std::vector<double> g;
    for (double e = e_par; e < 2.0 * peak - e_par + 0.01; e += 1e-4) g.push_back(spectral_g(e, p, kUnit));
    EXPECT_NEAR(e_par + 1e-4 * static_cast<double>(argmax(g)), peak, 1e-4);
  }
}

TEST(Cutoff, WeightDecaysEighteenDigits) {
  const auto p = packet(0, 40.0, 0.75);
  const double e_par = 1.25;
  const double e_cut = spectral_cutoff(p, kUnit);
  EXPECT_NEAR(spectral_g(e_cut, p, kUnit) / spectral_g(e_par, p, kUnit), 1e-18, 1e-30);
}

TEST(Quadrature, PolynomialAndOscillatory) {
  const auto r = integrate_gk([](double x) { return cplx(x * x * x, 0.0); }, 0.0, 2.0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value.real(), 4.0, 1e-13);
  const auto s = integrate_gk([](double x) { return std::polar(1.0, 50.0 * x); }, 0.0, 1.0);
  const cplx exact = (std::polar(1.0, 50.0) - 1.0) / cplx(0.0, 50.0);
  EXPECT_NEAR(std::abs(s.value - exact), 0.0, 1e-12);
}

TEST(Quadrature, ReportsNonConvergence) {
  QuadratureOptions opt;
  opt.max_intervals = 16;
  const auto r = integrate_gk([](double x) { return cplx(std::sin(1.0 / x)); }, 1e-6, 1.0, opt);
  EXPECT_FALSE(r.converged);
  EXPECT_GT(r.error_estimate, 0.0);
}

TEST(Superposition, SpecExamples) {
  const auto p = packet(10, 40.0, 0.75);
  for (double t : {0.0, 50.0}) {
    const SpacetimePoint x{30.0, 1.0, 5.0, t};
    const auto q = superpose_bessel(p, kUnit, x);
    EXPECT_TRUE(q.converged);
    const cplx f = eval_exp_scalar(p, kUnit, x).value;
    EXPECT_LT(std::abs(q.value - f) / std::abs(f), 1e-6);
  }
  EXPECT_EQ(std::abs(superpose_bessel(p, kUnit, {0.0, 0.0, 0.0, 3.0}).value), 0.0);
  QuadratureOptions tight;
  tight.rel_tol = 1e-13;
  EXPECT_THROW(superpose_bessel(p, kUnit, {1, 0, 0, 0}, tight), std::invalid_argument);
}

TEST(Superposition, Sweep) {
  for (int l : {0, 1, 10})
    for (double b : {20.0, 40.0, 100.0})
      for (const SpacetimePoint& x : {SpacetimePoint{5.0, 1.0, 5.0, 10.0}, SpacetimePoint{12.0, 2.5, -3.0, -20.0},
                                      SpacetimePoint{15.0, 4.0, 8.0, 40.0}}) {
        const auto p = packet(l, b, 0.75);
        const auto q = superpose_bessel(p, kUnit, x);
        ASSERT_TRUE(q.converged);
        const cplx f = eval_exp_scalar(p, kUnit, x).value;
        EXPECT_LT(std::abs(q.value - f) / std::abs(f), 1e-6) << "l=" << l << " b=" << b;
      }
}

TEST(Superposition, NegativeIndexCarriesSign) {
  // J_l with signed l under the integral: (-1)^l times the packet.
  for (int l : {-1, -2, -5}) {
    const auto p = packet(l, 40.0, 0.3);
    const SpacetimePoint x{10.0, 0.7, 2.0, 5.0};
    const cplx f = eval_exp_scalar(p, kUnit, x).value;
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    EXPECT_LT(std::abs(superpose_bessel(p, kUnit, x).value - sign * f) / std::abs(f), 1e-6);
  }
}

TEST(Superposition, WorksInOtherUnits) {
  const PhysicalConstants k(2.0, 3.0, 0.5);
  BeamParams p = packet(2, 40.0, 0.75 * k.mass() * k.c());
  const SpacetimePoint x{12.0 * k.lambda_bar(), 0.3, 4.0 * k.lambda_bar(), 7.0 * k.lambda_bar() / k.c()};
  const cplx f = eval_exp_scalar(p, k, x).value;
  EXPECT_LT(std::abs(superpose_bessel(p, k, x).value - f) / std::abs(f), 1e-6);
}

TEST(NormalizedProfile, IntegratesToOneAndIsUnimodal) {
  for (double b : {20.0, 40.0, 100.0, 200.0}) {
    const auto p = packet(10, b, 0.0);
    const auto grid = spectral_energy_grid(1.0, spectral_cutoff(p, kUnit), 20001);
    const auto prof = normalized_profile(p, kUnit, grid);
    EXPECT_TRUE(prof.normalized);
    EXPECT_NEAR(trapezoid(prof.energies, prof.weights), 1.0, 1e-9);
    EXPECT_TRUE(is_unimodal(prof.weights));
    for (double w : prof.weights) EXPECT_GE(w, 0.0);
    EXPECT_EQ(prof.weights.front(), 0.0);
  }
}

TEST(NormalizedProfile, WidthShrinksWithB) {
  double last = INFINITY;
  for (double b : {20.0, 40.0, 100.0, 200.0}) {
    const auto p = packet(10, b, 0.0);
    const auto prof = normalized_profile(p, kUnit, spectral_energy_grid(1.0, spectral_cutoff(packet(10, 20.0, 0.0), kUnit), 40001));
    const double w = fwhm(prof.energies, prof.weights);
    EXPECT_LT(w, last) << "b=" << b;
    last = w;
  }
}

TEST(NormalizedProfile, LargeBDoesNotUnderflow) {
  const auto p = packet(10, 5000.0, 0.0);
  const auto prof = normalized_profile(p, kUnit, spectral_energy_grid(1.0, spectral_cutoff(p, kUnit), 5001));
  EXPECT_NEAR(trapezoid(prof.energies, prof.weights), 1.0, 1e-9);
}

TEST(NormalizedProfile, Errors) {
  const auto p = packet(1, 40.0, 0.0);
  EXPECT_THROW(normalized_profile(p, kUnit, {}), std::invalid_argument);
  EXPECT_THROW(normalized_profile(p, kUnit, {0.5, 1.5}), DomainError);
  EXPECT_THROW(normalized_profile(p, kUnit, {1.5, 1.2}), std::invalid_argument);
  EXPECT_THROW(spectral_energy_grid(1.0, 1.0, 10), std::invalid_argument);
}

TEST(Shape, UnimodalAndFwhmHelpers) {
  EXPECT_TRUE(is_unimodal({0, 1, 3, 2, 1}));
  EXPECT_TRUE(is_unimodal({3, 2, 1}));
  EXPECT_FALSE(is_unimodal({0, 2, 1, 2, 0}));
  EXPECT_NEAR(fwhm({0, 1, 2, 3, 4}, {0, 1, 2, 1, 0}), 2.0, 1e-15);
}
