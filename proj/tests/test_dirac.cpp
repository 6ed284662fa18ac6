#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "diracbeams/dirac.hpp"

using namespace diracbeams;

namespace {

const PhysicalConstants kUnit;

BeamParams bessel(int l, double energy, double pz) {
  BeamParams p;
  p.l = l;
  p.energy = energy;
  p.p_z = pz;
  return p;
}

BeamParams exponential(int l = 10, double b = 40.0, double pz = 0.75) {
  BeamParams p;
  p.l = l;
  p.b = b;
  p.p_z = pz;
  return p;
}

BeamParams lg_rel(int l = 10) {
  BeamParams p;
  p.l = l;
  p.n = 1;
  p.w = 10.0;
  p.energy = 1.2;
  return p;
}

std::vector<SpacetimePoint> interior(std::uint64_t seed, int count, double rho_lo, double rho_hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SpacetimePoint> out;
  for (int i = 0; i < count; ++i)
    out.push_back({rho_lo + (rho_hi - rho_lo) * u(rng), 2.0 * pi * u(rng), 20.0 * u(rng) - 10.0, 20.0 * u(rng) - 10.0});
  return out;
}

double rel_diff(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Bessel scalar f_B^m with the energy and p_z of p.
cplx bessel_f(const BeamParams& p, int m, const SpacetimePoint& x) {
  BeamParams q = p;
  q.l = m;
  return eval_bessel_scalar(q, kUnit, x).value;
}

}  // namespace

TEST(SpinNames, RoundTrip) {
  EXPECT_EQ(spin_from_string("up"), SpinChoice::up);
  EXPECT_EQ(spin_from_string(to_string(SpinChoice::down)), SpinChoice::down);
  EXPECT_THROW(spin_from_string("sideways"), std::invalid_argument);
}

TEST(BuildBispinor, BesselSpinUpClosedForm) {
  const auto p = bessel(3, 1.5, 0.5);
  const double pperp = 1.0, e = 1.5, pz = 0.5;
  for (const auto& x : interior(1, 40, 0.5, 30.0)) {
    const auto psi = build_bispinor(eval_bessel_scalar(p, kUnit, x), SpinChoice::up, kUnit, x.phi);
    EXPECT_EQ(psi.phi2(), cplx(0.0));
    EXPECT_LT(rel_diff(psi.chi1(), (e - pz) * bessel_f(p, 3, x)), 1e-12);
    EXPECT_LT(rel_diff(psi.chi2(), cplx(0.0, -pperp) * bessel_f(p, 4, x)), 1e-12);
  }
}

TEST(BuildBispinor, BesselSpinDownClosedForm) {
  const auto p = bessel(3, 1.5, 0.5);
  const double pperp = 1.0, e = 1.5, pz = 0.5;
  for (const auto& x : interior(2, 40, 0.5, 30.0)) {
    const auto psi = build_bispinor(eval_bessel_scalar(p, kUnit, x), SpinChoice::down, kUnit, x.phi);
    EXPECT_EQ(psi.phi1(), cplx(0.0));
    EXPECT_LT(rel_diff(psi.chi1(), cplx(0.0, pperp) * bessel_f(p, 2, x)), 1e-12);
    // (E/c + p_z): the sign that solves the equation.
    EXPECT_LT(rel_diff(psi.chi2(), (e + pz) * bessel_f(p, 3, x)), 1e-12);
  }
}

TEST(BuildBispinor, SignFlippedSpinDownVariantIsNotASolution) {
  const auto p = bessel(3, 1.5, 0.5);
  const BispinorField built = packet_field(ScalarKind::bessel, SpinChoice::down, p, kUnit);
  const BispinorField flipped = [&](const SpacetimePoint& x) {
    Bispinor psi = built(x);
    psi.c[3] = (1.5 - 0.5) * bessel_f(p, 3, x);
    return psi;
  };
  const SpacetimePoint x{7.0, 0.4, 1.0, 2.0};
  EXPECT_LT(dirac_residuals(built, kUnit, x, 1e-3).max(), 1e-5);
  EXPECT_GT(dirac_residuals(flipped, kUnit, x, 1e-3).max(), 1e-2);
}

TEST(BuildBispinor, RestPlaneWave) {
  const auto p = bessel(0, 1.0, 0.0);
  for (const auto& x : interior(3, 10, 0.0, 5.0)) {
    const auto up = build_bispinor(eval_bessel_scalar(p, kUnit, x), SpinChoice::up, kUnit, x.phi);
    EXPECT_NEAR(std::abs(up.chi1() - up.phi1()), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(up.chi2() - up.phi2()), 0.0, 1e-15);
    const auto down = build_bispinor(eval_bessel_scalar(p, kUnit, x), SpinChoice::down, kUnit, x.phi);
    EXPECT_NEAR(std::abs(down.chi1() - down.phi1()), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(down.chi2() - down.phi2()), 0.0, 1e-15);
  }
}

TEST(BuildBispinor, HarmonicsAndUnits) {
  const PhysicalConstants k(2.0, 0.5, 3.0);
  BeamParams p = bessel(4, 1.5 * k.rest_energy(), 0.5 * k.mass() * k.c());
  const SpacetimePoint x{5.0 * k.lambda_bar(), 0.3, k.lambda_bar(), 0.0};
  const auto psi = build_bispinor(eval_bessel_scalar(p, k, x), SpinChoice::up, k, x.phi);
  EXPECT_EQ(psi.harmonic, (std::array<int, 4>{4, 5, 4, 5}));
  EXPECT_LT(rel_diff(psi.chi1(), 1.0 * psi.phi1()), 1e-12);  // (E/c - p_z)/mc = 1
  EXPECT_LT(dirac_residuals(packet_field(ScalarKind::bessel, SpinChoice::up, p, k), k, x, 1e-3 * k.lambda_bar()).max(),
            1e-5);
  const auto down = build_bispinor(eval_bessel_scalar(p, k, x), SpinChoice::down, k, x.phi);
  EXPECT_EQ(down.harmonic, (std::array<int, 4>{3, 4, 3, 4}));
}

TEST(Operators, RestPlaneWave) {
  const auto field = packet_field(ScalarKind::bessel, SpinChoice::up, bessel(0, 1.0, 0.0), kUnit);
  const SpacetimePoint x{2.0, 0.5, 1.0, 3.0};
  const Bispinor psi = field(x);
  const Spinor2 dphi = apply_D(field, kUnit, x, 1e-3);
  const Spinor2 dchi = apply_Dtilde(field, kUnit, x, 1e-3);
  const cplx minus_i(0.0, -1.0);
  EXPECT_NEAR(std::abs(dphi[0] - minus_i * psi.phi1()), 0.0, 1e-6);
  EXPECT_NEAR(std::abs(dphi[1]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(dchi[0] - minus_i * psi.phi1()), 0.0, 1e-6);
  EXPECT_NEAR(std::abs(dchi[1]), 0.0, 1e-12);
}

TEST(Operators, ZeroField) {
  const BispinorField zero = [](const SpacetimePoint&) {
    Bispinor b;
    b.harmonic = {0, 1, 0, 1};
    return b;
  };
  const SpacetimePoint x{1.0, 0.0, 0.0, 0.0};
  for (const auto& v : apply_D(zero, kUnit, x, 1e-3)) EXPECT_EQ(v, cplx(0.0));
  for (const auto& v : apply_Dtilde(zero, kUnit, x, 1e-3)) EXPECT_EQ(v, cplx(0.0));
  EXPECT_EQ(dirac_residuals(zero, kUnit, x, 1e-3).max(), 0.0);
}

TEST(Operators, DiracResidualAllPacketsBothSpins) {
  struct Case {
    ScalarKind kind;
    BeamParams p;
    double rho_hi;
  };
  for (const auto& c : {Case{ScalarKind::bessel, bessel(10, 1.6, 0.75), 40.0}, Case{ScalarKind::bessel, bessel(-3, 1.5, -0.5), 40.0},
                        Case{ScalarKind::lg_rel, lg_rel(), 40.0}, Case{ScalarKind::lg_rel, lg_rel(-2), 40.0},
                        Case{ScalarKind::exponential, exponential(), 60.0},
                        Case{ScalarKind::exponential, exponential(-5, 20.0, 0.3), 40.0}}) {
    for (SpinChoice spin : {SpinChoice::up, SpinChoice::down}) {
      const auto field = packet_field(c.kind, spin, c.p, kUnit);
      double worst = 0.0, coarse = 0.0, fine = 0.0;
      for (const auto& x : interior(4, 100, 5.0, c.rho_hi)) {
        worst = std::max(worst, dirac_residuals(field, kUnit, x, 1e-3).max());
        coarse += std::pow(dirac_residuals(field, kUnit, x, 1e-2).max(), 2);
        fine += std::pow(dirac_residuals(field, kUnit, x, 5e-3).max(), 2);
      }
      EXPECT_LT(worst, 1e-5) << to_string(c.kind) << " l=" << c.p.l << " " << to_string(spin);
      const double ratio = std::sqrt(coarse / fine);
      EXPECT_GT(ratio, 3.5);
      EXPECT_LT(ratio, 4.5);
    }
  }
}

TEST(Operators, KgToDiracConsistency) {
  for (SpinChoice spin : {SpinChoice::up, SpinChoice::down}) {
    const auto field = packet_field(ScalarKind::exponential, spin, exponential(), kUnit);
    for (const auto& x : interior(5, 30, 5.0, 60.0)) {
      const Spinor2 d = apply_Dtilde(field, kUnit, x, 1e-3);
      const Bispinor psi = field(x);
      const cplx factor(0.0, -1.0);
      const double err = std::hypot(std::abs(d[0] - factor * psi.phi1()), std::abs(d[1] - factor * psi.phi2()));
      EXPECT_LT(err / std::sqrt(psi.norm2()), 1e-5);
    }
  }
}

TEST(AngularMomentum, EigenvaluesAreExact) {
  for (int l : {-3, 0, 10}) {
    for (SpinChoice spin : {SpinChoice::up, SpinChoice::down}) {
      BeamParams b = bessel(l, 1.6, 0.75), e = exponential(l);
      for (const auto& x : interior(6, 20, 0.5, 30.0)) {
        EXPECT_LT(jz_eigencheck(packet_field(ScalarKind::bessel, spin, b, kUnit)(x), spin, l), 1e-13);
        EXPECT_LT(jz_eigencheck(packet_field(ScalarKind::exponential, spin, e, kUnit)(x), spin, l), 1e-13);
        EXPECT_LT(jz_eigencheck(packet_field(ScalarKind::lg_rel, spin, lg_rel(l), kUnit)(x), spin, l), 1e-13);
      }
    }
  }
  EXPECT_EQ(twice_jz(10, SpinChoice::up), 21);
  EXPECT_EQ(twice_jz(10, SpinChoice::down), 19);
}

TEST(AngularMomentum, WrongEigenvalueIsDetected) {
  const auto psi = packet_field(ScalarKind::bessel, SpinChoice::up, bessel(10, 1.6, 0.75), kUnit)({7.0, 0.2, 0.0, 0.0});
  EXPECT_GT(jz_eigencheck(psi, SpinChoice::down, 10), 0.1);
}

TEST(AngularMomentum, RingSpectralDerivativeAgrees) {
  for (SpinChoice spin : {SpinChoice::up, SpinChoice::down}) {
    const auto ring = sample_ring(packet_field(ScalarKind::exponential, spin, exponential(10), kUnit), {15.0, 0, 1, 2}, 64);
    for (std::size_t i = 0; i < ring.size(); i += 5) EXPECT_LT(jz_eigencheck_sampled(ring, i, twice_jz(10, spin)), 1e-11);
  }
}

TEST(AzimuthalContent, BesselSpinUp) {
  const auto ring = sample_ring(packet_field(ScalarKind::bessel, SpinChoice::up, bessel(3, 1.5, 0.5), kUnit), {4.0, 0, 1, 2}, 64);
  const auto c = azimuthal_content(ring);
  EXPECT_EQ(c.per_component[0], std::set<int>{3});
  EXPECT_TRUE(c.per_component[1].empty());
  EXPECT_EQ(c.per_component[2], std::set<int>{3});
  EXPECT_EQ(c.per_component[3], std::set<int>{4});
  EXPECT_EQ(c.all, (std::set<int>{3, 4}));
}

TEST(AzimuthalContent, BesselSpinDown) {
  const auto ring =
      sample_ring(packet_field(ScalarKind::bessel, SpinChoice::down, bessel(3, 1.5, 0.5), kUnit), {4.0, 0, 1, 2}, 64);
  EXPECT_EQ(azimuthal_content(ring).all, (std::set<int>{2, 3}));
}

TEST(AzimuthalContent, ScalarPromotedIsSingleHarmonic) {
  const auto p = bessel(5, 1.5, 0.5);
  const BispinorField promoted = [&](const SpacetimePoint& x) {
    Bispinor b;
    b.c = {eval_bessel_scalar(p, kUnit, x).value, 0.0, 0.0, 0.0};
    b.harmonic = {5, 0, 0, 0};
    return b;
  };
  EXPECT_EQ(azimuthal_content(sample_ring(promoted, {4.0, 0, 0, 0}, 64)).all, std::set<int>{5});
}

TEST(AzimuthalContent, EveryBuiltPacketHasTwoHarmonics) {
  for (int l : {-3, 0, 1, 10})
    for (SpinChoice spin : {SpinChoice::up, SpinChoice::down})
      for (ScalarKind kind : {ScalarKind::bessel, ScalarKind::lg_rel, ScalarKind::exponential}) {
        const BeamParams p = kind == ScalarKind::bessel ? bessel(l, 1.6, 0.75) : kind == ScalarKind::lg_rel ? lg_rel(l) : exponential(l);
        const auto c = azimuthal_content(sample_ring(packet_field(kind, spin, p, kUnit), {15.0, 0, 1, 2}, 128));
        const std::set<int> expected = spin == SpinChoice::up ? std::set<int>{l, l + 1} : std::set<int>{l - 1, l};
        EXPECT_EQ(c.all, expected) << to_string(kind) << " l=" << l;
      }
}

TEST(AzimuthalContent, EdgeCases) {
  const BispinorField zero = [](const SpacetimePoint&) { return Bispinor{}; };
  EXPECT_TRUE(azimuthal_content(sample_ring(zero, {1, 0, 0, 0}, 64)).all.empty());
  EXPECT_THROW(azimuthal_content(sample_ring(zero, {1, 0, 0, 0}, 32)), std::invalid_argument);
}
