#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "diracbeams/validation.hpp"

using namespace diracbeams;

namespace {

bool fd_based(const std::string& id) {
  for (const char* prefix : {"kg_residual/", "dirac_residual/", "kgd_consistency", "gordon/", "charge_conservation"})
    if (id.rfind(prefix, 0) == 0) return true;
  return false;
}

const ValidationReport& default_report() {
  static const ValidationReport rep = [] {
    ValidationConfig cfg;
    cfg.record_runtime = false;
    return run_full_validation(cfg);
  }();
  return rep;
}

std::vector<SpacetimePoint> limit_points() {
  std::vector<SpacetimePoint> pts;
  for (double r : {0.25, 0.75, 1.25, 2.0, 2.5})
    for (double t : {-1.0, 0.0, 0.7})
      for (double z : {-2.0, 0.0, 1.5}) pts.push_back({r, 0.3, z, t});
  return pts;
}

}  // namespace

TEST(Report, DefaultRunPassesEveryCheckOnce) {
  const auto start = std::chrono::steady_clock::now();
  const auto rep = run_full_validation();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(seconds, 60.0);
  ASSERT_EQ(rep.checks.size(), all_check_ids().size());
  std::set<std::string> seen;
  for (std::size_t i = 0; i < rep.checks.size(); ++i) {
    EXPECT_EQ(rep.checks[i].id, all_check_ids()[i]);
    EXPECT_TRUE(seen.insert(rep.checks[i].id).second);
    EXPECT_TRUE(rep.checks[i].pass) << rep.checks[i].id << " value=" << rep.checks[i].value << " " << rep.checks[i].detail
                                    << rep.checks[i].error;
    EXPECT_TRUE(rep.checks[i].error.empty());
  }
  EXPECT_TRUE(rep.overall_pass());
  EXPECT_EQ(rep.seed, 20131008u);
}

TEST(Report, CoversEverySpecifiedFamily) {
  const auto& rep = default_report();
  for (const char* family : {"kg_residual/", "dirac_residual/", "kgd_consistency", "jz_eigenvalue", "azimuthal_content",
                             "spectral_oracle", "spectral_peak", "z_factorization/", "falloff_slope", "gordon/",
                             "circulation_dichotomy", "subluminality", "charge_conservation", "nonrel_limit/lg",
                             "nonrel_limit/exponential"}) {
    EXPECT_TRUE(std::any_of(rep.checks.begin(), rep.checks.end(),
                            [&](const CheckResult& c) { return c.id.rfind(family, 0) == 0; }))
        << family;
  }
  for (const char* kind : {"bessel", "lg_nonrel", "lg_rel", "exponential"})
    EXPECT_NE(rep.find(std::string("kg_residual/") + kind), nullptr);
}

TEST(Report, ZeroToleranceFailsFiniteDifferenceChecks) {
  ValidationConfig cfg;
  cfg.tolerance_override = 0.0;
  const auto rep = run_full_validation(cfg);
  EXPECT_FALSE(rep.overall_pass());
  int fd = 0;
  for (const auto& c : rep.checks)
    if (fd_based(c.id)) {
      ++fd;
      EXPECT_FALSE(c.pass) << c.id;
      EXPECT_EQ(c.tolerance, 0.0);
    }
  EXPECT_GE(fd, 14);
}

TEST(Report, EmptySelectionIsVacuouslyTrue) {
  ValidationConfig cfg;
  cfg.checks = std::vector<std::string>{};
  const auto rep = run_full_validation(cfg);
  EXPECT_TRUE(rep.checks.empty());
  EXPECT_TRUE(rep.overall_pass());
  EXPECT_EQ(serialize_report(rep, "v").find("summary checks=0 passed=0 failed=0 overall=pass"), serialize_report(rep, "v").rfind("summary"));
}

TEST(Report, UnknownCheckIdThrows) {
  ValidationConfig cfg;
  cfg.checks = std::vector<std::string>{"no_such_check"};
  EXPECT_THROW(run_full_validation(cfg), std::invalid_argument);
}

TEST(Report, DeterministicGivenSeed) {
  ValidationConfig cfg;
  cfg.record_runtime = false;
  const auto a = serialize_report(run_full_validation(cfg), "v");
  EXPECT_EQ(a, serialize_report(default_report(), "v"));
  EXPECT_EQ(a.find("runtime_s"), std::string::npos);
  cfg.seed = 7;
  const auto b = serialize_report(run_full_validation(cfg), "v");
  EXPECT_NE(a, b);
  EXPECT_NE(b.find("# seed: 7"), std::string::npos);
}

TEST(Report, CheckSeedsDifferPerId) {
  EXPECT_NE(detail::check_seed(1, "a"), detail::check_seed(1, "b"));
  EXPECT_NE(detail::check_seed(1, "a"), detail::check_seed(2, "a"));
  EXPECT_EQ(detail::check_seed(3, "kg_residual/bessel"), detail::check_seed(3, "kg_residual/bessel"));
}

TEST(Report, ExceptionsAreRecorded) {
  ValidationConfig cfg;
  cfg.p_z = 2.0;  // Bessel packet E = 1.6 falls below E_parallel
  cfg.checks = std::vector<std::string>{"kg_residual/bessel", "kg_residual/exponential"};
  ValidationReport rep;
  ASSERT_NO_THROW(rep = run_full_validation(cfg));
  ASSERT_EQ(rep.checks.size(), 2u);
  EXPECT_FALSE(rep.checks[0].pass);
  EXPECT_FALSE(rep.checks[0].error.empty());
  EXPECT_TRUE(rep.checks[1].pass);
  EXPECT_NE(serialize_report(rep, "v").find("error=\""), std::string::npos);
}

TEST(NonrelLimit, ExponentialPacketConverges) {
  BeamParams p;
  p.l = 2;
  p.p_z = 0.1;
  std::vector<SpacetimePoint> slice;
  for (int i = 1; i <= 30; ++i) slice.push_back({0.1 * i, 0.3, 0.0, 0.0});
  const auto rep = nonrel_limit_exp(p, 0.5, 1.0, 1.0, {10.0, 20.0, 40.0}, limit_points(), slice, {1.0, 0.0, 0.0, 0.0});
  EXPECT_TRUE(rep.monotone);
  EXPECT_LT(rep.deviations[2], rep.deviations[1]);
  EXPECT_LT(rep.deviations[1], rep.deviations[0]);
  EXPECT_LT(rep.final_slice_deviation(), 1e-2);
}

TEST(NonrelLimit, LgConverges) {
  BeamParams p;
  p.l = 1;
  p.n = 1;
  p.w = 2.0;
  p.p_z = 0.2;
  std::vector<SpacetimePoint> slice;
  for (int i = 1; i <= 60; ++i) slice.push_back({0.1 * i, 0.3, 0.0, 0.5});
  const auto rep = nonrel_limit_lg(p, 1.0, 1.0, {10.0, 20.0, 40.0}, limit_points(), slice);
  EXPECT_TRUE(rep.monotone);
  EXPECT_LT(rep.final_slice_deviation(), 1e-2);
}

TEST(NonrelLimit, ZeroIndexTargetIsGaussian) {
  BeamParams p;
  p.l = 0;
  p.n = 0;
  p.w = 1.0;
  const PhysicalConstants k;
  const double t = 0.4;
  const cplx a(1.0, 2.0 * t);
  for (double r : {0.0, 0.5, 1.5}) {
    const cplx f = eval_lg_nonrel(p, k, {r, 0.0, 0.0, t}).value;
    EXPECT_NEAR(std::abs(f - std::exp(-r * r / a) / a), 0.0, 1e-15);
  }
  BeamParams e;
  e.l = 0;
  std::vector<SpacetimePoint> slice;
  for (int i = 1; i <= 10; ++i) slice.push_back({0.2 * i, 0.0, 0.0, 0.0});
  const auto rep = nonrel_limit_exp(e, 0.5, 1.0, 1.0, {10.0, 20.0, 40.0}, limit_points(), slice, {1.0, 0.0, 0.0, 0.0});
  EXPECT_TRUE(rep.monotone);
  EXPECT_LT(rep.final_slice_deviation(), 1e-2);
}

TEST(NonrelLimit, NonMonotoneIsFlagged) {
  BeamParams p;
  p.l = 2;
  p.p_z = 0.1;
  // Decreasing c makes the deviation grow: rejected up front.
  EXPECT_THROW(nonrel_limit_exp(p, 0.5, 1.0, 1.0, {40.0, 20.0, 10.0}, limit_points(), {}, {1, 0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(nonrel_limit_exp(p, 0.5, 1.0, 1.0, {10.0, 20.0}, limit_points(), {}, {1, 0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(nonrel_limit_exp(p, 0.0, 1.0, 1.0, {10.0, 20.0, 40.0}, limit_points(), {}, {1, 0, 0, 0}), std::invalid_argument);
  // A point set where the approximation is exact for every c gives no strict decrease.
  const auto rep = nonrel_limit_lg(BeamParams{1, 0.0, 40.0, std::nullopt, 0, 2.0}, 1.0, 1.0, {10.0, 20.0, 40.0},
                                   {{1.0, 0.0, 0.0, 0.0}}, {{1.0, 0.0, 0.0, 0.0}});
  EXPECT_FALSE(rep.monotone);
}
