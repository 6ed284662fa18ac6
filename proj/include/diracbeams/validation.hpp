#pragma once

// Residual and oracle checks assembled into a ValidationReport, plus the two
// nonrelativistic-limit procedures (LG and exponential packet).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "diracbeams/core.hpp"
#include "diracbeams/dirac.hpp"
#include "diracbeams/observables.hpp"
#include "diracbeams/scalar_solutions.hpp"
#include "diracbeams/spectral.hpp"

namespace diracbeams {

// ---------------------------------------------------------------------------
// Nonrelativistic limits

struct ConvergenceReport {
  std::vector<double> c_values;
  std::vector<double> deviations;        // max |f - psi| / max |psi| over the point set
  std::vector<double> slice_deviations;  // same on the reference slice
  bool monotone = false;                 // strictly decreasing deviations
  double final_slice_deviation() const { return slice_deviations.empty() ? 0.0 : slice_deviations.back(); }
};

namespace detail {

inline void check_c_sequence(const std::vector<double>& cs) {
  if (cs.size() < 3) throw std::invalid_argument("nonrel limit: need at least 3 values of c");
  for (std::size_t i = 1; i < cs.size(); ++i)
    if (!(cs[i] > cs[i - 1])) throw std::invalid_argument("nonrel limit: c values must increase strictly");
}

inline double max_relative_deviation(const std::vector<SpacetimePoint>& pts,
                                     const std::function<cplx(const SpacetimePoint&)>& approx,
                                     const std::function<cplx(const SpacetimePoint&)>& exact) {
  double diff = 0.0, scale = 0.0;
  for (const auto& x : pts) {
    const cplx e = exact(x);
    diff = std::max(diff, std::abs(approx(x) - e));
    scale = std::max(scale, std::abs(e));
  }
  return scale > 0.0 ? diff / scale : diff;
}

inline bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

}  // namespace detail

/// Relativistic LG with E = m c^2 + c p_z, rest-mass oscillation e^{i m c^2 t/hbar}
/// removed, compared with the Schroedinger LG packet for each c.
inline ConvergenceReport nonrel_limit_lg(const BeamParams& params, double hbar, double mass,
                                         const std::vector<double>& c_values,
                                         const std::vector<SpacetimePoint>& points,
                                         const std::vector<SpacetimePoint>& slice) {
  detail::check_c_sequence(c_values);
  ConvergenceReport rep;
  rep.c_values = c_values;
  for (double c : c_values) {
    const PhysicalConstants k(hbar, mass, c);
    BeamParams rel = params;
    rel.energy = mass * c * c + c * params.p_z;
    auto approx = [&](const SpacetimePoint& x) {
      return eval_lg_rel(rel, k, x).value * std::polar(1.0, k.rest_energy() * x.t / hbar);
    };
    auto exact = [&](const SpacetimePoint& x) { return eval_lg_nonrel(params, k, x).value; };
    rep.deviations.push_back(detail::max_relative_deviation(points, approx, exact));
    rep.slice_deviations.push_back(detail::max_relative_deviation(slice, approx, exact));
  }
  rep.monotone = detail::strictly_decreasing(rep.deviations);
  return rep;
}

/// Exponential packet with b = beta c^2, rest-mass oscillation removed and
/// one complex normalization fitted at `reference`, compared with the n = 0
/// Schroedinger LG packet with a(t) = 2 beta (hbar/m)^2 + 2 i t hbar/m.
inline ConvergenceReport nonrel_limit_exp(const BeamParams& params, double beta, double hbar, double mass,
                                          const std::vector<double>& c_values,
                                          const std::vector<SpacetimePoint>& points,
                                          const std::vector<SpacetimePoint>& slice,
                                          const SpacetimePoint& reference) {
  if (!(beta > 0.0)) throw std::invalid_argument("nonrel_limit_exp: beta must be > 0");
  detail::check_c_sequence(c_values);
  BeamParams target = params;
  target.n = 0;
  target.w = std::sqrt(2.0 * beta) * hbar / mass;
  ConvergenceReport rep;
  rep.c_values = c_values;
  for (double c : c_values) {
    const PhysicalConstants k(hbar, mass, c);
    BeamParams e = params;
    e.b = beta * c * c;
    auto stripped = [&](const SpacetimePoint& x) {
      return eval_exp_scalar(e, k, x, ExpNormalization::unit_at_origin).value *
             std::polar(1.0, k.rest_energy() * x.t / hbar);
    };
    auto exact = [&](const SpacetimePoint& x) { return eval_lg_nonrel(target, k, x).value; };
    const cplx scale = exact(reference) / stripped(reference);
    auto approx = [&](const SpacetimePoint& x) { return scale * stripped(x); };
    rep.deviations.push_back(detail::max_relative_deviation(points, approx, exact));
    rep.slice_deviations.push_back(detail::max_relative_deviation(slice, approx, exact));
  }
  rep.monotone = detail::strictly_decreasing(rep.deviations);
  return rep;
}

// ---------------------------------------------------------------------------
// Report

enum class Bound { at_most, above };

struct CheckResult {
  std::string id;
  std::string parameters;
  double value = 0.0;  // worst residual, or the measured quantity for Bound::above
  double tolerance = 0.0;
  Bound bound = Bound::at_most;
  bool pass = false;
  double runtime_s = 0.0;
  std::string detail;
  std::string error;
};

struct ValidationReport {
  std::uint64_t seed = 0;
  bool record_runtime = true;
  std::vector<CheckResult> checks;

  bool overall_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  }
  std::size_t passed() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; }));
  }
  const CheckResult* find(std::string_view id) const {
    for (const auto& c : checks)
      if (c.id == id) return &c;
    return nullptr;
  }
};

struct ValidationConfig {
  std::uint64_t seed = 20131008;
  int points = 100;             // random interior points per residual check
  int gordon_points = 50;
  int subluminal_points = 10000;
  double fd_step = 1e-3;        // lambda-bar units
  double gordon_step = 2.5e-4;
  double convergence_step = 1e-2;
  std::optional<double> tolerance_override;
  std::optional<std::vector<std::string>> checks;  // unset: every check
  int l = 10;
  double b = 40.0;
  double p_z = 0.75;  // m c units
  bool record_runtime = true;
};

/// Identifiers of every check in the default report, in report order.
inline const std::vector<std::string>& all_check_ids() {
  static const std::vector<std::string> ids = {
      "kg_residual/bessel",          "kg_residual/lg_nonrel",     "kg_residual/lg_rel",
      "kg_residual/exponential",     "dirac_residual/bessel/up",  "dirac_residual/bessel/down",
      "dirac_residual/lg_rel/up",    "dirac_residual/lg_rel/down", "dirac_residual/exponential/up",
      "dirac_residual/exponential/down", "kgd_consistency",       "jz_eigenvalue",
      "azimuthal_content",           "spectral_oracle",           "spectral_peak",
      "z_factorization/exponential", "z_factorization/bessel",    "z_factorization/lg_rel_witness",
      "falloff_slope",               "gordon/bessel",             "gordon/exponential",
      "circulation_dichotomy",       "subluminality",             "charge_conservation",
      "nonrel_limit/lg",             "nonrel_limit/exponential"};
  return ids;
}

namespace detail {

inline std::string fmt_sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline std::uint64_t check_seed(std::uint64_t seed, std::string_view id) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (char ch : id) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  std::uint64_t out[1];
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  out[0] = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return out[0];
}

struct Region {
  double rho_lo, rho_hi, z_half, t_half;
};

inline std::vector<SpacetimePoint> random_points(std::mt19937_64& rng, int count, const Region& r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SpacetimePoint> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double rho = r.rho_lo + (r.rho_hi - r.rho_lo) * u(rng);
    const double phi = 2.0 * pi * u(rng);
    const double z = r.z_half * (2.0 * u(rng) - 1.0);
    const double t = r.t_half * (2.0 * u(rng) - 1.0);
    pts.push_back({rho, phi, z, t});
  }
  return pts;
}

// Packets used throughout the default report.
struct Packets {
  PhysicalConstants k;
  BeamParams bessel, lg_nonrel, lg_rel, exponential;
  Region bessel_region{5.0, 40.0, 10.0, 10.0};
  Region lg_region{5.0, 40.0, 10.0, 10.0};
  Region exp_region{5.0, 60.0, 10.0, 10.0};

  explicit Packets(const ValidationConfig& cfg) {
    exponential.l = cfg.l;
    exponential.b = cfg.b;
    exponential.p_z = cfg.p_z;
    bessel.l = cfg.l;
    bessel.p_z = cfg.p_z;
    bessel.energy = 1.6;
    lg_nonrel.l = cfg.l;
    lg_nonrel.n = 1;
    lg_nonrel.w = 10.0;
    lg_nonrel.p_z = cfg.p_z;
    lg_rel.l = cfg.l;
    lg_rel.n = 1;
    lg_rel.w = 10.0;
    lg_rel.energy = 1.2;
  }

  const BeamParams& params(ScalarKind kind) const {
    switch (kind) {
      case ScalarKind::bessel: return bessel;
      case ScalarKind::lg_nonrel: return lg_nonrel;
      case ScalarKind::lg_rel: return lg_rel;
      case ScalarKind::exponential: return exponential;
    }
    return exponential;
  }
  const Region& region(ScalarKind kind) const {
    if (kind == ScalarKind::bessel) return bessel_region;
    if (kind == ScalarKind::exponential) return exp_region;
    return lg_region;
  }
};

inline std::string describe(ScalarKind kind, const BeamParams& p) {
  std::ostringstream os;
  os << "kind=" << to_string(kind) << " l=" << p.l;
  if (kind == ScalarKind::exponential) os << " b=" << p.b << " p_z=" << p.p_z;
  if (kind == ScalarKind::bessel) os << " E=" << *p.energy << " p_z=" << p.p_z;
  if (kind == ScalarKind::lg_rel) os << " n=" << p.n << " w=" << p.w << " E=" << *p.energy;
  if (kind == ScalarKind::lg_nonrel) os << " n=" << p.n << " w=" << p.w << " p_z=" << p.p_z;
  return os.str();
}

inline double rms(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return v.empty() ? 0.0 : std::sqrt(s / static_cast<double>(v.size()));
}

inline bool ratio_second_order(double ratio) { return ratio >= 3.5 && ratio <= 4.5; }

struct Outcome {
  double value = 0.0;
  double tolerance = 0.0;
  Bound bound = Bound::at_most;
  bool extra_ok = true;  // structural conditions beyond the tolerance
  std::string parameters;
  std::string detail;
};

using CheckFn = std::function<Outcome(std::mt19937_64&)>;

// Each residual check: worst residual at the stated step, plus the
// second-order ratio of RMS residuals at convergence_step and half of it.
template <class Residual>
Outcome residual_with_convergence(const std::vector<SpacetimePoint>& pts, const ValidationConfig& cfg,
                                  double tolerance, Residual&& residual) {
  double worst = 0.0;
  for (const auto& x : pts) worst = std::max(worst, residual(x, cfg.fd_step));
  std::vector<double> coarse, fine;
  for (const auto& x : pts) {
    coarse.push_back(residual(x, cfg.convergence_step));
    fine.push_back(residual(x, 0.5 * cfg.convergence_step));
  }
  const double ratio = rms(fine) > 0.0 ? rms(coarse) / rms(fine) : 0.0;
  Outcome o;
  o.value = worst;
  o.tolerance = tolerance;
  o.extra_ok = ratio_second_order(ratio);
  o.detail = "points=" + std::to_string(pts.size()) + " step=" + fmt_sci(cfg.fd_step) +
             " convergence_ratio=" + fmt_sci(ratio);
  return o;
}

}  // namespace detail

/// Build every check of the report. Exposed so tests can run single checks.
inline std::vector<std::pair<std::string, detail::CheckFn>> build_checks(const ValidationConfig& cfg) {
  using namespace detail;
  auto pk = std::make_shared<Packets>(cfg);
  const PhysicalConstants k = pk->k;
  std::vector<std::pair<std::string, CheckFn>> out;

  for (ScalarKind kind : {ScalarKind::bessel, ScalarKind::lg_nonrel, ScalarKind::lg_rel, ScalarKind::exponential}) {
    out.emplace_back("kg_residual/" + std::string(to_string(kind)), [=](std::mt19937_64& rng) {
      const auto pts = random_points(rng, cfg.points, pk->region(kind));
      auto o = residual_with_convergence(pts, cfg, 1e-5, [&](const SpacetimePoint& x, double h) {
        return wave_equation_residual(kind, pk->params(kind), k, x, h);
      });
      o.parameters = describe(kind, pk->params(kind));
      return o;
    });
  }

  for (ScalarKind kind : {ScalarKind::bessel, ScalarKind::lg_rel, ScalarKind::exponential}) {
    for (SpinChoice spin : {SpinChoice::up, SpinChoice::down}) {
      out.emplace_back("dirac_residual/" + std::string(to_string(kind)) + "/" + std::string(to_string(spin)),
                       [=](std::mt19937_64& rng) {
                         const auto pts = random_points(rng, cfg.points, pk->region(kind));
                         const auto field = packet_field(kind, spin, pk->params(kind), k);
                         auto o = residual_with_convergence(pts, cfg, 1e-5, [&](const SpacetimePoint& x, double h) {
                           return dirac_residuals(field, k, x, h).max();
                         });
                         o.parameters = describe(kind, pk->params(kind)) + " spin=" + std::string(to_string(spin));
                         return o;
                       });
    }
  }

  out.emplace_back("kgd_consistency", [=](std::mt19937_64& rng) {
    double worst = 0.0;
    int n = 0;
    for (ScalarKind kind : {ScalarKind::bessel, ScalarKind::lg_rel, ScalarKind::exponential}) {
      for (SpinChoice spin : {SpinChoice::up, SpinChoice::down}) {
        const auto field = packet_field(kind, spin, pk->params(kind), k);
        for (const auto& x : random_points(rng, cfg.points / 4 + 1, pk->region(kind))) {
          const Spinor2 dchi = apply_Dtilde(field, k, x, cfg.fd_step);
          const Bispinor psi = field(x);
          const cplx factor(0.0, -1.0 / k.lambda_bar());
          const double err = std::hypot(std::abs(dchi[0] - factor * psi.phi1()), std::abs(dchi[1] - factor * psi.phi2()));
          worst = std::max(worst, err * k.lambda_bar() / std::sqrt(psi.norm2()));
          ++n;
        }
      }
    }
    return Outcome{worst, 1e-5, Bound::at_most, true, "bessel, lg_rel, exponential x up, down",
                   "points=" + std::to_string(n)};
  });

  out.emplace_back("jz_eigenvalue", [=](std::mt19937_64&) {
    double worst = 0.0, worst_sampled = 0.0;
    for (int l : {-3, 0, 10}) {
      for (ScalarKind kind : {ScalarKind::bessel, ScalarKind::lg_rel, ScalarKind::exponential}) {
        BeamParams p = pk->params(kind);
        p.l = l;
        for (SpinChoice spin : {SpinChoice::up, SpinChoice::down}) {
          const auto field = packet_field(kind, spin, p, k);
          const auto ring = sample_ring(field, {15.0, 0.0, 1.0, 2.0}, 64);
          for (std::size_t i = 0; i < ring.size(); i += 7) {
            worst = std::max(worst, jz_eigencheck(ring[i], spin, l));
            worst_sampled = std::max(worst_sampled, jz_eigencheck_sampled(ring, i, twice_jz(l, spin)));
          }
        }
      }
    }
    // The ring cross-check carries FFT roundoff and has its own bound.
    return Outcome{worst, 1e-13, Bound::at_most, worst_sampled < 1e-11, "l in {-3,0,10}",
                   "analytic=" + fmt_sci(worst) + " ring_spectral=" + fmt_sci(worst_sampled)};
  });

  out.emplace_back("azimuthal_content", [=](std::mt19937_64&) {
    int bad = 0, total = 0;
    std::string first_bad;
    for (int l : {-3, 0, 10}) {
      for (ScalarKind kind : {ScalarKind::bessel, ScalarKind::lg_rel, ScalarKind::exponential}) {
        BeamParams p = pk->params(kind);
        p.l = l;
        for (SpinChoice spin : {SpinChoice::up, SpinChoice::down}) {
          const auto ring = sample_ring(packet_field(kind, spin, p, k), {15.0, 0.0, 1.0, 2.0}, 128);
          const auto content = azimuthal_content(ring);
          const std::set<int> expected = spin == SpinChoice::up ? std::set<int>{l, l + 1} : std::set<int>{l - 1, l};
          ++total;
          if (content.all != expected) {
            ++bad;
            if (first_bad.empty()) first_bad = describe(kind, p) + " spin=" + std::string(to_string(spin));
          }
        }
      }
    }
    Outcome o{static_cast<double>(bad), 0.0, Bound::at_most, true, "l in {-3,0,10}, ring=128, power>1e-10",
              "bispinors=" + std::to_string(total)};
    if (!first_bad.empty()) o.detail += " first_mismatch=\"" + first_bad + "\"";
    return o;
  });

  out.emplace_back("spectral_oracle", [=](std::mt19937_64&) {
    const std::vector<SpacetimePoint> pts = {{5.0, 1.0, 5.0, 10.0}, {12.0, 2.5, -3.0, -20.0}, {15.0, 4.0, 8.0, 40.0}};
    double worst = 0.0;
    bool converged = true;
    for (int l : {0, 1, 10})
      for (double b : {20.0, 40.0, 100.0})
        for (const auto& x : pts) {
          BeamParams p = pk->exponential;
          p.l = l;
          p.b = b;
          const auto q = superpose_bessel(p, k, x);
          converged = converged && q.converged;
          const cplx f = eval_exp_scalar(p, k, x).value;
          worst = std::max(worst, std::abs(q.value - f) / std::abs(f));
        }
    return Outcome{worst, 1e-6, Bound::at_most, converged, "l in {0,1,10} x b in {20,40,100} x 3 points",
                   std::string("all_converged=") + (converged ? "true" : "false")};
  });

  out.emplace_back("spectral_peak", [=](std::mt19937_64& rng) {
    std::uniform_int_distribution<int> ul(0, 20);
    std::uniform_real_distribution<double> ub(10.0, 200.0), upz(0.0, 2.0);
    const double grid_step = 1e-4 * k.rest_energy();
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      BeamParams p;
      p.l = ul(rng);
      p.b = ub(rng);
      p.p_z = upz(rng);
      const double e_par = derived_quantities(p, k).e_parallel;
      const double peak = spectral_peak(p, k);
      const double e_hi = e_par + 2.0 * (peak - e_par) + 0.01 * k.rest_energy();
      const int count = static_cast<int>((e_hi - e_par) / grid_step) + 1;
      std::vector<double> g;
      g.reserve(static_cast<std::size_t>(count));
      for (int j = 0; j < count; ++j) g.push_back(spectral_g(e_par + j * grid_step, p, k));
      const double arg = e_par + static_cast<double>(argmax(g)) * grid_step;
      worst = std::max(worst, std::abs(arg - peak));
    }
    return Outcome{worst, grid_step, Bound::at_most, true, "10 draws l in [0,20], b in [10,200], p_z in [0,2]",
                   "grid_step=" + fmt_sci(grid_step)};
  });

  for (ScalarKind kind : {ScalarKind::exponential, ScalarKind::bessel}) {
    out.emplace_back("z_factorization/" + std::string(to_string(kind)), [=](std::mt19937_64& rng) {
      double worst = 0.0;
      std::uniform_real_distribution<double> uz(-200.0, 200.0);
      for (auto x : random_points(rng, cfg.points, pk->region(kind))) {
        SpacetimePoint x0 = x;
        x0.z = 0.0;
        const double ref = std::abs(eval_scalar(kind, pk->params(kind), k, x0).value);
        for (int j = 0; j < 4; ++j) {
          x.z = uz(rng);
          worst = std::max(worst, std::abs(std::abs(eval_scalar(kind, pk->params(kind), k, x).value) - ref) / ref);
        }
      }
      return Outcome{worst, 1e-12, Bound::at_most, true, describe(kind, pk->params(kind)), "|z| <= 200"};
    });
  }

  out.emplace_back("z_factorization/lg_rel_witness", [=](std::mt19937_64&) {
    BeamParams p;
    p.l = 1;
    p.n = 0;
    p.w = 10.0 * k.lambda_bar();
    p.energy = 1.2 * k.rest_energy();
    const double at0 = std::abs(eval_lg_rel(p, k, {p.w, 0.0, 0.0, 0.0}).value);
    const double at50 = std::abs(eval_lg_rel(p, k, {p.w, 0.0, 50.0 * k.lambda_bar(), 0.0}).value);
    return Outcome{std::abs(at50 - at0) / at0, 1e-3, Bound::above, true, "l=1 n=0 w=10 E=1.2 t=0 rho=w",
                   "z=0 vs z=50"};
  });

  out.emplace_back("falloff_slope", [=](std::mt19937_64&) {
    double worst = 0.0;
    std::string detail;
    for (double pz : {0.0, 0.75}) {
      BeamParams p = pk->exponential;
      p.l = 10;
      p.b = 40.0;
      p.p_z = pz * k.mass() * k.c();
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      int n = 0;
      for (double r = 500.0; r <= 1000.0 + 1e-9; r += 5.0) {
        const double rho = r * k.lambda_bar();
        const double y = exp_scalar_log_modulus(p, k, {rho, 0.0, 0.0, 0.0});
        sx += rho;
        sy += y;
        sxx += rho * rho;
        sxy += rho * y;
        ++n;
      }
      const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      const double expected = -derived_quantities(p, k).gamma / k.lambda_bar();
      worst = std::max(worst, std::abs(slope / expected - 1.0));
      detail += "p_z=" + fmt_sci(pz) + ":slope=" + fmt_sci(slope) + " ";
    }
    return Outcome{worst, 1e-2, Bound::at_most, true, "l=10 b=40 rho in [500,1000]", detail};
  });

  for (ScalarKind kind : {ScalarKind::bessel, ScalarKind::exponential}) {
    out.emplace_back("gordon/" + std::string(to_string(kind)), [=](std::mt19937_64& rng) {
      const auto field = packet_field(kind, SpinChoice::up, pk->params(kind), k);
      double worst = 0.0;
      for (const auto& x : random_points(rng, cfg.gordon_points, pk->region(kind))) {
        const auto s = gordon_split(field, k, x, cfg.gordon_step);
        const double scale = std::max({s.total.norm(), s.orbital.norm(), s.spin.norm()});
        worst = std::max(worst, (s.total - s.orbital - s.spin).norm() / scale);
      }
      return Outcome{worst, 1e-6, Bound::at_most, true, describe(kind, pk->params(kind)) + " spin=up",
                     "points=" + std::to_string(cfg.gordon_points) + " step=" + fmt_sci(cfg.gordon_step)};
    });
  }

  out.emplace_back("circulation_dichotomy", [=](std::mt19937_64&) {
    const double quantum = 2.0 * pi * k.hbar() / k.mass();
    // Schroedinger flow: radius independent, exactly 2 pi hbar l/m.
    double nonrel_err = 0.0;
    const auto v_nr = nonrel_velocity_sampler(ScalarKind::lg_nonrel, pk->lg_nonrel, k);
    for (double r : {10.0, 1.0, 0.1})
      nonrel_err = std::max(nonrel_err, std::abs(circulation(v_nr, r, 0.0, 0.0, 1024) / (quantum * pk->lg_nonrel.l) - 1.0));
    // Dirac flow of the exponential beam: vanishes with the radius.
    const auto v_d = dirac_velocity_sampler(packet_field(ScalarKind::exponential, SpinChoice::up, pk->exponential, k), k);
    std::vector<double> gd;
    for (double r : {10.0, 1.0, 0.1}) gd.push_back(std::abs(circulation(v_d, r * k.lambda_bar(), 0.0, 0.0, 1024)));
    const bool decreasing = gd[1] < gd[0] && gd[2] < gd[1];
    const bool vanishing = gd[2] < 1e-2 * quantum * std::abs(pk->exponential.l);
    // Orbital flow of a nonrelativistic Bessel beam near the axis.
    BeamParams nb;
    nb.l = 10;
    nb.energy = 1.005 * k.rest_energy();
    nb.p_z = 0.05 * k.mass() * k.c();
    const auto v_orb = orbital_velocity_sampler(packet_field(ScalarKind::bessel, SpinChoice::up, nb, k), k, 1e-4 * k.lambda_bar());
    const double orb_err = std::abs(circulation(v_orb, 0.1 * k.lambda_bar(), 0.0, 0.0, 1024) / (quantum * nb.l) - 1.0);
    Outcome o;
    o.value = std::max(nonrel_err / 1e-10, orb_err / 1e-2);  // normalized: <= 1 passes
    o.tolerance = 1.0;
    o.extra_ok = decreasing && vanishing;
    o.parameters = "nonrel lg l=" + std::to_string(pk->lg_nonrel.l) + "; dirac exp l=" + std::to_string(pk->exponential.l) +
                   " b=" + fmt_sci(pk->exponential.b) + "; orbital bessel l=10 E=1.005";
    o.detail = "nonrel_rel_err=" + fmt_sci(nonrel_err) + " dirac_circ=" + fmt_sci(gd[0]) + "," + fmt_sci(gd[1]) + "," +
               fmt_sci(gd[2]) + " orbital_rel_err=" + fmt_sci(orb_err);
    return o;
  });

  out.emplace_back("subluminality", [=](std::mt19937_64& rng) {
    double worst = 0.0;
    const Region wide{0.1, 100.0, 50.0, 50.0};
    const int per = std::max(1, cfg.subluminal_points / 6);
    for (ScalarKind kind : {ScalarKind::bessel, ScalarKind::lg_rel, ScalarKind::exponential})
      for (SpinChoice spin : {SpinChoice::up, SpinChoice::down}) {
        const auto field = packet_field(kind, spin, pk->params(kind), k, ExpNormalization::unit_at_origin);
        for (const auto& x : random_points(rng, per, wide)) {
          const Bispinor psi = field(x);
          if (!(psi.norm2() > 0.0)) continue;
          worst = std::max(worst, dirac_velocity(psi, k).v.norm() / k.c());
        }
      }
    return Outcome{worst, 1.0, Bound::at_most, true, "bessel, lg_rel, exponential x up, down",
                   "points=" + std::to_string(6 * per)};
  });

  out.emplace_back("charge_conservation", [=](std::mt19937_64& rng) {
    double worst = 0.0;
    for (ScalarKind kind : {ScalarKind::bessel, ScalarKind::lg_rel, ScalarKind::exponential}) {
      const auto field = packet_field(kind, SpinChoice::up, pk->params(kind), k);
      const VectorSampler current = [&](const SpacetimePoint& x) { return dirac_current(field(x), k); };
      for (const auto& x : random_points(rng, cfg.points / 3 + 1, pk->region(kind))) {
        const auto div = divergence(current, x, cfg.fd_step);
        const double dt = cfg.fd_step / k.c();
        SpacetimePoint xp = x, xm = x;
        xp.t += dt;
        xm.t -= dt;
        const double rho_t = (field(xp).norm2() - field(xm).norm2()) / (2.0 * dt);
        const double scale = div.scale + std::abs(rho_t);
        if (scale > 0.0) worst = std::max(worst, std::abs(div.value + rho_t) / scale);
      }
    }
    return Outcome{worst, 1e-5, Bound::at_most, true, "bessel, lg_rel, exponential spin=up", ""};
  });

  out.emplace_back("nonrel_limit/lg", [=](std::mt19937_64&) {
    BeamParams p;
    p.l = 1;
    p.n = 1;
    p.w = 2.0;
    p.p_z = 0.2;
    std::vector<SpacetimePoint> pts, slice;
    for (double r : {0.25, 0.75, 1.25, 2.0, 2.5})
      for (double t : {-1.0, 0.0, 0.7})
        for (double z : {-2.0, 0.0, 1.5}) pts.push_back({r, 0.3, z, t});
    for (int i = 1; i <= 60; ++i) slice.push_back({0.1 * i, 0.3, 0.0, 0.5});
    const auto rep = nonrel_limit_lg(p, 1.0, 1.0, {10.0, 20.0, 40.0}, pts, slice);
    return Outcome{rep.final_slice_deviation(), 1e-2, Bound::at_most, rep.monotone,
                   "l=1 n=1 w=2 p_z=0.2 c in {10,20,40}",
                   "deviations=" + fmt_sci(rep.deviations[0]) + "," + fmt_sci(rep.deviations[1]) + "," +
                       fmt_sci(rep.deviations[2])};
  });

  out.emplace_back("nonrel_limit/exponential", [=](std::mt19937_64&) {
    BeamParams p;
    p.l = 2;
    p.p_z = 0.1;
    std::vector<SpacetimePoint> pts, slice;
    for (double r : {0.25, 0.75, 1.25, 2.0, 2.5})
      for (double t : {-1.0, 0.0, 0.7})
        for (double z : {-2.0, 0.0, 1.5}) pts.push_back({r, 0.3, z, t});
    for (int i = 1; i <= 30; ++i) slice.push_back({0.1 * i, 0.3, 0.0, 0.0});
    const auto rep = nonrel_limit_exp(p, 0.5, 1.0, 1.0, {10.0, 20.0, 40.0}, pts, slice, {1.0, 0.0, 0.0, 0.0});
    return Outcome{rep.final_slice_deviation(), 1e-2, Bound::at_most, rep.monotone,
                   "l=2 beta=0.5 p_z=0.1 c in {10,20,40}",
                   "deviations=" + fmt_sci(rep.deviations[0]) + "," + fmt_sci(rep.deviations[1]) + "," +
                       fmt_sci(rep.deviations[2])};
  });

  return out;
}

/// Run the configured checks concurrently and assemble the report. Check
/// failures and exceptions are recorded, never thrown.
inline ValidationReport run_full_validation(const ValidationConfig& cfg = {}) {
  ValidationReport report;
  report.seed = cfg.seed;
  report.record_runtime = cfg.record_runtime;
  auto all = build_checks(cfg);
  std::vector<std::pair<std::string, detail::CheckFn>> selected;
  if (cfg.checks) {
    for (const auto& id : *cfg.checks) {
      auto it = std::find_if(all.begin(), all.end(), [&](const auto& c) { return c.first == id; });
      if (it == all.end()) throw std::invalid_argument("unknown check id: " + id);
      selected.push_back(*it);
    }
  } else {
    selected = std::move(all);
  }

  std::vector<std::future<CheckResult>> futures;
  for (const auto& [id, fn] : selected) {
    futures.push_back(std::async(std::launch::async, [&cfg, id = id, fn = fn] {
      CheckResult r;
      r.id = id;
      const auto start = std::chrono::steady_clock::now();
      try {
        std::mt19937_64 rng(detail::check_seed(cfg.seed, id));
        auto o = fn(rng);
        r.value = o.value;
        r.tolerance = cfg.tolerance_override ? *cfg.tolerance_override : o.tolerance;
        r.bound = o.bound;
        r.parameters = o.parameters;
        r.detail = o.detail;
        const bool within = o.bound == Bound::at_most ? r.value <= r.tolerance : r.value > r.tolerance;
        r.pass = within && o.extra_ok && std::isfinite(r.value);
      } catch (const std::exception& e) {
        r.pass = false;
        r.error = e.what();
      }
      r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return r;
    }));
  }
  for (auto& f : futures) report.checks.push_back(f.get());
  return report;
}

namespace detail {

inline std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace detail

/// One `check` record per line, then a `summary` line. Values are key=value
/// pairs; strings are double-quoted with backslash escapes.
inline std::string serialize_report(const ValidationReport& report, std::string_view version) {
  using detail::fmt_sci;
  std::ostringstream os;
  os << "# diracbeams validation report\n";
  os << "# version: " << version << "\n";
  os << "# seed: " << report.seed << "\n";
  for (const auto& c : report.checks) {
    os << "check id=" << detail::quoted(c.id) << " pass=" << (c.pass ? "true" : "false")
       << " value=" << fmt_sci(c.value) << " bound=" << (c.bound == Bound::at_most ? "max" : "min")
       << " tolerance=" << fmt_sci(c.tolerance);
    if (report.record_runtime) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", c.runtime_s);
      os << " runtime_s=" << buf;
    }
    os << " parameters=" << detail::quoted(c.parameters) << " detail=" << detail::quoted(c.detail);
    if (!c.error.empty()) os << " error=" << detail::quoted(c.error);
    os << "\n";
  }
  os << "summary checks=" << report.checks.size() << " passed=" << report.passed()
     << " failed=" << report.checks.size() - report.passed() << " overall=" << (report.overall_pass() ? "pass" : "fail")
     << "\n";
  return os.str();
}

}  // namespace diracbeams
