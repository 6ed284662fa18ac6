#pragma once

// KG->D construction: Dirac bispinors from a single scalar Klein-Gordon
// solution, the first-order matrix operators D and D~, and the
// angular-momentum bookkeeping of the resulting beams.
//
// Spinorial basis: Psi = (phi, chi), D = (1/c) d_t + sigma.grad,
// D~ = (1/c) d_t - sigma.grad, and the Dirac equation reads
//   i hbar D phi = m c chi,   i hbar D~ chi = m c phi.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <set>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "diracbeams/core.hpp"
#include "diracbeams/scalar_solutions.hpp"

namespace diracbeams {

enum class SpinChoice { up, down };

inline std::string_view to_string(SpinChoice s) { return s == SpinChoice::up ? "up" : "down"; }

inline SpinChoice spin_from_string(std::string_view name) {
  if (name == "up") return SpinChoice::up;
  if (name == "down") return SpinChoice::down;
  throw std::invalid_argument("unknown spin choice: " + std::string(name));
}

/// Four components (phi1, phi2, chi1, chi2). Each component is a single
/// azimuthal harmonic e^{i k phi}; `harmonic` records k per component.
struct Bispinor {
  std::array<cplx, 4> c{};
  std::array<int, 4> harmonic{};

  cplx& phi1() { return c[0]; }
  cplx& phi2() { return c[1]; }
  cplx& chi1() { return c[2]; }
  cplx& chi2() { return c[3]; }
  const cplx& phi1() const { return c[0]; }
  const cplx& phi2() const { return c[1]; }
  const cplx& chi1() const { return c[2]; }
  const cplx& chi2() const { return c[3]; }

  double norm2() const {
    double s = 0.0;
    for (const auto& v : c) s += std::norm(v);
    return s;
  }
  bool finite() const {
    for (const auto& v : c)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }
};

/// sigma_z eigenvalue of each component in this basis.
inline constexpr std::array<int, 4> kSigmaZ{+1, -1, +1, -1};

/// Twice the J_z eigenvalue (in units of hbar) carried by a built beam.
inline int twice_jz(int l, SpinChoice spin) { return spin == SpinChoice::up ? 2 * l + 1 : 2 * l - 1; }

/// chi = i lambda_bar D phi with phi = (f, 0) (up) or (0, f) (down), using
/// the analytic jet of f. `phi` is the azimuth of the evaluation point.
inline Bispinor build_bispinor(const ScalarJet& jet, SpinChoice spin, const PhysicalConstants& k,
                               double phi) {
  const cplx i_lambda(0.0, k.lambda_bar());
  const double c = k.c();
  const int l = jet.azimuthal_index;
  Bispinor psi;
  if (spin == SpinChoice::up) {
    psi.c = {jet.value, 0.0, i_lambda * (jet.d_t / c + jet.d_z),
             i_lambda * std::polar(1.0, phi) * jet.raising()};
    psi.harmonic = {l, l + 1, l, l + 1};
  } else {
    psi.c = {0.0, jet.value, i_lambda * std::polar(1.0, -phi) * jet.lowering(),
             i_lambda * (jet.d_t / c - jet.d_z)};
    psi.harmonic = {l - 1, l, l - 1, l};
  }
  return psi;
}

using BispinorField = std::function<Bispinor(const SpacetimePoint&)>;

/// The bispinor field of a packet, built on demand at each point.
inline BispinorField packet_field(ScalarKind kind, SpinChoice spin, BeamParams params,
                                  PhysicalConstants k,
                                  ExpNormalization norm = ExpNormalization::standard) {
  return [=](const SpacetimePoint& x) {
    return build_bispinor(eval_scalar(kind, params, k, x, norm), spin, k, x.phi);
  };
}

using Spinor2 = std::array<cplx, 2>;

namespace detail {

struct ComponentDerivatives {
  std::array<cplx, 4> value{}, d_t{}, d_z{}, d_rho{};
  std::array<int, 4> harmonic{};
};

// Central differences of a black-box field in t, z and rho only.
inline ComponentDerivatives difference_field(const BispinorField& field, const PhysicalConstants& k,
                                             const SpacetimePoint& x, double step) {
  check_fd_step(step, x);
  const double dt = step / k.c();
  const Bispinor center = field(x);
  const Bispinor tp = field(shifted(x, 0, 0, dt)), tm = field(shifted(x, 0, 0, -dt));
  const Bispinor zp = field(shifted(x, 0, step, 0)), zm = field(shifted(x, 0, -step, 0));
  const Bispinor rp = field(shifted(x, step, 0, 0)), rm = field(shifted(x, -step, 0, 0));
  ComponentDerivatives out;
  out.harmonic = center.harmonic;
  for (std::size_t i = 0; i < 4; ++i) {
    out.value[i] = center.c[i];
    out.d_t[i] = (tp.c[i] - tm.c[i]) / (2.0 * dt);
    out.d_z[i] = (zp.c[i] - zm.c[i]) / (2.0 * step);
    out.d_rho[i] = (rp.c[i] - rm.c[i]) / (2.0 * step);
  }
  return out;
}

// (d_x + i d_y) g = e^{i phi}(d_rho - k/rho) g for a harmonic-k component.
inline cplx plus_derivative(const ComponentDerivatives& d, std::size_t i, const SpacetimePoint& x) {
  return std::polar(1.0, x.phi) * (d.d_rho[i] - static_cast<double>(d.harmonic[i]) * d.value[i] / x.rho);
}
// (d_x - i d_y) g = e^{-i phi}(d_rho + k/rho) g.
inline cplx minus_derivative(const ComponentDerivatives& d, std::size_t i, const SpacetimePoint& x) {
  return std::polar(1.0, -x.phi) * (d.d_rho[i] + static_cast<double>(d.harmonic[i]) * d.value[i] / x.rho);
}

inline Spinor2 apply_D_impl(const ComponentDerivatives& d, std::size_t first, const PhysicalConstants& k,
                            const SpacetimePoint& x, bool tilde) {
  const double c = k.c();
  const std::size_t a = first, b = first + 1;
  const double s = tilde ? -1.0 : 1.0;
  return {d.d_t[a] / c + s * d.d_z[a] + s * minus_derivative(d, b, x),
          s * plus_derivative(d, a, x) + d.d_t[b] / c - s * d.d_z[b]};
}

}  // namespace detail

/// D applied to the upper spinor phi of `field` at x (finite differences in
/// t, z, rho; azimuthal derivatives from the component harmonics).
inline Spinor2 apply_D(const BispinorField& field, const PhysicalConstants& k, const SpacetimePoint& x,
                       double step) {
  return detail::apply_D_impl(detail::difference_field(field, k, x, step), 0, k, x, false);
}

/// D~ applied to the lower spinor chi of `field` at x.
inline Spinor2 apply_Dtilde(const BispinorField& field, const PhysicalConstants& k,
                            const SpacetimePoint& x, double step) {
  return detail::apply_D_impl(detail::difference_field(field, k, x, step), 2, k, x, true);
}

struct DiracResiduals {
  double upper = 0.0;  // |i hbar D phi - m c chi| / (m c |Psi|)
  double lower = 0.0;  // |i hbar D~ chi - m c phi| / (m c |Psi|)
  double max() const { return std::max(upper, lower); }
};

inline DiracResiduals dirac_residuals(const BispinorField& field, const PhysicalConstants& k,
                                      const SpacetimePoint& x, double step) {
  const auto d = detail::difference_field(field, k, x, step);
  const Spinor2 dphi = detail::apply_D_impl(d, 0, k, x, false);
  const Spinor2 dchi = detail::apply_D_impl(d, 2, k, x, true);
  const double mc = k.mass() * k.c();
  const cplx ih(0.0, k.hbar());
  double norm = 0.0;
  for (const auto& v : d.value) norm += std::norm(v);
  norm = std::sqrt(norm);
  if (norm == 0.0) return {};
  const double up = std::hypot(std::abs(ih * dphi[0] - mc * d.value[2]), std::abs(ih * dphi[1] - mc * d.value[3]));
  const double lo = std::hypot(std::abs(ih * dchi[0] - mc * d.value[0]), std::abs(ih * dchi[1] - mc * d.value[1]));
  return {up / (mc * norm), lo / (mc * norm)};
}

/// max_k |J_z Psi - hbar j Psi|_k / (hbar |Psi|) with J_z = -i hbar d_phi +
/// (hbar/2) diag(sigma_z, sigma_z), using the analytic component harmonics.
/// `twice_j` is 2j, e.g. 2l+1 for the spin-up beam.
inline double jz_eigencheck(const Bispinor& psi, int twice_j) {
  const double norm = std::sqrt(psi.norm2());
  if (norm == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double twice_m = 2.0 * psi.harmonic[i] + kSigmaZ[i];
    worst = std::max(worst, 0.5 * std::abs(twice_m - twice_j) * std::abs(psi.c[i]) / norm);
  }
  return worst;
}

inline double jz_eigencheck(const Bispinor& psi, SpinChoice spin, int l) {
  return jz_eigencheck(psi, twice_jz(l, spin));
}

/// Field values on a ring of `count` equally spaced azimuths at fixed rho, z, t.
inline std::vector<Bispinor> sample_ring(const BispinorField& field, SpacetimePoint x, int count) {
  std::vector<Bispinor> ring;
  ring.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    x.phi = 2.0 * pi * j / count;
    ring.push_back(field(x));
  }
  return ring;
}

/// Discrete Fourier coefficients c_m, m in [-N/2, N/2), of one component on a ring.
inline std::vector<cplx> ring_fourier(std::span<const Bispinor> ring, std::size_t component) {
  const int n = static_cast<int>(ring.size());
  std::vector<cplx> coeff(ring.size());
  for (int m = -n / 2; m < n - n / 2; ++m) {
    cplx sum(0.0);
    for (int j = 0; j < n; ++j)
      sum += ring[static_cast<std::size_t>(j)].c[component] * std::polar(1.0, -2.0 * pi * m * j / n);
    coeff[static_cast<std::size_t>(m + n / 2)] = sum / static_cast<double>(n);
  }
  return coeff;
}

/// -i d/dphi of every component at ring sample `index`, by spectral
/// differentiation of the ring.
inline std::array<cplx, 4> ring_angular_derivative(std::span<const Bispinor> ring, std::size_t index) {
  const int n = static_cast<int>(ring.size());
  std::array<cplx, 4> out{};
  for (std::size_t comp = 0; comp < 4; ++comp) {
    const auto coeff = ring_fourier(ring, comp);
    cplx sum(0.0);
    for (int m = -n / 2; m < n - n / 2; ++m)
      sum += static_cast<double>(m) * coeff[static_cast<std::size_t>(m + n / 2)] *
             std::polar(1.0, 2.0 * pi * m * static_cast<double>(index) / n);
    out[comp] = sum;
  }
  return out;
}

/// J_z residual with the orbital part taken from ring samples instead of
/// the recorded harmonics.
inline double jz_eigencheck_sampled(std::span<const Bispinor> ring, std::size_t index, int twice_j) {
  const Bispinor& psi = ring[index];
  const double norm = std::sqrt(psi.norm2());
  if (norm == 0.0) return 0.0;
  const auto lz = ring_angular_derivative(ring, index);
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const cplx jz = lz[i] + 0.5 * kSigmaZ[i] * psi.c[i];
    worst = std::max(worst, std::abs(jz - 0.5 * twice_j * psi.c[i]) / norm);
  }
  return worst;
}

struct AzimuthalContent {
  std::array<std::set<int>, 4> per_component;
  std::set<int> all;
};

/// Azimuthal harmonics present on a ring of samples. A harmonic is reported
/// for a component when its power exceeds `threshold` times that component's
/// power, and in `all` when it exceeds `threshold` times the total power.
inline AzimuthalContent azimuthal_content(std::span<const Bispinor> ring, double threshold = 1e-10) {
  if (ring.size() < 64) throw std::invalid_argument("azimuthal_content: need at least 64 ring samples");
  const int n = static_cast<int>(ring.size());
  AzimuthalContent out;
  std::array<std::vector<cplx>, 4> coeffs;
  std::array<double, 4> power{};
  double total = 0.0;
  for (std::size_t comp = 0; comp < 4; ++comp) {
    coeffs[comp] = ring_fourier(ring, comp);
    for (const auto& v : coeffs[comp]) power[comp] += std::norm(v);
    total += power[comp];
  }
  if (total == 0.0) return out;
  for (std::size_t comp = 0; comp < 4; ++comp) {
    for (int m = -n / 2; m < n - n / 2; ++m) {
      const double p = std::norm(coeffs[comp][static_cast<std::size_t>(m + n / 2)]);
      if (power[comp] > 0.0 && p > threshold * power[comp]) out.per_component[comp].insert(m);
      if (p > threshold * total) out.all.insert(m);
    }
  }
  return out;
}

}  // namespace diracbeams
