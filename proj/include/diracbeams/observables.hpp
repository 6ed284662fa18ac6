#pragma once

// Densities, currents and velocities of the beams; the Gordon split of the
// Dirac current; curl, divergence and circulation of sampled vector fields.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "diracbeams/core.hpp"
#include "diracbeams/dirac.hpp"
#include "diracbeams/scalar_solutions.hpp"

namespace diracbeams {

struct VelocitySample {
  Vec3 v;
  double density = 0.0;
};

struct CurrentSplit {
  Vec3 total;
  Vec3 orbital;
  Vec3 spin;
};

using VectorSampler = std::function<Vec3(const SpacetimePoint&)>;

namespace detail {

// <s| sigma |s> for a two-component spinor (a, b).
inline Vec3 sigma_expectation(const cplx& a, const cplx& b) {
  const cplx ab = std::conj(a) * b;
  return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b)};
}

// phi^dagger sigma chi for phi = (a, b), chi = (c, d).
inline std::array<cplx, 3> sigma_bilinear(const cplx& a, const cplx& b, const cplx& c, const cplx& d) {
  const cplx ad = std::conj(a) * d, bc = std::conj(b) * c;
  return {ad + bc, cplx(0.0, -1.0) * ad + cplx(0.0, 1.0) * bc, std::conj(a) * c - std::conj(b) * d};
}

}  // namespace detail

/// Nonrelativistic flow velocity (hbar/m) Im(psi* grad psi)/|psi|^2. The
/// azimuthal part is hbar l/(m rho) from the harmonic index.
inline Vec3 nonrel_velocity(const ScalarJet& jet, const PhysicalConstants& k, const SpacetimePoint& x) {
  const double dens = std::norm(jet.value);
  if (!(dens > 0.0)) throw DomainError("nonrel_velocity: zero density, velocity undefined");
  if (!(x.rho > 0.0)) throw DomainError("nonrel_velocity: velocity undefined on the axis");
  const double hm = k.hbar() / k.mass();
  const double v_rho = hm * (std::conj(jet.value) * jet.d_rho).imag() / dens;
  const double v_z = hm * (std::conj(jet.value) * jet.d_z).imag() / dens;
  const double v_phi = hm * jet.azimuthal_index / x.rho;
  return Vec3::from_cylindrical(v_rho, v_phi, v_z, x.phi);
}

/// Dirac probability current c (phi^+ sigma phi - chi^+ sigma chi).
inline Vec3 dirac_current(const Bispinor& psi, const PhysicalConstants& k) {
  return k.c() * (detail::sigma_expectation(psi.phi1(), psi.phi2()) -
                  detail::sigma_expectation(psi.chi1(), psi.chi2()));
}

/// v_D = c (phi^+ sigma phi - chi^+ sigma chi) / (phi^+ phi + chi^+ chi).
/// The ratio is formed after rescaling, so it stays finite where the density
/// itself underflows.
inline VelocitySample dirac_velocity(const Bispinor& psi, const PhysicalConstants& k) {
  double scale = 0.0;
  for (const auto& v : psi.c) scale = std::max(scale, std::abs(v));
  if (!(scale > 0.0)) throw DomainError("dirac_velocity: zero density, velocity undefined");
  Bispinor unit = psi;
  for (auto& v : unit.c) v /= scale;
  VelocitySample out;
  out.v = dirac_current(unit, k) * (1.0 / unit.norm2());
  out.density = psi.norm2();
  return out;
}

namespace detail {

struct CartesianGradient {
  std::array<std::array<cplx, 3>, 4> grad{};  // [component][x,y,z]
  std::array<cplx, 4> d_t{};
  std::array<cplx, 4> value{};
};

inline CartesianGradient cartesian_gradient(const BispinorField& field, const PhysicalConstants& k,
                                            const SpacetimePoint& x, double step) {
  const auto d = difference_field(field, k, x, step);
  const double cp = std::cos(x.phi), sp = std::sin(x.phi);
  CartesianGradient g;
  for (std::size_t i = 0; i < 4; ++i) {
    const cplx d_phi = cplx(0.0, d.harmonic[i]) * d.value[i];
    g.grad[i] = {cp * d.d_rho[i] - sp / x.rho * d_phi, sp * d.d_rho[i] + cp / x.rho * d_phi, d.d_z[i]};
    g.d_t[i] = d.d_t[i];
    g.value[i] = d.value[i];
  }
  return g;
}

inline SpacetimePoint moved(SpacetimePoint x, double d_rho, double d_phi, double d_z, double d_t) {
  x.rho += d_rho;
  x.phi += d_phi;
  x.z += d_z;
  x.t += d_t;
  return x;
}

// d/drho, d/dphi, d/dz of a Cartesian vector field by central differences;
// the azimuthal step is the arc length `step`.
struct VectorJacobian {
  std::array<Vec3, 3> cyl;  // derivatives along rho, phi, z
  Vec3 d_x, d_y, d_z;       // Cartesian partials of the vector field
};

inline VectorJacobian vector_jacobian(const VectorSampler& f, const SpacetimePoint& x, double step) {
  check_fd_step(step, x);
  const double dphi = step / x.rho;
  VectorJacobian j;
  j.cyl[0] = (f(moved(x, step, 0, 0, 0)) - f(moved(x, -step, 0, 0, 0))) * (0.5 / step);
  j.cyl[1] = (f(moved(x, 0, dphi, 0, 0)) - f(moved(x, 0, -dphi, 0, 0))) * (0.5 / dphi);
  j.cyl[2] = (f(moved(x, 0, 0, step, 0)) - f(moved(x, 0, 0, -step, 0))) * (0.5 / step);
  const double cp = std::cos(x.phi), sp = std::sin(x.phi);
  j.d_x = j.cyl[0] * cp - j.cyl[1] * (sp / x.rho);
  j.d_y = j.cyl[0] * sp + j.cyl[1] * (cp / x.rho);
  j.d_z = j.cyl[2];
  return j;
}

}  // namespace detail

/// Central-difference curl of a Cartesian vector field (Cartesian result).
inline Vec3 curl(const VectorSampler& f, const SpacetimePoint& x, double step) {
  const auto j = detail::vector_jacobian(f, x, step);
  return {j.d_y.z - j.d_z.y, j.d_z.x - j.d_x.z, j.d_x.y - j.d_y.x};
}

/// Central-difference divergence and the sum of magnitudes of its terms.
struct DivergenceSample {
  double value = 0.0;
  double scale = 0.0;
};

inline DivergenceSample divergence(const VectorSampler& f, const SpacetimePoint& x, double step) {
  const auto j = detail::vector_jacobian(f, x, step);
  return {j.d_x.x + j.d_y.y + j.d_z.z, std::abs(j.d_x.x) + std::abs(j.d_y.y) + std::abs(j.d_z.z)};
}

/// Orbital Gordon current (hbar/m) Im(phi^+ grad chi - (grad phi)^+ chi).
/// Equals (2 hbar/m) Im(phi^+ grad chi) up to the curl-free term
/// (hbar/m) grad Im(phi^+ chi).
inline Vec3 gordon_orbital(const BispinorField& field, const PhysicalConstants& k, const SpacetimePoint& x,
                           double step) {
  const auto g = detail::cartesian_gradient(field, k, x, step);
  std::array<double, 3> out{};
  for (std::size_t dir = 0; dir < 3; ++dir) {
    cplx s(0.0);
    for (std::size_t a = 0; a < 2; ++a)
      s += std::conj(g.value[a]) * g.grad[a + 2][dir] - std::conj(g.grad[a][dir]) * g.value[a + 2];
    out[dir] = s.imag();
  }
  const double hm = k.hbar() / k.mass();
  return Vec3{out[0], out[1], out[2]} * hm;
}

/// Single-term orbital current (2 hbar/m) Im(phi^+ grad chi); equals the exact
/// orbital part for Bessel beams only.
inline Vec3 gordon_orbital_simple(const BispinorField& field, const PhysicalConstants& k,
                                   const SpacetimePoint& x, double step) {
  const auto g = detail::cartesian_gradient(field, k, x, step);
  std::array<double, 3> out{};
  for (std::size_t dir = 0; dir < 3; ++dir) {
    cplx s(0.0);
    for (std::size_t a = 0; a < 2; ++a) s += std::conj(g.value[a]) * g.grad[a + 2][dir];
    out[dir] = s.imag();
  }
  return Vec3{out[0], out[1], out[2]} * (2.0 * k.hbar() / k.mass());
}

/// Re and Im of phi^+ sigma chi as Cartesian vectors.
inline std::array<Vec3, 2> spin_bilinear(const Bispinor& psi) {
  const auto s = detail::sigma_bilinear(psi.phi1(), psi.phi2(), psi.chi1(), psi.chi2());
  return {Vec3{s[0].real(), s[1].real(), s[2].real()}, Vec3{s[0].imag(), s[1].imag(), s[2].imag()}};
}

/// Spin Gordon current (hbar/m)[curl Re(phi^+ sigma chi) - (1/c) d_t Im(phi^+ sigma chi)],
/// both derivatives by central differences.
inline Vec3 gordon_spin(const BispinorField& field, const PhysicalConstants& k, const SpacetimePoint& x,
                        double step) {
  const VectorSampler re = [&](const SpacetimePoint& p) { return spin_bilinear(field(p))[0]; };
  const double dt = step / k.c();
  const Vec3 im_t = (spin_bilinear(field(detail::moved(x, 0, 0, 0, dt)))[1] -
                     spin_bilinear(field(detail::moved(x, 0, 0, 0, -dt)))[1]) *
                    (0.5 / dt);
  return (curl(re, x, step) - im_t * (1.0 / k.c())) * (k.hbar() / k.mass());
}

inline CurrentSplit gordon_split(const BispinorField& field, const PhysicalConstants& k, const SpacetimePoint& x,
                                 double step) {
  return {dirac_current(field(x), k), gordon_orbital(field, k, x, step), gordon_spin(field, k, x, step)};
}

/// Trapezoidal circulation of a velocity field around the axis-centred
/// circle of the given radius.
inline double circulation(const VectorSampler& velocity, double radius, double z, double t, int n_samples) {
  if (!(radius > 0.0)) throw std::invalid_argument("circulation: radius must be > 0");
  if (n_samples < 64) throw std::invalid_argument("circulation: need at least 64 samples");
  double sum = 0.0;
  for (int j = 0; j < n_samples; ++j) {
    SpacetimePoint x{radius, 2.0 * pi * j / n_samples, z, t};
    const Vec3 v = velocity(x);
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z))
      throw DomainError("circulation: undefined velocity on the circle");
    sum += v.to_cylindrical(x.phi).y;
  }
  return sum * 2.0 * pi * radius / n_samples;
}

/// Curl samples of a velocity field on a list of points.
inline std::vector<Vec3> vorticity_field(const VectorSampler& velocity, const std::vector<SpacetimePoint>& points,
                                         double step) {
  std::vector<Vec3> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(curl(velocity, p, step));
  return out;
}

inline VectorSampler dirac_velocity_sampler(BispinorField field, PhysicalConstants k) {
  return [field = std::move(field), k](const SpacetimePoint& x) { return dirac_velocity(field(x), k).v; };
}

inline VectorSampler orbital_velocity_sampler(BispinorField field, PhysicalConstants k, double step) {
  return [field = std::move(field), k, step](const SpacetimePoint& x) {
    const Bispinor psi = field(x);
    return gordon_orbital(field, k, x, step) * (1.0 / psi.norm2());
  };
}

inline VectorSampler nonrel_velocity_sampler(ScalarKind kind, BeamParams params, PhysicalConstants k) {
  return [=](const SpacetimePoint& x) { return nonrel_velocity(eval_scalar(kind, params, k, x), k, x); };
}

}  // namespace diracbeams
