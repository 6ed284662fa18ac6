#pragma once

// Physical constants, beam parameters and spacetime points shared by every
// other header of the library.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace diracbeams {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Raised when an argument lies outside the domain of a formula
/// (imaginary transverse momentum, energy below E_parallel, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The unit system (hbar, m, c). Compton units by default.
class PhysicalConstants {
 public:
  PhysicalConstants() = default;
  PhysicalConstants(double hbar, double mass, double c) : hbar_(hbar), mass_(mass), c_(c) {
    if (!(hbar > 0.0) || !(mass > 0.0) || !(c > 0.0) || !std::isfinite(hbar) ||
        !std::isfinite(mass) || !std::isfinite(c))
      throw std::invalid_argument("PhysicalConstants: hbar, mass and c must be finite and > 0");
  }

  double hbar() const { return hbar_; }
  double mass() const { return mass_; }
  double c() const { return c_; }
  /// Reduced Compton wavelength hbar/(m c).
  double lambda_bar() const { return hbar_ / (mass_ * c_); }
  double rest_energy() const { return mass_ * c_ * c_; }

 private:
  double hbar_ = 1.0;
  double mass_ = 1.0;
  double c_ = 1.0;
};

/// Quantum numbers and shape parameters of a packet. All dimensional fields
/// are expressed in the unit system of the accompanying PhysicalConstants.
struct BeamParams {
  int l = 0;            // azimuthal index
  double p_z = 0.0;     // longitudinal momentum
  double b = 40.0;      // width parameter of the exponential packet
  std::optional<double> energy;  // Bessel and relativistic LG
  int n = 0;            // LG radial index
  double w = 1.0;       // LG width
};

/// Event in cylindrical coordinates.
struct SpacetimePoint {
  double rho = 0.0;
  double phi = 0.0;
  double z = 0.0;
  double t = 0.0;

  double t_plus(double c) const { return t + z / c; }
  double t_minus(double c) const { return t - z / c; }
  double x() const { return rho * std::cos(phi); }
  double y() const { return rho * std::sin(phi); }
};

struct DerivedBeamQuantities {
  double gamma = 1.0;
  double q = 0.0;          // gamma / (b lambda_bar)
  double e_parallel = 0.0; // gamma m c^2
  std::optional<double> p_perp;
};

inline DerivedBeamQuantities derived_quantities(const BeamParams& params,
                                                const PhysicalConstants& k) {
  DerivedBeamQuantities d;
  const double mc = k.mass() * k.c();
  d.gamma = std::hypot(1.0, params.p_z / mc);
  d.e_parallel = d.gamma * k.rest_energy();
  if (params.b > 0.0) d.q = d.gamma / (params.b * k.lambda_bar());
  if (params.energy) {
    const double e_over_c = *params.energy / k.c();
    const double p_perp2 = e_over_c * e_over_c - mc * mc - params.p_z * params.p_z;
    if (*params.energy < d.e_parallel || p_perp2 < 0.0) {
      // E slightly below E_parallel through rounding still counts as the threshold.
      if (p_perp2 > -1e-14 * e_over_c * e_over_c)
        d.p_perp = 0.0;
      else
        throw DomainError("derived_quantities: E < E_parallel gives imaginary p_perp");
    } else {
      d.p_perp = std::sqrt(p_perp2);
    }
  }
  return d;
}

/// Minimal Cartesian 3-vector for currents and velocities.
struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
  friend Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend Vec3 operator*(double s, Vec3 a) { return a *= s; }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }

  /// Cylindrical components (rho, phi, z) at azimuth phi.
  Vec3 to_cylindrical(double phi) const {
    const double c = std::cos(phi), s = std::sin(phi);
    return {c * x + s * y, -s * x + c * y, z};
  }
  static Vec3 from_cylindrical(double v_rho, double v_phi, double v_z, double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    return {c * v_rho - s * v_phi, s * v_rho + c * v_phi, v_z};
  }
};

}  // namespace diracbeams
