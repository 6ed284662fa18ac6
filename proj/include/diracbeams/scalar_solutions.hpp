#pragma once

// Closed-form scalar wave functions and their analytic first derivatives.
//
// Every evaluator returns a ScalarJet: the value together with d/dt, d/dz and
// d/drho. The azimuthal dependence is always the pure harmonic e^{i l phi}, so
// d/dphi is i*l*value and is never stored or differenced.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "diracbeams/core.hpp"
#include "diracbeams/special_functions.hpp"

namespace diracbeams {

enum class ScalarKind { bessel, lg_nonrel, lg_rel, exponential };

inline std::string_view to_string(ScalarKind kind) {
  switch (kind) {
    case ScalarKind::bessel: return "bessel";
    case ScalarKind::lg_nonrel: return "lg_nonrel";
    case ScalarKind::lg_rel: return "lg_rel";
    case ScalarKind::exponential: return "exponential";
  }
  return "?";
}

inline ScalarKind scalar_kind_from_string(std::string_view name) {
  if (name == "bessel") return ScalarKind::bessel;
  if (name == "lg_nonrel") return ScalarKind::lg_nonrel;
  if (name == "lg_rel") return ScalarKind::lg_rel;
  if (name == "exponential" || name == "exp") return ScalarKind::exponential;
  throw std::invalid_argument("unknown scalar kind: " + std::string(name));
}

struct ScalarJet {
  cplx value;
  cplx d_t;
  cplx d_z;
  cplx d_rho;
  /// value/rho, with its finite limit on the axis. Only ever consumed as
  /// l*value_over_rho, so it is set to zero on the axis when l == 0.
  cplx value_over_rho;
  int azimuthal_index = 0;

  /// (d_rho - l/rho) value: radial part of e^{-i phi}(d_x + i d_y).
  cplx raising() const { return d_rho - static_cast<double>(azimuthal_index) * value_over_rho; }
  /// (d_rho + l/rho) value: radial part of e^{+i phi}(d_x - i d_y).
  cplx lowering() const { return d_rho + static_cast<double>(azimuthal_index) * value_over_rho; }
  /// d/dphi value.
  cplx d_phi() const { return cplx(0.0, azimuthal_index) * value; }
};

/// How the exponential packet is normalized. `standard` keeps the closed
/// form exactly; `unit_at_origin` drops the constant factor e^{-b} so that
/// large b (or b = beta c^2) does not underflow.
enum class ExpNormalization { standard, unit_at_origin };

namespace detail {

inline cplx azimuthal_phase(int l, double phi) { return std::polar(1.0, l * phi); }

inline cplx pow_int(cplx base, int n) {
  cplx r(1.0, 0.0);
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

inline double pow_int(double base, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

inline cplx over_rho_fallback(int l, const cplx& value, double rho) {
  if (rho > 0.0) return value / rho;
  if (l == 0) return 0.0;
  return value / rho;  // only reached for an inconsistent caller
}

// LG radial envelope rho^L a^{-N} e^{-rho^2/a} L_n^L(rho^2/a) with N = n+L+1,
// its rho derivative, its derivative along a (times da), and envelope/rho.
struct LgEnvelope {
  cplx value;
  cplx d_rho;
  cplx d_a;  // d envelope / d a
  cplx over_rho;
};

inline LgEnvelope lg_envelope(int n, int abs_l, double rho, cplx a) {
  const int big_n = n + abs_l + 1;
  const cplx u = rho * rho / a;
  const cplx lag = laguerre(n, abs_l, u);
  const cplx dlag = laguerre_derivative(n, abs_l, u);
  const cplx common = pow_int(a, big_n);
  const cplx gauss = std::exp(-u) / common;  // a^{-N} e^{-u}
  const double rho_lm1 = abs_l >= 1 ? pow_int(rho, abs_l - 1) : 0.0;
  LgEnvelope env;
  env.value = pow_int(rho, abs_l) * gauss * lag;
  // d/drho: rho^{L-1} a^{-N} e^{-u} [L lag + 2u (lag' - lag)]
  const cplx bracket = 2.0 * u * (dlag - lag);
  if (abs_l >= 1)
    env.d_rho = rho_lm1 * gauss * (static_cast<double>(abs_l) * lag + bracket);
  else
    env.d_rho = (rho > 0.0 ? gauss * bracket / rho : cplx(0.0));
  // d/da: rho^L a^{-N} e^{-u} (1/a)[-N lag + u (lag - lag')]
  env.d_a = pow_int(rho, abs_l) * gauss / a * (-static_cast<double>(big_n) * lag + u * (lag - dlag));
  env.over_rho = abs_l >= 1 ? rho_lm1 * gauss * lag : cplx(0.0);
  if (abs_l == 0 && rho > 0.0) env.over_rho = env.value / rho;
  return env;
}

}  // namespace detail

/// Monochromatic Bessel beam e^{-i(Et - p_z z)/hbar} e^{i l phi} J_l(p_perp rho/hbar).
inline ScalarJet eval_bessel_scalar(const BeamParams& params, const PhysicalConstants& k,
                                    const SpacetimePoint& x) {
  if (!params.energy) throw std::invalid_argument("eval_bessel_scalar: energy not set");
  const auto d = derived_quantities(params, k);
  const double energy = *params.energy;
  const double kperp = *d.p_perp / k.hbar();
  const cplx phase = std::polar(1.0, -(energy * x.t - params.p_z * x.z) / k.hbar()) *
                     detail::azimuthal_phase(params.l, x.phi);
  const auto j = bessel_j_triplet(params.l, kperp * x.rho);
  ScalarJet jet;
  jet.azimuthal_index = params.l;
  jet.value = phase * j[1];
  jet.d_t = cplx(0.0, -energy / k.hbar()) * jet.value;
  jet.d_z = cplx(0.0, params.p_z / k.hbar()) * jet.value;
  jet.d_rho = phase * (0.5 * kperp * (j[0] - j[2]));
  if (params.l != 0)
    jet.value_over_rho = phase * (kperp * (j[0] + j[2]) / (2.0 * params.l));
  else
    jet.value_over_rho = detail::over_rho_fallback(0, jet.value, x.rho);
  return jet;
}

/// Nonrelativistic Laguerre-Gauss packet, a(t) = w^2 + 2 i hbar t / m.
inline ScalarJet eval_lg_nonrel(const BeamParams& params, const PhysicalConstants& k,
                                const SpacetimePoint& x) {
  if (!(params.w > 0.0) || params.n < 0)
    throw std::invalid_argument("eval_lg_nonrel: need w > 0 and n >= 0");
  const double hbar = k.hbar(), m = k.mass();
  const int abs_l = std::abs(params.l);
  const cplx a(params.w * params.w, 2.0 * hbar * x.t / m);
  const cplx a_dot(0.0, 2.0 * hbar / m);
  const double omega = params.p_z * params.p_z / (2.0 * m * hbar);
  const cplx phase = std::polar(1.0, -omega * x.t + params.p_z * x.z / hbar) *
                     detail::azimuthal_phase(params.l, x.phi);
  const auto env = detail::lg_envelope(params.n, abs_l, x.rho, a);
  ScalarJet jet;
  jet.azimuthal_index = params.l;
  jet.value = phase * env.value;
  jet.d_t = cplx(0.0, -omega) * jet.value + phase * env.d_a * a_dot;
  jet.d_z = cplx(0.0, params.p_z / hbar) * jet.value;
  jet.d_rho = phase * env.d_rho;
  jet.value_over_rho = phase * env.over_rho;
  return jet;
}

/// Relativistic Laguerre-Gauss scalar built on t_+ and t_-,
/// a(t_+) = w^2 + 2 i hbar c^2 t_+ / E.
inline ScalarJet eval_lg_rel(const BeamParams& params, const PhysicalConstants& k,
                             const SpacetimePoint& x) {
  if (!params.energy || !(*params.energy > 0.0))
    throw std::invalid_argument("eval_lg_rel: energy must be set and > 0");
  if (!(params.w > 0.0) || params.n < 0)
    throw std::invalid_argument("eval_lg_rel: need w > 0 and n >= 0");
  const double hbar = k.hbar(), c = k.c(), energy = *params.energy;
  const double rest = k.rest_energy();
  const double tp = x.t_plus(c), tm = x.t_minus(c);
  const double omega_minus = energy / (2.0 * hbar);
  const double omega_plus = rest * rest / (2.0 * energy * hbar);
  const cplx a(params.w * params.w, 2.0 * hbar * c * c * tp / energy);
  const cplx a_dot(0.0, 2.0 * hbar * c * c / energy);
  const cplx phase = std::polar(1.0, -omega_minus * tm - omega_plus * tp) *
                     detail::azimuthal_phase(params.l, x.phi);
  const auto env = detail::lg_envelope(params.n, std::abs(params.l), x.rho, a);
  ScalarJet jet;
  jet.azimuthal_index = params.l;
  jet.value = phase * env.value;
  const cplx d_plus = cplx(0.0, -omega_plus) * jet.value + phase * env.d_a * a_dot;
  const cplx d_minus = cplx(0.0, -omega_minus) * jet.value;
  jet.d_t = d_plus + d_minus;
  jet.d_z = (d_plus - d_minus) / c;
  jet.d_rho = phase * env.d_rho;
  jet.value_over_rho = phase * env.over_rho;
  return jet;
}

/// Exponential packet
///   e^{i p_z z/hbar} e^{i l phi} e^{-b h}/h (q rho / (h + 1 + i q c t))^{|l|},
///   h = sqrt((1 + i q c t)^2 + (q rho)^2).
inline ScalarJet eval_exp_scalar(const BeamParams& params, const PhysicalConstants& k,
                                 const SpacetimePoint& x,
                                 ExpNormalization norm = ExpNormalization::standard) {
  if (!(params.b > 0.0)) throw DomainError("eval_exp_scalar: b must be > 0");
  const auto d = derived_quantities(params, k);
  const double q = d.q, c = k.c(), b = params.b;
  const int abs_l = std::abs(params.l);
  const cplx s(1.0, q * c * x.t);
  const double qr = q * x.rho;
  const cplx h = principal_sqrt(s * s + qr * qr);
  const cplx den = h + s;
  const cplx decay = norm == ExpNormalization::standard ? std::exp(-b * h) : std::exp(-b * (h - 1.0));
  const cplx base = decay / h;
  const cplx ratio = qr / den;
  const cplx ratio_lm1 = abs_l >= 1 ? detail::pow_int(ratio, abs_l - 1) : cplx(0.0);
  const cplx pw = abs_l >= 1 ? ratio_lm1 * ratio : cplx(1.0);
  const cplx phase = std::polar(1.0, params.p_z * x.z / k.hbar()) *
                     detail::azimuthal_phase(params.l, x.phi);

  const cplx dh_t = cplx(0.0, q * c) * s / h;
  const double dh_rho_over_rho = q * q;  // d h/d rho = q^2 rho / h
  const cplx log_base_factor = -b - 1.0 / h;

  ScalarJet jet;
  jet.azimuthal_index = params.l;
  jet.value = phase * base * pw;
  jet.d_t = jet.value * (log_base_factor * dh_t - static_cast<double>(abs_l) * cplx(0.0, q * c) / h);
  jet.d_z = cplx(0.0, params.p_z / k.hbar()) * jet.value;
  const cplx d_base_rho = base * log_base_factor * (dh_rho_over_rho * x.rho) / h;
  cplx d_pw_rho(0.0);
  if (abs_l >= 1) d_pw_rho = static_cast<double>(abs_l) * ratio_lm1 * (q / den) * (1.0 - qr * qr / (h * den));
  jet.d_rho = phase * (d_base_rho * pw + base * d_pw_rho);
  if (abs_l >= 1)
    jet.value_over_rho = phase * base * ratio_lm1 * (q / den);
  else
    jet.value_over_rho = detail::over_rho_fallback(0, jet.value, x.rho);
  return jet;
}

/// log|f_Exp| (standard normalization) without forming f, for regions where
/// e^{-b h} underflows.
inline double exp_scalar_log_modulus(const BeamParams& params, const PhysicalConstants& k,
                                     const SpacetimePoint& x) {
  const auto d = derived_quantities(params, k);
  const double q = d.q;
  const cplx s(1.0, q * k.c() * x.t);
  const double qr = q * x.rho;
  const cplx h = principal_sqrt(s * s + qr * qr);
  const int abs_l = std::abs(params.l);
  double out = -params.b * h.real() - std::log(std::abs(h));
  if (abs_l > 0) out += abs_l * (std::log(qr) - std::log(std::abs(h + s)));
  return out;
}

inline ScalarJet eval_scalar(ScalarKind kind, const BeamParams& params, const PhysicalConstants& k,
                             const SpacetimePoint& x,
                             ExpNormalization norm = ExpNormalization::standard) {
  switch (kind) {
    case ScalarKind::bessel: return eval_bessel_scalar(params, k, x);
    case ScalarKind::lg_nonrel: return eval_lg_nonrel(params, k, x);
    case ScalarKind::lg_rel: return eval_lg_rel(params, k, x);
    case ScalarKind::exponential: return eval_exp_scalar(params, k, x, norm);
  }
  throw std::invalid_argument("eval_scalar: unknown kind");
}

using ScalarSampler = std::function<cplx(const SpacetimePoint&)>;

namespace detail {

inline void check_fd_step(double step, const SpacetimePoint& x) {
  if (!(step > 0.0) || !std::isfinite(step) || step < 1e-12)
    throw std::invalid_argument("finite difference: step must be finite and >= 1e-12");
  if (x.rho < 2.0 * step)
    throw std::invalid_argument("finite difference: point closer than 2*step to the axis");
}

inline SpacetimePoint shifted(SpacetimePoint x, double d_rho, double d_z, double d_t) {
  x.rho += d_rho;
  x.z += d_z;
  x.t += d_t;
  return x;
}

}  // namespace detail

/// Second-order central differences of a sampled field in t, z and rho.
/// `step` is a length; the time step is step/c.
inline ScalarJet finite_difference_jet(const ScalarSampler& f, int azimuthal_index,
                                       const PhysicalConstants& k, const SpacetimePoint& x,
                                       double step) {
  detail::check_fd_step(step, x);
  const double dt = step / k.c();
  ScalarJet jet;
  jet.azimuthal_index = azimuthal_index;
  jet.value = f(x);
  jet.d_t = (f(detail::shifted(x, 0, 0, dt)) - f(detail::shifted(x, 0, 0, -dt))) / (2.0 * dt);
  jet.d_z = (f(detail::shifted(x, 0, step, 0)) - f(detail::shifted(x, 0, -step, 0))) / (2.0 * step);
  jet.d_rho = (f(detail::shifted(x, step, 0, 0)) - f(detail::shifted(x, -step, 0, 0))) / (2.0 * step);
  jet.value_over_rho = jet.value / x.rho;
  return jet;
}

inline ScalarJet finite_difference_jet(ScalarKind kind, const BeamParams& params,
                                       const PhysicalConstants& k, const SpacetimePoint& x,
                                       double step) {
  const ScalarSampler f = [&](const SpacetimePoint& p) { return eval_scalar(kind, params, k, p).value; };
  return finite_difference_jet(f, params.l, k, x, step);
}

/// Relative residual of the wave equation obeyed by `kind` at x, by second
/// central differences of the sampled value. Klein-Gordon for the three
/// relativistic scalars, free Schroedinger for lg_nonrel. The cylindrical
/// Laplacian uses the analytic -l^2/rho^2 azimuthal term. The residual is
/// divided by the sum of the magnitudes of the individual terms.
inline double wave_equation_residual(ScalarKind kind, const BeamParams& params,
                                     const PhysicalConstants& k, const SpacetimePoint& x,
                                     double step) {
  detail::check_fd_step(step, x);
  auto f = [&](double dr, double dz, double dt) {
    return eval_scalar(kind, params, k, detail::shifted(x, dr, dz, dt)).value;
  };
  const double c = k.c(), dt = step / c, h2 = step * step;
  const cplx f0 = f(0, 0, 0);
  const cplx f_rr = (f(step, 0, 0) - 2.0 * f0 + f(-step, 0, 0)) / h2;
  const cplx f_r = (f(step, 0, 0) - f(-step, 0, 0)) / (2.0 * step);
  const cplx f_zz = (f(0, step, 0) - 2.0 * f0 + f(0, -step, 0)) / h2;
  const double l2 = static_cast<double>(params.l) * params.l;
  const cplx azim = -l2 * f0 / (x.rho * x.rho);
  const cplx radial = f_rr + f_r / x.rho;
  const cplx laplacian = radial + azim + f_zz;
  if (kind == ScalarKind::lg_nonrel) {
    const double hbar = k.hbar(), m = k.mass();
    const cplx f_t = (f(0, 0, dt) - f(0, 0, -dt)) / (2.0 * dt);
    const cplx lhs = cplx(0.0, hbar) * f_t;
    const cplx kinetic = (hbar * hbar / (2.0 * m)) * laplacian;
    const double scale = std::abs(lhs) + (hbar * hbar / (2.0 * m)) *
                                             (std::abs(radial) + std::abs(azim) + std::abs(f_zz));
    return scale > 0.0 ? std::abs(lhs + kinetic) / scale : 0.0;
  }
  const cplx f_tt = (f(0, 0, dt) - 2.0 * f0 + f(0, 0, -dt)) / (dt * dt);
  const double mass_term = 1.0 / (k.lambda_bar() * k.lambda_bar());
  const cplx res = f_tt / (c * c) - laplacian + mass_term * f0;
  const double scale = std::abs(f_tt) / (c * c) + std::abs(radial) + std::abs(azim) + std::abs(f_zz) +
                       mass_term * std::abs(f0);
  return scale > 0.0 ? std::abs(res) / scale : 0.0;
}

}  // namespace diracbeams
