#include "twoaxis/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace twoaxis {

void NoiseSpectrum::validate() const
{
  if (!(omega_low > 0.0)) {
    throw std::invalid_argument("noise spectrum: omega_low must be positive");
  }
  if (!(omega_uv > omega_low) || !std::isfinite(omega_uv)) {
    throw std::invalid_argument("noise spectrum: omega_uv must be finite and above omega_low");
  }
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw std::invalid_argument("noise spectrum: amplitude must be nonnegative");
  }
  if (!(exponent >= 0.0) || !std::isfinite(exponent)) {
    throw std::invalid_argument("noise spectrum: exponent must be nonnegative");
  }
  if (!(sigma_qs >= 0.0) || !std::isfinite(sigma_qs)) {
    throw std::invalid_argument("noise spectrum: sigma_qs must be nonnegative");
  }
}

void WorkingPoint::validate() const
{
  if (!(bx >= 0.0) || !(bz >= 0.0) || !std::isfinite(bx) || !std::isfinite(bz)) {
    throw std::invalid_argument("working point: field components must be finite and nonnegative");
  }
  if (!(magnitude() > 0.0)) {
    throw std::invalid_argument("working point: |B| must be positive");
  }
}

double WorkingPoint::magnitude() const { return std::hypot(bx, bz); }

double WorkingPoint::tilt() const { return std::atan2(bx, bz); }

double psd_eval(const NoiseSpectrum& spec, double omega)
{
  if (!(omega > 0.0)) {
    throw std::invalid_argument("psd_eval: omega must be positive");
  }
  if (omega < spec.omega_low || omega > spec.omega_uv) {
    return 0.0;
  }
  const double a2 = spec.amplitude * spec.amplitude;
  if (spec.exponent == 1.0) {
    return a2 / omega;
  }
  return a2 * std::pow(omega, -spec.exponent);
}

double band_variance(const NoiseSpectrum& spec, double lo, double hi)
{
  lo = std::max(lo, spec.omega_low);
  hi = std::min(hi, spec.omega_uv);
  if (!(hi > lo) || spec.amplitude == 0.0) {
    return 0.0;
  }
  const double a2 = spec.amplitude * spec.amplitude;
  const double log_ratio = std::log(hi / lo);
  const double p = 1.0 - spec.exponent;
  // lo^p * (exp(p*ln(hi/lo)) - 1) / p, stable as p -> 0.
  double integral = log_ratio;
  if (std::abs(p * log_ratio) > 1e-12) {
    integral = std::pow(lo, p) * std::expm1(p * log_ratio) / p;
  }
  return a2 * integral / std::numbers::pi;
}

double sigma0_sq(const NoiseSpectrum& spec, double omega1)
{
  if (!(omega1 >= spec.omega_low) || !(omega1 <= spec.omega_uv)) {
    throw std::invalid_argument("sigma0_sq: need omega_low <= omega1 <= omega_uv");
  }
  return band_variance(spec, spec.omega_low, omega1) + spec.sigma_qs * spec.sigma_qs;
}

double sigma_hf_sq(const NoiseSpectrum& spec, double omega1)
{
  if (!(omega1 >= spec.omega_low) || !(omega1 <= spec.omega_uv)) {
    throw std::invalid_argument("sigma_hf_sq: need omega_low <= omega1 <= omega_uv");
  }
  return band_variance(spec, omega1, spec.omega_uv);
}

double clamp_cutoff(const NoiseSpectrum& spec, double omega1)
{
  return std::clamp(omega1, spec.omega_low, spec.omega_uv);
}

AxisPair project(double z, double x, const WorkingPoint& wp)
{
  const double s = wp.sin_tilt();
  const double c = wp.cos_tilt();
  const double zs = s * s * z;
  const double xc = c * c * x;
  return {z, x, z + x, z - x, zs + xc, zs - xc};
}

AxisPair project_variances(const TwoAxisNoise& noise, const WorkingPoint& wp,
                           double omega1)
{
  noise.validate();
  wp.validate();
  return project(sigma0_sq(noise.z, clamp_cutoff(noise.z, omega1)),
                 sigma0_sq(noise.x, clamp_cutoff(noise.x, omega1)), wp);
}

}  // namespace twoaxis
