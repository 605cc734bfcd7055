#pragma once

#include "twoaxis/units.hpp"

namespace twoaxis {

inline constexpr double default_omega_low = units::hz_to_natural(1.0);
inline constexpr double default_omega_uv = units::rad_per_ns_to_natural(1e4);

/// One-axis classical Gaussian noise: a power law A^2/omega^alpha supported on
/// [omega_low, omega_uv], plus an optional quasi-static part of standard
/// deviation sigma_qs (spectral weight pi*sigma_qs^2*delta(omega)).
struct NoiseSpectrum {
  double amplitude = 0.0;
  double exponent = 1.0;
  double omega_low = default_omega_low;
  double omega_uv = default_omega_uv;
  double sigma_qs = 0.0;

  void validate() const;
  bool has_dynamic() const { return amplitude > 0.0; }

  friend bool operator==(const NoiseSpectrum&, const NoiseSpectrum&) = default;
};

/// Static control field B = (bx, 0, bz). For a singlet-triplet qubit
/// bx is the field gradient dh and bz the exchange J.
struct WorkingPoint {
  double bx = 0.0;
  double bz = 0.0;

  static WorkingPoint singlet_triplet(double exchange, double gradient)
  {
    return {gradient, exchange};
  }

  void validate() const;
  double magnitude() const;
  /// Tilt of the quantization axis from z, in [0, pi/2].
  double tilt() const;
  double sin_tilt() const { return bx / magnitude(); }
  double cos_tilt() const { return bz / magnitude(); }

  friend bool operator==(const WorkingPoint&, const WorkingPoint&) = default;
};

/// Independent noises on the z and x control fields.
struct TwoAxisNoise {
  NoiseSpectrum z;
  NoiseSpectrum x;

  void validate() const
  {
    z.validate();
    x.validate();
  }

  friend bool operator==(const TwoAxisNoise&, const TwoAxisNoise&) = default;
};

/// Power-law part of the spectrum at omega > 0, zero outside the cutoffs.
double psd_eval(const NoiseSpectrum& spec, double omega);

/// Integral of psd_eval(omega)/pi over [lo, hi] in closed form; lo and hi are
/// clipped to the spectrum support.
double band_variance(const NoiseSpectrum& spec, double lo, double hi);

/// Low-frequency variance: power-law band [omega_low, omega1] plus sigma_qs^2.
double sigma0_sq(const NoiseSpectrum& spec, double omega1);

/// Power-law variance above omega1.
double sigma_hf_sq(const NoiseSpectrum& spec, double omega1);

/// Split frequency pinned into the spectrum support.
double clamp_cutoff(const NoiseSpectrum& spec, double omega1);

/// Working-point combinations of a per-axis quantity q:
///   plus/minus         = q_z +- q_x
///   bar_plus/bar_minus = sin^2(chi) q_z +- cos^2(chi) q_x
struct AxisPair {
  double z = 0.0;
  double x = 0.0;
  double plus = 0.0;
  double minus = 0.0;
  double bar_plus = 0.0;
  double bar_minus = 0.0;
};

AxisPair project(double z, double x, const WorkingPoint& wp);

/// sigma0^2 per axis (split frequency clamped into each support) and its
/// working-point combinations.
AxisPair project_variances(const TwoAxisNoise& noise, const WorkingPoint& wp,
                           double omega1);

}  // namespace twoaxis
