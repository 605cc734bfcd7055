#pragma once

#include "twoaxis/model.hpp"
#include "twoaxis/quadrature.hpp"
#include "twoaxis/sequences.hpp"

namespace twoaxis {

enum class CutoffMode { inverse_time, fixed };

/// Split frequency omega1 between the static and dynamic noise parts.
struct CutoffPolicy {
  CutoffMode mode = CutoffMode::inverse_time;
  double fixed_omega = 0.0;

  double omega1(double t) const { return mode == CutoffMode::inverse_time ? 1.0 / t : fixed_omega; }

  friend bool operator==(const CutoffPolicy&, const CutoffPolicy&) = default;
};

/// int_lo^hi d omega |f~_t(omega)|^2 S(omega) over the power-law part of the
/// spectrum. The oscillatory integrand is integrated in a log variable below
/// the first filter lobe, lobe by lobe above it, and through an asymptotic
/// expansion of the cosine series of |f~|^2 far in the tail.
OverlapResult filtered_integral(const NoiseSpectrum& spec, const PulseSequence& seq, double t,
                                double lo, double hi, const QuadTolerance& tol = {});

struct DecayFactors {
  double c_z = 1.0;
  double c_x = 1.0;
  double exponent_z = 0.0;
  double exponent_x = 0.0;
  double est_error = 0.0;
};

/// First-order decay factors
///   c_z = exp(-cos^2 chi int_0^inf d omega/(2 pi) |f~|^2 S_z),
///   c_x = exp(-sin^2 chi int_0^inf d omega/(2 pi) |f~|^2 S_x);
/// the quasi-static part enters as sigma_qs^2 f~(0)^2 / 2.
DecayFactors chi_decay_factors(const TwoAxisNoise& noise, const WorkingPoint& wp,
                               const PulseSequence& seq, double t, const QuadTolerance& tol = {});

/// S^hf(t) = int_{omega1}^inf d omega/pi |f~|^2 S.
OverlapResult s_hf(const NoiseSpectrum& spec, const PulseSequence& seq, double t, double omega1,
                   const QuadTolerance& tol = {});

/// s_hf for both axes with the working-point combinations S+-, S-bar+-.
AxisPair combined_hf(const TwoAxisNoise& noise, const WorkingPoint& wp, const PulseSequence& seq,
                     double t, double omega1, const QuadTolerance& tol = {},
                     double* est_error = nullptr);

}  // namespace twoaxis
