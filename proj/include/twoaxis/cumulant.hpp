#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>

#include "twoaxis/model.hpp"
#include "twoaxis/quadrature.hpp"
#include "twoaxis/sequences.hpp"
#include "twoaxis/spectral.hpp"

namespace twoaxis {

enum class EvalMode { first_order, resummed };

struct CoherenceOptions {
  EvalMode mode = EvalMode::resummed;
  bool semilinked = true;
  CutoffPolicy cutoff{};
  QuadTolerance tol{};

  friend bool operator==(const CoherenceOptions& a, const CoherenceOptions& b)
  {
    return a.mode == b.mode && a.semilinked == b.semilinked && a.cutoff == b.cutoff &&
           a.tol.abs == b.tol.abs && a.tol.rel == b.tol.rel;
  }
};

/// Everything the closed forms need at one (sequence, t): static variances,
/// dynamic correlators, first-order decay and filter data.
struct NoiseMoments {
  double t = 0.0;
  double omega1 = 0.0;
  AxisPair sigma0;
  AxisPair hf;
  DecayFactors decay;
  double filter_zero = 0.0;
  double mean_phase = 0.0;
  double est_error = 0.0;
  bool free_evolution = true;
  /// Unbalanced pulsed sequence: only even sums are available.
  bool partial = false;
};

NoiseMoments noise_moments(const TwoAxisNoise& noise, const WorkingPoint& wp,
                           const PulseSequence& seq, double t, const CoherenceOptions& opts = {});

/// eta (pulsed) or eta_FID (free evolution).
double eta(const NoiseMoments& m, const WorkingPoint& wp);
double eta(const TwoAxisNoise& noise, const WorkingPoint& wp, const PulseSequence& seq, double t,
           const CoherenceOptions& opts = {});

/// exp(-Sigma_2k): sqrt(eta) for pulsed sequences, eta_FID^(1/4) for FID.
double even_linked(const NoiseMoments& m, const WorkingPoint& wp, EvalMode mode);
double even_linked(const TwoAxisNoise& noise, const WorkingPoint& wp, const PulseSequence& seq,
                   double t, const CoherenceOptions& opts = {});

/// Semi-linked even exponent (applied as exp(-value)); zero in first-order mode.
double even_semilinked(const NoiseMoments& m, const WorkingPoint& wp, EvalMode mode);
double even_semilinked(const TwoAxisNoise& noise, const WorkingPoint& wp, const PulseSequence& seq,
                       double t, const CoherenceOptions& opts = {});

/// Odd linked and semi-linked sums (phases); nonzero only for free evolution.
struct OddSums {
  double linked = 0.0;
  double semilinked = 0.0;
};

OddSums odd_sums_fid(const NoiseMoments& m, const WorkingPoint& wp, EvalMode mode);
OddSums odd_sums_fid(const TwoAxisNoise& noise, const WorkingPoint& wp, double t,
                     const CoherenceOptions& opts = {});

/// Rotation-angle average <exp(-2i dphi)>.
std::complex<double> rotation_angle_factor(const NoiseMoments& m, const WorkingPoint& wp,
                                           const CoherenceOptions& opts);
std::complex<double> rotation_angle_factor(const TwoAxisNoise& noise, const WorkingPoint& wp,
                                           const PulseSequence& seq, double t,
                                           const CoherenceOptions& opts = {});

/// Second-order axis-tilt contribution to rho_+-(t)/rho_+-(0). Vanishes for
/// pulsed sequences and in first-order mode.
std::complex<double> axis_error_term(const NoiseMoments& m, const WorkingPoint& wp,
                                     const CoherenceOptions& opts);
std::complex<double> axis_error_term(const TwoAxisNoise& noise, const WorkingPoint& wp,
                                     const PulseSequence& seq, double t,
                                     const CoherenceOptions& opts = {});

struct CoherenceParts {
  double c_z = 1.0;
  double c_x = 1.0;
  double even_linked = 1.0;
  double even_semilinked_exp = 0.0;
  double odd_phase = 0.0;
  double odd_semilinked_phase = 0.0;
  std::complex<double> axis_term{0.0, 0.0};
};

struct CoherencePoint {
  double t = 0.0;
  double w = 1.0;
  /// Total phase of rho_+-: W exp(-i phase) = exp(-2i phibar) <exp(-2i dphi)> + axis.
  double phase = 0.0;
  double mean_phase = 0.0;
  CoherenceParts parts;
  bool partial = false;
  double est_error = 0.0;
};

/// Normalized rho_+-(t) rebuilt from the stored decomposition.
std::complex<double> recombine(const CoherencePoint& p);

CoherencePoint coherence(const TwoAxisNoise& noise, const WorkingPoint& wp,
                         const PulseSequence& seq, double t, const CoherenceOptions& opts = {});

inline const double inverse_e = 0.36787944117144233;

/// First time the sampled curve drops below threshold, interpolating
/// ln(-ln W) linearly in ln t between neighbouring samples (exact for
/// stretched exponentials). nullopt when the curve never crosses.
std::optional<double> t2_extract(std::span<const CoherencePoint> curve,
                                 double threshold = inverse_e);

/// First crossing of w_of_t below threshold found by geometric growth of the
/// time window from t_start up to t_bound, then bisection to relative 1e-9.
std::optional<double> find_crossing(const std::function<double(double)>& w_of_t, double t_start,
                                    double t_bound, double threshold = inverse_e,
                                    double growth = 1.1);

std::optional<double> find_t2(const TwoAxisNoise& noise, const WorkingPoint& wp,
                              const PulseSequence& seq, const CoherenceOptions& opts = {},
                              double t_bound = 1e13);

}  // namespace twoaxis
