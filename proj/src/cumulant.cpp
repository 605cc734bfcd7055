#include "twoaxis/cumulant.hpp"

#include <cmath>
#include <stdexcept>

namespace twoaxis {

namespace {

// sigma-bar0+^2 t / B, the free-evolution transverse phase scale.
double fid_scale(const NoiseMoments& m, const WorkingPoint& wp)
{
  return m.sigma0.bar_plus * m.t / wp.magnitude();
}

// sigma-bar0+^2 S-bar+^hf / B^2, the pulsed transverse decay scale.
double dd_scale(const NoiseMoments& m, const WorkingPoint& wp)
{
  const double b = wp.magnitude();
  return m.sigma0.bar_plus * m.hf.bar_plus / (b * b);
}

double mixing_prefactor(const WorkingPoint& wp)
{
  const double b = wp.magnitude();
  const double k = wp.bx * wp.bz / (b * b * b);
  return k * k;
}

}  // namespace

NoiseMoments noise_moments(const TwoAxisNoise& noise, const WorkingPoint& wp,
                           const PulseSequence& seq, double t, const CoherenceOptions& opts)
{
  noise.validate();
  wp.validate();
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("coherence: t must be positive");
  }
  NoiseMoments m;
  m.t = t;
  m.omega1 = opts.cutoff.omega1(t);
  if (!(m.omega1 > 0.0)) {
    throw std::invalid_argument("coherence: split frequency omega1 must be positive");
  }
  m.sigma0 = project_variances(noise, wp, m.omega1);
  m.free_evolution = seq.free_evolution();
  m.partial = !m.free_evolution && !seq.balanced();
  m.filter_zero = filter_at_zero(seq, t);
  m.mean_phase = mean_phase(seq, wp, t);
  m.decay = chi_decay_factors(noise, wp, seq, t, opts.tol);
  m.est_error = m.decay.est_error;
  if (!m.free_evolution) {
    double err = 0.0;
    m.hf = combined_hf(noise, wp, seq, t, m.omega1, opts.tol, &err);
    m.est_error += err;
  }
  return m;
}

double eta(const NoiseMoments& m, const WorkingPoint& wp)
{
  if (m.free_evolution) {
    const double y = fid_scale(m, wp);
    return 1.0 / (1.0 + y * y);
  }
  return 1.0 / (1.0 + dd_scale(m, wp));
}

double eta(const TwoAxisNoise& noise, const WorkingPoint& wp, const PulseSequence& seq, double t,
           const CoherenceOptions& opts)
{
  return eta(noise_moments(noise, wp, seq, t, opts), wp);
}

double even_linked(const NoiseMoments& m, const WorkingPoint& wp, EvalMode mode)
{
  if (mode == EvalMode::first_order) {
    if (m.free_evolution) {
      const double y = fid_scale(m, wp);
      return std::exp(-0.25 * y * y);
    }
    return std::exp(-0.5 * dd_scale(m, wp));
  }
  const double e = eta(m, wp);
  return m.free_evolution ? std::sqrt(std::sqrt(e)) : std::sqrt(e);
}

double even_linked(const TwoAxisNoise& noise, const WorkingPoint& wp, const PulseSequence& seq,
                   double t, const CoherenceOptions& opts)
{
  return even_linked(noise_moments(noise, wp, seq, t, opts), wp, opts.mode);
}

double even_semilinked(const NoiseMoments& m, const WorkingPoint& wp, EvalMode mode)
{
  if (mode == EvalMode::first_order) {
    return 0.0;
  }
  const double k = mixing_prefactor(wp);
  if (k == 0.0) {
    return 0.0;
  }
  const double e = eta(m, wp);
  const double minus4 = m.sigma0.minus * m.sigma0.minus;
  if (m.free_evolution) {
    const double t2 = m.t * m.t;
    return 0.5 * e * k * minus4 * m.sigma0.bar_plus * t2 * t2;
  }
  const double f0 = m.filter_zero;
  return 0.5 * e * k *
         (f0 * f0 * m.hf.bar_plus * minus4 + m.hf.minus * m.hf.minus * m.sigma0.bar_plus);
}

double even_semilinked(const TwoAxisNoise& noise, const WorkingPoint& wp, const PulseSequence& seq,
                       double t, const CoherenceOptions& opts)
{
  return even_semilinked(noise_moments(noise, wp, seq, t, opts), wp, opts.mode);
}

OddSums odd_sums_fid(const NoiseMoments& m, const WorkingPoint& wp, EvalMode mode)
{
  if (!m.free_evolution) {
    return {};
  }
  const double y = fid_scale(m, wp);
  if (mode == EvalMode::first_order) {
    return {0.5 * y, 0.0};
  }
  OddSums out;
  out.linked = 0.5 * std::atan(y);
  const double sin2 = 2.0 * wp.sin_tilt() * wp.cos_tilt();
  const double minus4 = m.sigma0.minus * m.sigma0.minus;
  out.semilinked =
      -sin2 * sin2 / (8.0 * wp.magnitude()) * eta(m, wp) * minus4 * m.t * m.t * m.t;
  return out;
}

OddSums odd_sums_fid(const TwoAxisNoise& noise, const WorkingPoint& wp, double t,
                     const CoherenceOptions& opts)
{
  return odd_sums_fid(noise_moments(noise, wp, PulseSequence::fid(), t, opts), wp, opts.mode);
}

namespace {

CoherenceParts rotation_parts(const NoiseMoments& m, const WorkingPoint& wp,
                              const CoherenceOptions& opts)
{
  CoherenceParts p;
  p.c_z = m.decay.c_z;
  p.c_x = m.decay.c_x;
  p.even_linked = even_linked(m, wp, opts.mode);
  const auto odd = odd_sums_fid(m, wp, opts.mode);
  p.odd_phase = odd.linked;
  if (opts.semilinked) {
    p.even_semilinked_exp = even_semilinked(m, wp, opts.mode);
    p.odd_semilinked_phase = odd.semilinked;
  }
  return p;
}

std::complex<double> rotation_from_parts(const CoherenceParts& p)
{
  const double modulus = p.c_z * p.c_x * p.even_linked * std::exp(-p.even_semilinked_exp);
  return std::polar(modulus, -(p.odd_phase + p.odd_semilinked_phase));
}

// Quasi-static Gaussian averages at second order in the tilt:
//   <dchi^2 (1 - cos 2phi) + (i/2) dchi^2 sin 2phi>
// with <dchi^2 e^{-2i phi}> = <dchi^2> Phi / (1 + i y), the transverse
// variance correlated with the quadratic phase it generates.
std::complex<double> axis_from_rotation(const NoiseMoments& m, const WorkingPoint& wp,
                                        std::complex<double> rotation)
{
  const double b = wp.magnitude();
  const double tilt_var = m.sigma0.bar_plus / (b * b);
  if (tilt_var == 0.0) {
    return {0.0, 0.0};
  }
  const std::complex<double> phi = std::polar(1.0, -2.0 * m.mean_phase) * rotation;
  const std::complex<double> g = tilt_var * phi / std::complex<double>(1.0, fid_scale(m, wp));
  return tilt_var - 0.5 * (g.real() + g);
}

}  // namespace

std::complex<double> rotation_angle_factor(const NoiseMoments& m, const WorkingPoint& wp,
                                           const CoherenceOptions& opts)
{
  return rotation_from_parts(rotation_parts(m, wp, opts));
}

std::complex<double> rotation_angle_factor(const TwoAxisNoise& noise, const WorkingPoint& wp,
                                           const PulseSequence& seq, double t,
                                           const CoherenceOptions& opts)
{
  return rotation_angle_factor(noise_moments(noise, wp, seq, t, opts), wp, opts);
}

std::complex<double> axis_error_term(const NoiseMoments& m, const WorkingPoint& wp,
                                     const CoherenceOptions& opts)
{
  if (!m.free_evolution || opts.mode == EvalMode::first_order) {
    return {0.0, 0.0};
  }
  return axis_from_rotation(m, wp, rotation_angle_factor(m, wp, opts));
}

std::complex<double> axis_error_term(const TwoAxisNoise& noise, const WorkingPoint& wp,
                                     const PulseSequence& seq, double t,
                                     const CoherenceOptions& opts)
{
  return axis_error_term(noise_moments(noise, wp, seq, t, opts), wp, opts);
}

std::complex<double> recombine(const CoherencePoint& p)
{
  return std::polar(1.0, -2.0 * p.mean_phase) * rotation_from_parts(p.parts) + p.parts.axis_term;
}

CoherencePoint coherence(const TwoAxisNoise& noise, const WorkingPoint& wp,
                         const PulseSequence& seq, double t, const CoherenceOptions& opts)
{
  const auto m = noise_moments(noise, wp, seq, t, opts);
  CoherencePoint out;
  out.t = t;
  out.mean_phase = m.mean_phase;
  out.partial = m.partial;
  out.est_error = m.est_error;
  out.parts = rotation_parts(m, wp, opts);
  const auto rotation = rotation_from_parts(out.parts);
  if (m.free_evolution && opts.mode == EvalMode::resummed) {
    out.parts.axis_term = axis_from_rotation(m, wp, rotation);
  }
  const auto relative = rotation + std::polar(1.0, 2.0 * m.mean_phase) * out.parts.axis_term;
  out.w = std::abs(relative);
  out.phase = 2.0 * m.mean_phase - std::arg(relative);
  return out;
}

std::optional<double> t2_extract(std::span<const CoherencePoint> curve, double threshold)
{
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("t2_extract: threshold must lie in (0, 1)");
  }
  if (curve.empty()) {
    return std::nullopt;
  }
  if (curve.front().w < threshold) {
    throw std::invalid_argument("t2_extract: curve starts below threshold");
  }
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const auto& lo = curve[i - 1];
    const auto& hi = curve[i];
    if (!(hi.t > lo.t)) {
      throw std::invalid_argument("t2_extract: sample times must increase");
    }
    if (hi.w >= threshold) {
      continue;
    }
    const double target = std::log(-std::log(threshold));
    if (lo.t > 0.0 && lo.w < 1.0 && hi.w > 0.0) {
      const double y0 = std::log(-std::log(lo.w));
      const double y1 = std::log(-std::log(hi.w));
      const double x0 = std::log(lo.t);
      const double x1 = std::log(hi.t);
      return std::exp(x0 + (target - y0) * (x1 - x0) / (y1 - y0));
    }
    // Fallback: log-linear in W.
    const double l0 = std::log(lo.w);
    const double l1 = hi.w > 0.0 ? std::log(hi.w) : -745.0;
    return lo.t + (std::log(threshold) - l0) * (hi.t - lo.t) / (l1 - l0);
  }
  return std::nullopt;
}

std::optional<double> find_crossing(const std::function<double(double)>& w_of_t, double t_start,
                                    double t_bound, double threshold, double growth)
{
  if (!(t_start > 0.0) || !(growth > 1.0)) {
    throw std::invalid_argument("find_crossing: need t_start > 0 and growth > 1");
  }
  double lo = t_start;
  while (w_of_t(lo) < threshold) {
    lo *= 0.5;
    if (lo < 1e-12 * t_start) {
      return std::nullopt;
    }
  }
  double hi = lo;
  for (;;) {
    hi = lo * growth;
    if (hi > t_bound) {
      return std::nullopt;
    }
    if (w_of_t(hi) < threshold) {
      break;
    }
    lo = hi;
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (w_of_t(mid) < threshold) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<double> find_t2(const TwoAxisNoise& noise, const WorkingPoint& wp,
                              const PulseSequence& seq, const CoherenceOptions& opts,
                              double t_bound)
{
  const double scale = noise.z.sigma_qs + noise.x.sigma_qs + noise.z.amplitude +
                       noise.x.amplitude;
  const double t_start = scale > 0.0 ? 0.05 / scale : 1.0;
  auto w = [&](double t) { return coherence(noise, wp, seq, t, opts).w; };
  return find_crossing(w, t_start, t_bound);
}

}  // namespace twoaxis
