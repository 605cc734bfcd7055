#include "twoaxis/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace twoaxis {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Asymptotic antiderivative of cos(lag w) w^-beta (three integration-by-parts terms).
double cos_power_antiderivative(double w, double lag, double beta)
{
  const double s = std::sin(w * lag);
  const double c = std::cos(w * lag);
  const double wb = std::pow(w, -beta);
  const double inv = 1.0 / (lag * w);
  return wb / lag * (s - beta * c * inv - beta * (beta + 1.0) * s * inv * inv);
}

OverlapResult tail_integral(const NoiseSpectrum& spec, const FilterSeries& series, double from,
                            double to)
{
  const double a2 = spec.amplitude * spec.amplitude;
  const double beta = 2.0 + spec.exponent;
  OverlapResult out;
  out.value = series.constant * (std::pow(from, 1.0 - beta) - std::pow(to, 1.0 - beta)) / (beta - 1.0);
  for (const auto& term : series.terms) {
    out.value += term.weight * (cos_power_antiderivative(to, term.lag, beta) -
                                cos_power_antiderivative(from, term.lag, beta));
    out.est_error += std::abs(term.weight) * beta * (beta + 1.0) /
                     (std::pow(term.lag, 3) * std::pow(from, beta + 2.0));
  }
  out.value *= a2;
  out.est_error *= a2;
  out.n_evals = series.terms.size();
  return out;
}

}  // namespace

OverlapResult filtered_integral(const NoiseSpectrum& spec, const PulseSequence& seq, double t,
                                double lo, double hi, const QuadTolerance& tol)
{
  spec.validate();
  if (!(t > 0.0)) {
    throw std::invalid_argument("filtered_integral: t must be positive");
  }
  lo = std::max(lo, spec.omega_low);
  hi = std::min(hi, spec.omega_uv);
  if (!(hi > lo) || spec.amplitude == 0.0) {
    return {};
  }
  const double a2 = spec.amplitude * spec.amplitude;
  const double alpha = spec.exponent;
  auto integrand = [&](double w) { return filter_sq(seq, t, w) * a2 * std::pow(w, -alpha); };
  auto log_integrand = [&](double u) {
    const double w = std::exp(u);
    return w * integrand(w);
  };

  const double lobe = two_pi / t;
  const int lobes = std::max(256, 64 * (seq.pulse_count() + 1));
  const double tail_start = lobe * lobes;

  // Pieces are accumulated in a fixed order so the sum is reproducible.
  std::vector<std::pair<double, double>> log_pieces;
  std::vector<std::pair<double, double>> lobe_pieces;
  const double log_end = std::min(hi, lobe);
  for (double a = lo; a < log_end;) {
    const double b = std::min(a * 10.0, log_end);
    log_pieces.emplace_back(std::log(a), std::log(b));
    a = b;
  }
  const double lobe_end = std::min(hi, tail_start);
  for (double a = std::max(lo, lobe); a < lobe_end;) {
    const double next = (std::floor(a / lobe + 1e-9) + 1.0) * lobe;
    const double b = std::min(next, lobe_end);
    if (b > a) {
      lobe_pieces.emplace_back(a, b);
    }
    a = b;
  }

  const std::size_t n_pieces = log_pieces.size() + lobe_pieces.size() + 1;
  QuadTolerance piece_tol = tol;
  piece_tol.abs = tol.abs / static_cast<double>(n_pieces);

  OverlapResult total;
  for (const auto& [a, b] : log_pieces) {
    total += integrate_adaptive(log_integrand, a, b, piece_tol);
  }
  for (const auto& [a, b] : lobe_pieces) {
    total += integrate_adaptive(integrand, a, b, piece_tol);
  }
  if (hi > tail_start) {
    total += tail_integral(spec, filter_series(seq, t), std::max(lo, tail_start), hi);
  }
  if (total.est_error > tol.target(total.value)) {
    throw NumericalError("filtered_integral: tolerance not met at t = " + std::to_string(t));
  }
  return total;
}

DecayFactors chi_decay_factors(const TwoAxisNoise& noise, const WorkingPoint& wp,
                               const PulseSequence& seq, double t, const QuadTolerance& tol)
{
  noise.validate();
  wp.validate();
  const double f0 = filter_at_zero(seq, t);
  auto exponent = [&](const NoiseSpectrum& spec, double weight, double& err) {
    if (weight == 0.0) {
      return 0.0;
    }
    const auto dyn =
        filtered_integral(spec, seq, t, spec.omega_low, spec.omega_uv, tol).scaled(1.0 / two_pi);
    err += weight * dyn.est_error;
    return weight * (dyn.value + 0.5 * spec.sigma_qs * spec.sigma_qs * f0 * f0);
  };
  const double s = wp.sin_tilt();
  const double c = wp.cos_tilt();
  DecayFactors out;
  out.exponent_z = exponent(noise.z, c * c, out.est_error);
  out.exponent_x = exponent(noise.x, s * s, out.est_error);
  out.c_z = std::exp(-out.exponent_z);
  out.c_x = std::exp(-out.exponent_x);
  return out;
}

OverlapResult s_hf(const NoiseSpectrum& spec, const PulseSequence& seq, double t, double omega1,
                   const QuadTolerance& tol)
{
  const double lo = clamp_cutoff(spec, omega1);
  return filtered_integral(spec, seq, t, lo, spec.omega_uv, tol).scaled(1.0 / std::numbers::pi);
}

AxisPair combined_hf(const TwoAxisNoise& noise, const WorkingPoint& wp, const PulseSequence& seq,
                     double t, double omega1, const QuadTolerance& tol, double* est_error)
{
  wp.validate();
  const auto z = s_hf(noise.z, seq, t, omega1, tol);
  const auto x = s_hf(noise.x, seq, t, omega1, tol);
  if (est_error != nullptr) {
    *est_error = z.est_error + x.est_error;
  }
  return project(z.value, x.value, wp);
}

}  // namespace twoaxis
