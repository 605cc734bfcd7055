#include "twoaxis/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace twoaxis {

namespace {

// sin(x)/x with the series branch near zero.
double sinc(double x)
{
  if (std::abs(x) < 1e-6) {
    return 1.0 - x * x / 6.0;
  }
  return std::sin(x) / x;
}

// Signed sum of segment lengths, in units of t.
double signed_length(std::span<const double> fractions)
{
  double sum = 0.0;
  double prev = 0.0;
  double sign = 1.0;
  for (double f : fractions) {
    sum += sign * (f - prev);
    prev = f;
    sign = -sign;
  }
  return sum + sign * (1.0 - prev);
}

void check_time(double t)
{
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("pulse sequence: total time must be positive");
  }
}

}  // namespace

PulseSequence::PulseSequence(SequenceKind kind, std::vector<double> fractions)
    : kind_(kind), fractions_(std::move(fractions))
{
  for (std::size_t i = 0; i < fractions_.size(); ++i) {
    const double f = fractions_[i];
    if (!(f > 0.0 && f < 1.0)) {
      throw std::invalid_argument("pulse sequence: pulse fractions must lie in (0, 1)");
    }
    if (i > 0 && !(f > fractions_[i - 1])) {
      throw std::invalid_argument("pulse sequence: pulse fractions must be strictly increasing");
    }
  }
  balanced_ = !fractions_.empty() && std::abs(signed_length(fractions_)) < 1e-12;
}

PulseSequence PulseSequence::fid() { return {SequenceKind::fid, {}}; }

PulseSequence PulseSequence::cpmg(int n)
{
  if (n < 1) {
    throw std::invalid_argument("pulse sequence: CPMG needs at least one pulse");
  }
  std::vector<double> fractions(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    fractions[static_cast<std::size_t>(k - 1)] = (k - 0.5) / n;
  }
  return {SequenceKind::cpmg, std::move(fractions)};
}

PulseSequence PulseSequence::custom(std::vector<double> fractions)
{
  return {SequenceKind::custom, std::move(fractions)};
}

std::vector<double> PulseSequence::pulse_times(double t) const
{
  std::vector<double> times(fractions_.size());
  std::transform(fractions_.begin(), fractions_.end(), times.begin(),
                 [t](double f) { return f * t; });
  return times;
}

std::string PulseSequence::describe() const
{
  std::ostringstream out;
  switch (kind_) {
    case SequenceKind::fid:
      out << "fid";
      break;
    case SequenceKind::cpmg:
      out << "cpmg " << fractions_.size();
      break;
    case SequenceKind::custom:
      out.precision(17);
      out << "custom ";
      for (std::size_t i = 0; i < fractions_.size(); ++i) {
        out << (i ? "," : "") << fractions_[i];
      }
      break;
  }
  return out.str();
}

int switching(const PulseSequence& seq, double t, double t_prime)
{
  check_time(t);
  if (!(t_prime >= 0.0 && t_prime <= t)) {
    throw std::invalid_argument("switching: time outside [0, t]");
  }
  int flips = 0;
  for (double f : seq.fractions()) {
    if (f * t < t_prime) {
      ++flips;
    }
  }
  return flips % 2 == 0 ? 1 : -1;
}

std::complex<double> filter_fn(const PulseSequence& seq, double t, double omega)
{
  check_time(t);
  // Each segment [a, b] contributes sign * (b - a) sinc(omega (b - a)/2) e^{i omega (a + b)/2}.
  std::complex<double> sum{0.0, 0.0};
  double a = 0.0;
  double sign = 1.0;
  auto add_segment = [&](double b) {
    const double len = b - a;
    const double mid = 0.5 * (a + b);
    sum += sign * len * sinc(0.5 * omega * len) * std::polar(1.0, omega * mid);
    a = b;
    sign = -sign;
  };
  for (double f : seq.fractions()) {
    add_segment(f * t);
  }
  add_segment(t);
  return sum;
}

std::complex<double> filter_fn_sym(const PulseSequence& seq, double t, double omega)
{
  return std::polar(1.0, -0.5 * omega * t) * filter_fn(seq, t, omega);
}

double filter_sq(const PulseSequence& seq, double t, double omega)
{
  return std::norm(filter_fn(seq, t, omega));
}

double filter_at_zero(const PulseSequence& seq, double t)
{
  check_time(t);
  if (seq.balanced()) {
    return 0.0;
  }
  return t * signed_length(seq.fractions());
}

double mean_phase(const PulseSequence& seq, const WorkingPoint& wp, double t)
{
  return 0.5 * wp.magnitude() * filter_at_zero(seq, t);
}

FilterSeries filter_series(const PulseSequence& seq, double t)
{
  check_time(t);
  // f~ = (1/(i omega)) sum_m d_m e^{i omega p_m} over breakpoints p_m.
  std::vector<double> points{0.0};
  std::vector<double> weights{-1.0};
  double sign = 1.0;
  for (double f : seq.fractions()) {
    points.push_back(f * t);
    weights.push_back(2.0 * sign);
    sign = -sign;
  }
  points.push_back(t);
  weights.push_back(sign);

  FilterSeries series;
  for (double d : weights) {
    series.constant += d * d;
  }
  // Lags are merged on a relative grid; CPMG produces many equal lags.
  std::map<long long, FilterSeries::Term> merged;
  const double quantum = t * 1e-13;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double lag = points[j] - points[i];
      const auto key = std::llround(lag / quantum);
      auto [it, inserted] = merged.try_emplace(key, FilterSeries::Term{lag, 0.0});
      it->second.weight += 2.0 * weights[i] * weights[j];
    }
  }
  for (const auto& [key, term] : merged) {
    if (term.weight != 0.0) {
      series.terms.push_back(term);
    }
  }
  return series;
}

}  // namespace twoaxis
