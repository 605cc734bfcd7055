#include "doctest.h"

#include <cmath>
#include <functional>

#include "twoaxis/spectral.hpp"
#include "twoaxis/units.hpp"

using namespace twoaxis;
using doctest::Approx;

namespace {

double simpson(const std::function<double(double)>& g, double a, double b, long n)
{
  n += n % 2;
  const double h = (b - a) / static_cast<double>(n);
  double sum = g(a) + g(b);
  for (long i = 1; i < n; ++i) {
    sum += g(a + static_cast<double>(i) * h) * (i % 2 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

// Dense fixed-grid oracle for int_lo^hi |f~|^2(omega) S(omega) d omega:
// log-grid Simpson below 2/t, 64 points per filter period up to 3000/t, and
// the period-averaged tail (squared jumps) * S / omega^2 in closed form beyond.
double dense_overlap(const std::function<double(double)>& f2, const NoiseSpectrum& spec,
                     double jumps, double t, double lo, double hi)
{
  lo = std::max(lo, spec.omega_low);
  hi = std::min(hi, spec.omega_uv);
  const double a2 = spec.amplitude * spec.amplitude;
  auto g = [&](double w) { return f2(w) * a2 / std::pow(w, spec.exponent); };
  double total = 0.0;
  const double knee = std::min(hi, 2.0 / t);
  if (knee > lo) {
    total += simpson([&](double u) { const double w = std::exp(u); return w * g(w); },
                     std::log(lo), std::log(knee), 40000);
  }
  const double start = std::max(lo, knee);
  const double wall = std::min(hi, 3000.0 / t);
  if (wall > start) {
    const long n = static_cast<long>((wall - start) * t / (2.0 * M_PI) * 64.0) + 64;
    total += simpson(g, start, wall, n);
  }
  if (hi > wall && wall >= start) {
    const double p = 1.0 + spec.exponent;
    total += jumps * a2 * (std::pow(wall, -p) - std::pow(hi, -p)) / p;
  }
  return total;
}

NoiseSpectrum one_over_f(double a, double alpha = 1.0)
{
  NoiseSpectrum s;
  s.amplitude = a;
  s.exponent = alpha;
  return s;
}

}  // namespace

TEST_CASE("quasi-static FID decay factor is Gaussian")
{
  TwoAxisNoise n;
  n.z.sigma_qs = 0.1;
  const WorkingPoint wp{0.0, 0.5};
  for (double t : {1.0, 10.0, std::sqrt(2.0) / 0.1}) {
    const auto d = chi_decay_factors(n, wp, PulseSequence::fid(), t);
    CHECK(d.c_z == Approx(std::exp(-0.01 * t * t / 2.0)).epsilon(1e-13));
    CHECK(d.c_x == 1.0);
  }
  const auto at_t2 = chi_decay_factors(n, wp, PulseSequence::fid(), std::sqrt(2.0) / 0.1);
  CHECK(at_t2.c_z == Approx(std::exp(-1.0)));
}

TEST_CASE("balanced sequences cancel quasi-static noise in the decay factors")
{
  TwoAxisNoise n;
  n.z.sigma_qs = 0.3;
  n.x.sigma_qs = 0.2;
  for (int k : {1, 2, 4}) {
    const auto d = chi_decay_factors(n, WorkingPoint{0.4, 0.3}, PulseSequence::cpmg(k), 50.0);
    CHECK(d.c_z == 1.0);
    CHECK(d.c_x == 1.0);
  }
}

TEST_CASE("1/f echo decay factor agrees with fixed-grid Simpson")
{
  TwoAxisNoise n;
  n.z = one_over_f(1e-3);
  const double t = units::ns_to_natural(1000.0);
  const auto seq = PulseSequence::spin_echo();
  const auto d = chi_decay_factors(n, WorkingPoint{0.0, 0.5}, seq, t);
  const double oracle =
      dense_overlap([&](double w) { return filter_sq(seq, t, w); }, n.z, 6.0, t, 0.0, 1e300) /
      (2.0 * M_PI);
  CHECK(d.exponent_z == Approx(oracle).epsilon(1e-6));
  CHECK(d.c_z == Approx(std::exp(-oracle)).epsilon(1e-9));
}

TEST_CASE("s_hf against the explicit FID kernel")
{
  const auto spec = one_over_f(1e-3);
  const double t = units::ns_to_natural(500.0);
  const auto kernel = [t](double w) {
    const double s = std::sin(0.5 * w * t);
    return 4.0 * s * s / (w * w);
  };
  const double oracle = dense_overlap(kernel, spec, 2.0, t, 1.0 / t, 1e300) / M_PI;
  const auto fid = s_hf(spec, PulseSequence::fid(), t, 1.0 / t);
  CHECK(fid.value == Approx(oracle).epsilon(1e-6));
  const auto se = s_hf(spec, PulseSequence::spin_echo(), t, 1.0 / t);
  CHECK(se.value < fid.value);
  CHECK(s_hf(one_over_f(0.0), PulseSequence::fid(), t, 1.0 / t).value == 0.0);
}

TEST_CASE("lobe integration matches the dense grid")
{
  const double t = 10.0;
  for (double alpha : {0.7, 1.0, 2.0}) {
    NoiseSpectrum spec = one_over_f(0.05, alpha);
    spec.omega_low = 1e-4;
    spec.omega_uv = 1e3;
    for (const auto& seq :
         {PulseSequence::fid(), PulseSequence::spin_echo(), PulseSequence::cpmg(4)}) {
      CAPTURE(alpha);
      CAPTURE(seq.describe());
      const double jumps = 2.0 + 4.0 * seq.pulse_count();
      const double oracle = dense_overlap([&](double w) { return filter_sq(seq, t, w); }, spec,
                                          jumps, t, 0.0, 1e300);
      const auto r = filtered_integral(spec, seq, t, 0.0, 1e300);
      CHECK(r.value == Approx(oracle).epsilon(1e-6));
    }
  }
}

TEST_CASE("tightening the tolerance stays within the error estimate")
{
  const auto spec = one_over_f(2e-3);
  const double t = units::ns_to_natural(300.0);
  for (const auto& seq : {PulseSequence::fid(), PulseSequence::cpmg(4)}) {
    QuadTolerance loose;
    QuadTolerance tight;
    tight.abs = loose.abs / 2.0;
    tight.rel = loose.rel / 2.0;
    const auto a = filtered_integral(spec, seq, t, 0.0, 1e300, loose);
    const auto b = filtered_integral(spec, seq, t, 0.0, 1e300, tight);
    CHECK(std::abs(a.value - b.value) <= a.est_error + 1e-15);
  }
}

TEST_CASE("s_hf with the 1/t cutoff is continuous in t")
{
  const auto spec = one_over_f(1e-3);
  const auto seq = PulseSequence::spin_echo();
  double prev = -1.0;
  for (double t = 100.0; t < 3000.0; t *= 1.0005) {
    const double v = s_hf(spec, seq, t, 1.0 / t).value;
    if (prev > 0.0) {
      CHECK(std::abs(v - prev) <= 2e-3 * prev);
    }
    prev = v;
  }
}

TEST_CASE("combined high-frequency projections")
{
  TwoAxisNoise n;
  n.z = one_over_f(1e-3);
  n.x = one_over_f(3e-3);
  const double t = 800.0;
  const auto seq = PulseSequence::spin_echo();
  const double sz = s_hf(n.z, seq, t, 1.0 / t).value;
  const double sx = s_hf(n.x, seq, t, 1.0 / t).value;
  CHECK(combined_hf(n, WorkingPoint{0.0, 1.0}, seq, t, 1.0 / t).bar_plus == Approx(sx));
  CHECK(combined_hf(n, WorkingPoint{1.0, 0.0}, seq, t, 1.0 / t).bar_plus == Approx(sz));
  TwoAxisNoise sym;
  sym.z = one_over_f(2e-3);
  sym.x = sym.z;
  const auto p = combined_hf(sym, WorkingPoint{1.0, 1.0}, seq, t, 1.0 / t);
  CHECK(std::abs(p.bar_minus) <= 1e-12 * p.bar_plus);
}
