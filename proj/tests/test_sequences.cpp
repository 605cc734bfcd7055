#include "doctest.h"

#include <cmath>
#include <complex>

#include "twoaxis/quadrature.hpp"
#include "twoaxis/sequences.hpp"

using namespace twoaxis;
using doctest::Approx;

namespace {

// Direct numeric Fourier integral of the switching function, split at pulses.
std::complex<double> direct_filter(const PulseSequence& seq, double t, double omega)
{
  std::vector<double> edges{0.0};
  for (double p : seq.pulse_times(t)) {
    edges.push_back(p);
  }
  edges.push_back(t);
  std::complex<double> total = 0.0;
  QuadTolerance tol;
  tol.abs = 1e-14;
  tol.rel = 1e-12;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    auto re = [&](double s) { return sign * std::cos(omega * s); };
    auto im = [&](double s) { return sign * std::sin(omega * s); };
    total += std::complex<double>(integrate_adaptive(re, edges[k], edges[k + 1], tol).value,
                                  integrate_adaptive(im, edges[k], edges[k + 1], tol).value);
  }
  return total;
}

// Sum of squared jumps of the switching function (including the switch-on
// at 0 and switch-off at t): the tail average of omega^2 |f~|^2.
double squared_jumps(const PulseSequence& seq) { return 2.0 + 4.0 * seq.pulse_count(); }

double parseval_lhs(const PulseSequence& seq, double t)
{
  const int lobes = 4000;
  const double step = M_PI / t;
  QuadTolerance tol;
  tol.abs = 1e-13;
  tol.rel = 1e-10;
  double sum = 0.0;
  for (int k = 0; k < lobes; ++k) {
    auto f = [&](double w) { return filter_sq(seq, t, w); };
    sum += integrate_adaptive(f, k * step, (k + 1) * step, tol).value;
  }
  const double omega_max = lobes * step;
  sum += squared_jumps(seq) / omega_max;
  return 2.0 * sum / (2.0 * M_PI);
}

}  // namespace

TEST_CASE("switching function examples")
{
  CHECK(switching(PulseSequence::fid(), 1.0, 0.3) == 1);
  CHECK(switching(PulseSequence::spin_echo(), 1.0, 0.25) == 1);
  CHECK(switching(PulseSequence::spin_echo(), 1.0, 0.75) == -1);
  CHECK(switching(PulseSequence::cpmg(2), 1.0, 0.5) == -1);
}

TEST_CASE("pulse placement and validation")
{
  const auto times = PulseSequence::cpmg(4).pulse_times(8.0);
  REQUIRE(times.size() == 4);
  CHECK(times[0] == Approx(1.0));
  CHECK(times[3] == Approx(7.0));
  CHECK(PulseSequence::fid().pulse_times(3.0).empty());
  CHECK_THROWS_AS(PulseSequence::cpmg(0), std::invalid_argument);
  CHECK_THROWS_AS(PulseSequence::custom({0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(PulseSequence::custom({0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PulseSequence::custom({1.0}), std::invalid_argument);
  CHECK(PulseSequence::cpmg(4).describe() == "cpmg 4");
}

TEST_CASE("filter function limits and direct integration oracle")
{
  CHECK(std::abs(filter_fn(PulseSequence::fid(), 2.5, 0.0) - 2.5) < 1e-15);
  CHECK(std::abs(filter_fn(PulseSequence::fid(), 2.5, 1e-9) - 2.5) < 1e-8);
  CHECK(std::abs(filter_fn(PulseSequence::spin_echo(), 2.5, 1e-9)) < 1e-8);

  const auto cpmg2 = PulseSequence::cpmg(2);
  const double expected = std::norm(direct_filter(cpmg2, 1.0, 4.0 * M_PI));
  CHECK(filter_sq(cpmg2, 1.0, 4.0 * M_PI) == Approx(expected).epsilon(1e-10));

  const auto custom = PulseSequence::custom({0.2, 0.55, 0.9});
  for (double w : {0.3, 2.0, 17.0, 101.0}) {
    const auto d = direct_filter(custom, 1.7, w);
    CHECK(std::abs(filter_fn(custom, 1.7, w) - d) < 1e-10);
  }
}

TEST_CASE("small-omega branch matches the direct integral on both sides")
{
  for (const auto& seq : {PulseSequence::fid(), PulseSequence::cpmg(3),
                          PulseSequence::custom({0.3, 0.75})}) {
    const double t = 3.0;
    for (double w : {0.99e-6 / t, 1.01e-6 / t}) {
      CHECK(std::abs(filter_fn(seq, t, w) - direct_filter(seq, t, w)) < 1e-12 * t);
    }
  }
}

TEST_CASE("conjugate symmetry and parity of the symmetrized filter")
{
  for (int n : {1, 2, 3, 4}) {
    const auto seq = PulseSequence::cpmg(n);
    for (double w : {0.7, 5.3, 40.0}) {
      CHECK(std::abs(filter_fn(seq, 2.0, -w) - std::conj(filter_fn(seq, 2.0, w))) < 1e-13);
      const auto s = filter_fn_sym(seq, 2.0, w);
      if (n % 2 == 1) {
        CHECK(std::abs(s.real()) < 1e-12);
        CHECK(std::abs(filter_fn_sym(seq, 2.0, -w) + s) < 1e-12);
      } else {
        CHECK(std::abs(s.imag()) < 1e-12);
        CHECK(std::abs(filter_fn_sym(seq, 2.0, -w) - s) < 1e-12);
      }
    }
  }
}

TEST_CASE("Parseval identity for the standard sequences")
{
  const double t = 1.3;
  for (const auto& seq : {PulseSequence::fid(), PulseSequence::spin_echo(), PulseSequence::cpmg(2),
                          PulseSequence::cpmg(4), PulseSequence::cpmg(8)}) {
    CAPTURE(seq.describe());
    CHECK(parseval_lhs(seq, t) == Approx(t).epsilon(1e-4));
  }
}

TEST_CASE("balanced sequences have zero DC response")
{
  for (int n = 1; n <= 12; ++n) {
    const auto seq = PulseSequence::cpmg(n);
    CHECK(seq.balanced());
    CHECK(std::abs(filter_at_zero(seq, 3.7)) <= 1e-12);
  }
  const auto sym = PulseSequence::custom({0.1, 0.4, 0.6, 0.8});
  CHECK(sym.balanced());
  CHECK_FALSE(PulseSequence::custom({0.75}).balanced());
  CHECK_FALSE(PulseSequence::fid().balanced());
}

TEST_CASE("mean phase")
{
  const WorkingPoint unit{0.6, 0.8};
  CHECK(mean_phase(PulseSequence::fid(), unit, 2.0) == Approx(1.0));
  CHECK(mean_phase(PulseSequence::spin_echo(), unit, 5.0) == 0.0);
  CHECK(mean_phase(PulseSequence::custom({0.75}), unit, 4.0) == Approx(0.25 * 4.0));
}

TEST_CASE("cosine series reproduces omega^2 |f|^2")
{
  for (const auto& seq : {PulseSequence::fid(), PulseSequence::cpmg(3),
                          PulseSequence::custom({0.15, 0.5, 0.95})}) {
    const double t = 2.2;
    const auto series = filter_series(seq, t);
    CHECK(series.constant == Approx(squared_jumps(seq)));
    for (double w : {0.4, 3.0, 55.0}) {
      double v = series.constant;
      for (const auto& term : series.terms) {
        v += term.weight * std::cos(w * term.lag);
      }
      CHECK(v == Approx(w * w * filter_sq(seq, t, w)).epsilon(1e-10));
    }
  }
}
